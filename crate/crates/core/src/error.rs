//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Change-of-basis target has higher degree than the basis spans.
    #[error("target degree {target} exceeds basis span (max degree {span})")]
    DegreeMismatch { target: usize, span: usize },

    /// A leading coefficient failed to divide exactly during back-substitution.
    #[error("inexact division by the leading coefficient of basis element {degree}")]
    InexactDivision { degree: usize },

    /// Argument outside the admissible domain of an evaluator.
    #[error("argument {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    /// Jacobi-weight integrability guard failed: both alpha and beta must exceed -1.
    #[error("non-normalizable channel: alpha = {alpha}, beta = {beta} (both must be > -1)")]
    NonNormalizable { alpha: f64, beta: f64 },

    /// An iterative solver exceeded its iteration cap.
    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    /// Precondition violation on an operation's integer parameters.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
