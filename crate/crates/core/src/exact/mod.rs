//! Exact arithmetic foundation: arbitrary-precision rationals, polynomials
//! in the deformation parameter `b` over the rationals, polynomials in
//! s = sin χ over that ring, and a triangular change-of-basis solver.

mod bpoly;
mod rational;
mod spoly;

pub use bpoly::{BPoly, Parity};
pub use rational::Rational;
pub use spoly::SPoly;

use crate::error::{Error, Result};

/// Expresses `target` in a basis graded by s-degree: basis element k must
/// have exact s-degree k with a leading coefficient that divides exactly
/// during back-substitution. Returns coefficients e_k with
/// Σ e_k · basis_k = target, solved from the highest degree down.
pub fn triangular_change_of_basis(target: &SPoly, basis: &[SPoly]) -> Result<Vec<BPoly>> {
    for (k, elem) in basis.iter().enumerate() {
        if elem.degree() != Some(k) {
            return Err(Error::InvalidParameter(format!(
                "basis element {k} has s-degree {:?}, expected {k}",
                elem.degree()
            )));
        }
    }
    let span = basis.len().checked_sub(1).ok_or_else(|| {
        Error::InvalidParameter("empty basis".into())
    })?;
    if let Some(target_deg) = target.degree() {
        if target_deg > span {
            return Err(Error::DegreeMismatch {
                target: target_deg,
                span,
            });
        }
    }

    let mut residue = target.clone();
    let mut out = vec![BPoly::zero(); basis.len()];
    for k in (0..basis.len()).rev() {
        let top = residue.coeff(k);
        if top.is_zero() {
            continue;
        }
        let lead = basis[k].leading().expect("graded basis element is nonzero");
        let e = top
            .try_div_exact(lead)
            .map_err(|_| Error::InexactDivision { degree: k })?;
        residue = &residue - &basis[k].scale_bpoly(&e);
        out[k] = e;
    }
    debug_assert!(residue.is_zero(), "back-substitution left a nonzero residue");
    Ok(out)
}
