//! Gauss–Legendre quadrature and the inner-product machinery used for
//! orthogonality and normalization checks of the bound states.

use crate::error::{Error, Result};
use crate::operators::StateSampler;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

/// Nodes and weights of an n-point Gauss–Legendre rule on (−1, 1).
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Strictly increasing, symmetric about 0.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// ∫_{−1}^{1} f
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// ∫_{lo}^{hi} f via the affine map.
    pub fn integrate_over(&self, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        let mid = 0.5 * (hi + lo);
        let rad = 0.5 * (hi - lo);
        rad * self.integrate(|x| f(mid + rad * x))
    }
}

/// P_n(x) and P_n′(x) by the forward recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut prev = 1.0;
    let mut cur = x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    let deriv = if (x * x - 1.0).abs() < f64::EPSILON {
        // endpoint value, not reached by interior root finding
        0.5 * (n * (n + 1)) as f64 * if x > 0.0 { 1.0 } else { (-1.0f64).powi(n as i32 + 1) }
    } else {
        n as f64 * (x * cur - prev) / (x * x - 1.0)
    };
    (cur, deriv)
}

/// Newton iteration from Chebyshev initial guesses; nodes converged to
/// 1e−15, weights 2/((1−x²)P′²). The rule is mirror-symmetrized, so node
/// and weight symmetry hold bit-exactly.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n < 1 {
        return Err(Error::InvalidParameter("rule order must be ≥ 1".into()));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n / 2 {
        // guess near +1 for i = 0, proceeding inward
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ConvergenceFailure(format!(
                "Legendre root {i} of rule {n} did not converge"
            )));
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        let (_, dp) = legendre_with_derivative(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = 2.0 / (dp * dp);
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Integration measure on χ ∈ (−π/2, π/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// dχ — pairs with states in Schrödinger normalization U.
    AngleUniform,
    /// cos^d χ dχ — pairs with quasi-radial states φ.
    CosPower(u32),
}

impl Measure {
    fn weight(&self, chi: f64) -> f64 {
        match self {
            Measure::AngleUniform => 1.0,
            Measure::CosPower(d) => chi.cos().powi(*d as i32),
        }
    }
}

/// ⟨f, g⟩ over χ ∈ (−π/2, π/2) under the measure, by the mapped rule.
pub fn inner_product(
    f: &StateSampler,
    g: &StateSampler,
    rule: &QuadratureRule,
    measure: Measure,
) -> Result<f64> {
    let mut acc = 0.0;
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let chi = FRAC_PI_2 * x;
        let fv = f.eval(chi)?.value;
        let gv = g.eval(chi)?.value;
        acc += w * fv * gv * measure.weight(chi);
    }
    Ok(FRAC_PI_2 * acc)
}

/// Pairwise inner products of a state family, normalized to unit diagonal.
#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    /// normalized matrix G_ij / √(G_ii G_jj)
    pub matrix: Vec<Vec<f64>>,
    /// √(G_ii) of the raw matrix
    pub norms: Vec<f64>,
    pub max_off_diagonal: f64,
    pub order_used: usize,
    /// doubling the rule order moved no entry by more than 1e−10
    pub stable: bool,
}

fn raw_gram(
    states: &[StateSampler],
    rule: &QuadratureRule,
    measure: Measure,
) -> Result<Vec<Vec<f64>>> {
    let n = states.len();
    let mut raw = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = inner_product(&states[i], &states[j], rule, measure)?;
            raw[i][j] = v;
            raw[j][i] = v;
        }
    }
    Ok(raw)
}

fn finish_report(raw: Vec<Vec<f64>>, order_used: usize, stable: bool) -> GramReport {
    let n = raw.len();
    let norms: Vec<f64> = (0..n).map(|i| raw[i][i].sqrt()).collect();
    let mut matrix = vec![vec![0.0; n]; n];
    let mut max_off = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            matrix[i][j] = raw[i][j] / (norms[i] * norms[j]);
            if i != j {
                max_off = max_off.max(matrix[i][j].abs());
            }
        }
    }
    GramReport {
        matrix,
        norms,
        max_off_diagonal: max_off,
        order_used,
        stable,
    }
}

/// Gram matrix with an explicit rule (no stability probing).
pub fn gram_matrix(
    states: &[StateSampler],
    rule: &QuadratureRule,
    measure: Measure,
) -> Result<GramReport> {
    if states.is_empty() {
        return Err(Error::InvalidParameter("empty state list".into()));
    }
    Ok(finish_report(raw_gram(states, rule, measure)?, rule.order(), true))
}

/// Gram matrix with automatic order selection: starts at 128 + 32·(largest
/// state index) and doubles until every raw entry is stable to 1e−10 or the
/// order cap 4096 is hit (`stable` records which).
pub fn gram_matrix_auto(states: &[StateSampler], measure: Measure) -> Result<GramReport> {
    if states.is_empty() {
        return Err(Error::InvalidParameter("empty state list".into()));
    }
    let scale = states.iter().map(StateSampler::index_scale).max().unwrap_or(1);
    let mut order = 128 + 32 * scale;
    let mut rule = gauss_legendre(order)?;
    let mut raw = raw_gram(states, &rule, measure)?;
    loop {
        let next_order = 2 * order;
        rule = gauss_legendre(next_order)?;
        let probe = raw_gram(states, &rule, measure)?;
        let drift = raw
            .iter()
            .flatten()
            .zip(probe.iter().flatten())
            .fold(0.0f64, |m, (a, c)| m.max((a - c).abs()));
        if drift <= 1e-10 {
            return Ok(finish_report(probe, next_order, true));
        }
        raw = probe;
        order = next_order;
        if order >= 4096 {
            return Ok(finish_report(raw, order, false));
        }
    }
}
