//! Analytic realization of the state functions and of the transformed
//! Casimir machinery: gradient-term identity, commutator probe, exact
//! per-component bookkeeping, and the polynomial invariants built from
//! Lagrange projectors.
//!
//! The rescaling factor is F⁻¹(χ) = exp(b·atanh sin χ); it satisfies
//! ∂F/∂χ = −(b/cos χ)·F, which is the sign that makes
//! H_Sc φ_{Nℓ} = N² φ_{Nℓ} hold for the states below.

use crate::decomp::{jacobi_to_gegenbauer, DecompositionTable};
use crate::error::{Error, Result};
use crate::exact::{triangular_change_of_basis, BPoly, Rational, SPoly};
use crate::orthopoly::{
    gegenbauer, gegenbauer_derivative, gegenbauer_exact, gegenbauer_second_derivative, jacobi,
    jacobi_derivative, jacobi_second_derivative,
};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Stable atanh(sin χ) = ln tan(π/4 + χ/2); no cancellation near the walls.
pub fn atanh_sin(chi: f64) -> f64 {
    (FRAC_PI_4 + 0.5 * chi).tan().ln()
}

/// Value and first two χ-derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    fn product(self, o: Jet) -> Jet {
        Jet {
            value: self.value * o.value,
            d1: self.d1 * o.value + self.value * o.d1,
            d2: self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        }
    }
}

fn rescale_factor_jet(b: f64, chi: f64) -> Jet {
    let sec = 1.0 / chi.cos();
    let v = (b * atanh_sin(chi)).exp();
    let d1 = b * sec * v;
    let d2 = b * sec * chi.tan() * v + b * sec * d1;
    Jet { value: v, d1, d2 }
}

fn cos_power_jet(p: u32, chi: f64) -> Jet {
    if p == 0 {
        return Jet { value: 1.0, d1: 0.0, d2: 0.0 };
    }
    let (c, s) = (chi.cos(), chi.sin());
    let pf = p as f64;
    let value = c.powi(p as i32);
    let d1 = -pf * c.powi(p as i32 - 1) * s;
    let mut d2 = -pf * value;
    if p >= 2 {
        d2 += pf * (pf - 1.0) * c.powi(p as i32 - 2) * s * s;
    }
    Jet { value, d1, d2 }
}

/// Jet of g(sin χ) from (g, g′, g″) at s = sin χ.
fn of_sin_jet(g: f64, dg: f64, d2g: f64, chi: f64) -> Jet {
    let (c, s) = (chi.cos(), chi.sin());
    Jet {
        value: g,
        d1: c * dg,
        d2: -s * dg + c * c * d2g,
    }
}

/// Which state function a sampler evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    /// F⁻¹(χ) itself.
    RescaleFactor,
    /// S_{Kℓ}(χ) = cos^ℓχ C_{K−ℓ}^{ℓ+1}(sin χ), quasi-radial factor of a
    /// hyperspherical harmonic.
    QuasiRadial { k: usize, ell: usize },
    /// S̃_{Kℓ} = F⁻¹ S_{Kℓ}, the exponentially rescaled basis function.
    Rescaled { k: usize, ell: usize },
    /// φ_{Nℓ} = F⁻¹ cos^ℓχ P_{N−1−ℓ}^{α,β}(sin χ), the perturbed state.
    Perturbed { n_principal: usize, ell: usize },
    /// U_{Nℓ} = cos χ · φ_{Nℓ}, the 1D Schrödinger normalization (d = 2).
    Schroedinger { n_principal: usize, ell: usize },
}

/// Evaluates a state function and its first two χ-derivatives analytically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSampler {
    kind: StateKind,
    b: f64,
}

impl StateSampler {
    pub fn new(kind: StateKind, b: f64) -> Self {
        assert!(b.is_finite());
        match kind {
            StateKind::QuasiRadial { k, ell } | StateKind::Rescaled { k, ell } => {
                assert!(k >= ell, "need K ≥ ℓ");
            }
            StateKind::Perturbed { n_principal, ell }
            | StateKind::Schroedinger { n_principal, ell } => {
                assert!(n_principal >= 1 && ell < n_principal, "need 0 ≤ ℓ ≤ N−1");
            }
            StateKind::RescaleFactor => {}
        }
        StateSampler { kind, b }
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Largest polynomial index involved; used for quadrature order choices.
    pub fn index_scale(&self) -> usize {
        match self.kind {
            StateKind::RescaleFactor => 1,
            StateKind::QuasiRadial { k, .. } | StateKind::Rescaled { k, .. } => k + 1,
            StateKind::Perturbed { n_principal, .. }
            | StateKind::Schroedinger { n_principal, .. } => n_principal,
        }
    }

    /// Value and first two χ-derivatives at χ ∈ (−π/2, π/2).
    pub fn eval(&self, chi: f64) -> Result<Jet> {
        if !chi.is_finite() || chi.abs() >= FRAC_PI_2 {
            return Err(Error::Domain {
                value: chi,
                domain: "(-pi/2, pi/2)",
            });
        }
        let b = self.b;
        let s = chi.sin();
        let jet = match self.kind {
            StateKind::RescaleFactor => rescale_factor_jet(b, chi),
            StateKind::QuasiRadial { k, ell } => {
                let lam = ell as f64 + 1.0;
                let n = k - ell;
                let g = of_sin_jet(
                    gegenbauer(n, lam, s),
                    gegenbauer_derivative(n, lam, s),
                    gegenbauer_second_derivative(n, lam, s),
                    chi,
                );
                cos_power_jet(ell as u32, chi).product(g)
            }
            StateKind::Rescaled { k, ell } => {
                let lam = ell as f64 + 1.0;
                let n = k - ell;
                let g = of_sin_jet(
                    gegenbauer(n, lam, s),
                    gegenbauer_derivative(n, lam, s),
                    gegenbauer_second_derivative(n, lam, s),
                    chi,
                );
                rescale_factor_jet(b, chi)
                    .product(cos_power_jet(ell as u32, chi))
                    .product(g)
            }
            StateKind::Perturbed { n_principal, ell } => {
                perturbed_jet(n_principal, ell, b, chi, 0)
            }
            StateKind::Schroedinger { n_principal, ell } => {
                perturbed_jet(n_principal, ell, b, chi, 1)
            }
        };
        Ok(jet)
    }
}

fn perturbed_jet(n_principal: usize, ell: usize, b: f64, chi: f64, extra_cos: u32) -> Jet {
    let n = n_principal - 1 - ell;
    let alpha = ell as f64 - b + 0.5;
    let beta = ell as f64 + b + 0.5;
    let s = chi.sin();
    let p = of_sin_jet(
        jacobi(n, alpha, beta, s),
        jacobi_derivative(n, alpha, beta, s),
        jacobi_second_derivative(n, alpha, beta, s),
        chi,
    );
    rescale_factor_jet(b, chi)
        .product(cos_power_jet(ell as u32 + extra_cos, chi))
        .product(p)
}

fn interior_grid(points: usize) -> impl Iterator<Item = f64> {
    let h = PI / (points as f64 + 1.0);
    (1..=points).map(move |j| -FRAC_PI_2 + j as f64 * h)
}

/// Worst absolute residual of
/// N²φ_{Nℓ} = Σ_K c_{Kℓ}(b)(K+1)² S̃_{Kℓ} − (2b/cosχ) F⁻¹ cos^ℓχ ∂P_n/∂χ
/// over a uniform interior grid. The first term is the transformed Casimir
/// acting eigenvalue-wise on the S̃-components; the second is the gradient
/// term evaluated in closed form.
pub fn gradient_identity_residual(
    n_principal: usize,
    ell: usize,
    b: f64,
    grid_points: usize,
) -> Result<f64> {
    let table = jacobi_to_gegenbauer(n_principal, ell)?;
    let weights: Vec<(usize, f64)> = table.iter().map(|(k, c)| (k, c.eval_f64(b))).collect();
    let samplers: Vec<StateSampler> = table
        .iter()
        .map(|(k, _)| StateSampler::new(StateKind::Rescaled { k, ell }, b))
        .collect();
    let phi = StateSampler::new(StateKind::Perturbed { n_principal, ell }, b);
    let n = n_principal - 1 - ell;
    let alpha = ell as f64 - b + 0.5;
    let beta = ell as f64 + b + 0.5;

    let mut worst = 0.0f64;
    for chi in interior_grid(grid_points) {
        let mut casimir = 0.0;
        for ((k, c), sampler) in weights.iter().zip(&samplers) {
            let ev = ((k + 1) * (k + 1)) as f64;
            casimir += c * ev * sampler.eval(chi)?.value;
        }
        let s = chi.sin();
        let grad = 2.0
            * b
            * (b * atanh_sin(chi)).exp()
            * chi.cos().powi(ell as i32)
            * jacobi_derivative(n, alpha, beta, s);
        let rhs = (n_principal * n_principal) as f64 * phi.eval(chi)?.value;
        worst = worst.max((casimir - grad - rhs).abs());
    }
    Ok(worst)
}

/// H_Sc f = −f″ + 2 tanχ f′ + [(ℓ(ℓ+1)+b²) sec²χ − b(2ℓ+1) tanχ secχ + 1] f,
/// applied through a sampler's analytic derivatives.
fn scarf_apply(jet: Jet, ell: usize, b: f64, chi: f64) -> f64 {
    let sec = 1.0 / chi.cos();
    let tan = chi.tan();
    let l = ell as f64;
    let potential = (l * (l + 1.0) + b * b) * sec * sec - b * (2.0 * l + 1.0) * tan * sec + 1.0;
    -jet.d2 + 2.0 * tan * jet.d1 + potential * jet.value
}

/// Discrete L² norm of ([H_Sc, K̃²+1] φ_{Nℓ}) on a uniform interior grid:
/// K̃²+1 acts eigenvalue-wise on the S̃-components, H_Sc differentially
/// through analytic derivatives. Zero (to rounding) iff b = 0 or ℓ = N−1.
pub fn commutator_probe(
    n_principal: usize,
    ell: usize,
    b: f64,
    grid_points: usize,
) -> Result<f64> {
    let table = jacobi_to_gegenbauer(n_principal, ell)?;
    let weights: Vec<(usize, f64)> = table.iter().map(|(k, c)| (k, c.eval_f64(b))).collect();
    let samplers: Vec<StateSampler> = table
        .iter()
        .map(|(k, _)| StateSampler::new(StateKind::Rescaled { k, ell }, b))
        .collect();
    let nn = (n_principal * n_principal) as f64;
    let h = PI / (grid_points as f64 + 1.0);

    let mut sum = 0.0;
    for chi in interior_grid(grid_points) {
        let mut diff = 0.0;
        for ((k, c), sampler) in weights.iter().zip(&samplers) {
            let ev = ((k + 1) * (k + 1)) as f64;
            let jet = sampler.eval(chi)?;
            // H(K̃²+1)φ − (K̃²+1)Hφ, with Hφ = N²φ component-wise
            diff += c * ev * (scarf_apply(jet, ell, b, chi) - nn * jet.value);
        }
        sum += diff * diff;
    }
    Ok((h * sum).sqrt())
}

/// Cross-check of the differential realization of the transformed Casimir:
/// (K̃²+1)f = (K²+1)f − (b² sec²χ + b tanχ secχ) f + 2b secχ f′ applied to
/// S̃_{Kℓ} must reproduce (K+1)² S̃_{Kℓ}. Returns the worst grid residual.
pub fn transformed_casimir_residual(
    k: usize,
    ell: usize,
    b: f64,
    grid_points: usize,
) -> Result<f64> {
    let sampler = StateSampler::new(StateKind::Rescaled { k, ell }, b);
    let ev = ((k + 1) * (k + 1)) as f64;
    let l = ell as f64;
    let mut worst = 0.0f64;
    for chi in interior_grid(grid_points) {
        let jet = sampler.eval(chi)?;
        let sec = 1.0 / chi.cos();
        let tan = chi.tan();
        let free = -jet.d2 + 2.0 * tan * jet.d1 + l * (l + 1.0) * sec * sec * jet.value
            + jet.value;
        let generated = -(b * b * sec * sec + b * tan * sec) * jet.value + 2.0 * b * sec * jet.d1;
        worst = worst.max((free + generated - ev * jet.value).abs());
    }
    Ok(worst)
}

/// One component of the exact spectral bookkeeping.
#[derive(Debug, Clone, Serialize)]
pub struct LedgerEntry {
    pub k: usize,
    /// c_{Kℓ}(b) · (K+1)², the eigenvalue-wise part on this component
    pub eigen_term: BPoly,
    /// what the gradient term redistributes onto this component
    pub gradient_term: BPoly,
    pub total: BPoly,
    /// N² · c_{Kℓ}(b)
    pub target: BPoly,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerReport {
    pub n_principal: usize,
    pub ell: usize,
    pub entries: Vec<LedgerEntry>,
    pub all_match: bool,
}

/// Exact per-component ledger of H_Sc φ_{Nℓ} = N² φ_{Nℓ}: the eigenvalue
/// action contributes c_K (K+1)² on each component, the gradient term
/// −2b Σ_K c_K ∂_s C_{K−ℓ}^{ℓ+1} is re-decomposed over the same basis, and
/// the per-component totals must equal N² c_K as BPoly identities.
pub fn component_ledger(n_principal: usize, ell: usize) -> Result<LedgerReport> {
    let table = jacobi_to_gegenbauer(n_principal, ell)?;
    let top = n_principal - 1 - ell;
    let basis: Vec<SPoly> = (0..=top)
        .map(|j| gegenbauer_exact(j, ell as u32 + 1))
        .collect();

    let mut grad = SPoly::zero();
    for (k, c) in table.iter() {
        grad = &grad + &gegenbauer_exact(k - ell, ell as u32 + 1).derivative().scale_bpoly(c);
    }
    grad = grad.scale_bpoly(&BPoly::monomial(Rational::from_integer(-2), 1));
    let grad_coeffs = triangular_change_of_basis(&grad, &basis)?;

    let nn = Rational::from_integer((n_principal * n_principal) as i64);
    let mut entries = Vec::new();
    for ((k, c), gradient_term) in table.iter().zip(grad_coeffs) {
        let ev = Rational::from_integer(((k + 1) * (k + 1)) as i64);
        let eigen_term = c.scale(&ev);
        let total = &eigen_term + &gradient_term;
        let target = c.scale(&nn);
        let matches = total == target;
        entries.push(LedgerEntry {
            k,
            eigen_term,
            gradient_term,
            total,
            target,
            matches,
        });
    }
    let all_match = entries.iter().all(|e| e.matches);
    Ok(LedgerReport {
        n_principal,
        ell,
        entries,
        all_match,
    })
}

/// Lagrange projectors over the node eigenvalues {(K+1)² : K ∈ [ℓ, N−1]}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectorPolynomial {
    n_principal: usize,
    ell: usize,
}

impl ProjectorPolynomial {
    pub fn new(n_principal: usize, ell: usize) -> Result<Self> {
        if n_principal == 0 || ell >= n_principal {
            return Err(Error::InvalidParameter(format!(
                "need 0 ≤ ℓ ≤ N−1, got N={n_principal}, ℓ={ell}"
            )));
        }
        Ok(ProjectorPolynomial { n_principal, ell })
    }

    /// (K, (K+1)²) for K ∈ [ℓ, N−1].
    pub fn node_eigenvalues(&self) -> Vec<(usize, Rational)> {
        (self.ell..self.n_principal)
            .map(|k| (k, Rational::from_integer(((k + 1) * (k + 1)) as i64)))
            .collect()
    }

    /// Π_{K≠K₀} (x − (K+1)²)/((K₀+1)² − (K+1)²): maps the node (K₀+1)² to 1
    /// and every other node to 0.
    pub fn lagrange_weight(&self, target_k: usize, x: &Rational) -> Rational {
        let target = Rational::from_integer(((target_k + 1) * (target_k + 1)) as i64);
        let mut acc = Rational::one();
        for (k, node) in self.node_eigenvalues() {
            if k == target_k {
                continue;
            }
            acc = acc * ((x - &node) / (&target - &node));
        }
        acc
    }
}

/// Per-component outcome of applying the polynomial invariants to the
/// unit-coefficient mixture Σ_K Ỹ_{Kℓm}.
#[derive(Debug, Clone, Serialize)]
pub struct DynamicalComponent {
    pub k: usize,
    /// printed polynomial's output on this component (ℓ = N−2 and ℓ = N−3 only)
    pub literal: Option<BPoly>,
    /// generalized operator D = Σ N²c_K 𝒫^{[(K+1)²]} output
    pub generalized: BPoly,
    /// N² c_{Kℓ}(b)
    pub target: BPoly,
    pub literal_at_b: Option<Rational>,
    pub generalized_at_b: Rational,
    pub target_at_b: Rational,
    pub literal_matches: Option<bool>,
    pub generalized_matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DynamicalReport {
    pub n_principal: usize,
    pub ell: usize,
    pub b: Rational,
    pub components: Vec<DynamicalComponent>,
    pub generalized_all_match: bool,
    pub literal_available: bool,
    /// literal output equals N²c_K on every component below the top one
    pub literal_matches_below_top: bool,
    /// literal output equals N²c_K on the top (K = N−1) component as well
    pub literal_matches_top: bool,
}

/// The printed second/third-order polynomial in the Casimir eigenvalue x,
/// evaluated at a node; b stays symbolic.
fn literal_weight(n_principal: usize, ell: usize, x: &Rational) -> Option<BPoly> {
    let n = n_principal as i64;
    let nn = Rational::from_integer(n * n);
    let n1 = Rational::from_integer((n - 1) * (n - 1));
    if ell + 2 == n_principal {
        // x (x − (N−1)²)/(N² − (N−1)²) − b (x + 2N−1)(x − N²)/((N−1)² − N²)
        let t1 = &(x * &(x - &n1)) / &(&nn - &n1);
        let r2 = &((x + &Rational::from_integer(2 * n - 1)) * (x - &nn)) / &(&n1 - &nn);
        Some(&BPoly::constant(t1) + &BPoly::monomial(-r2, 1))
    } else if ell + 3 == n_principal {
        let n2 = Rational::from_integer((n - 2) * (n - 2));
        let t1 = &(x * &((x - &n1) * (x - &n2))) / &(&(&nn - &n1) * &(&nn - &n2));
        let pre2 = Rational::new(-(n - 1), 2 * (n - 2));
        let r2 = &pre2
            * &(&((x + &Rational::from_integer(2 * n - 1)) * &((x - &nn) * (x - &n2)))
                / &(&(&n1 - &nn) * &(&n1 - &n2)));
        let pre3 = Rational::new(1, 2);
        let r3 = &pre3
            * &(&((x + &Rational::from_integer(4 * (n - 1))) * &((x - &nn) * (x - &n1)))
                / &(&(&n2 - &nn) * &(&n2 - &n1)));
        Some(&(&BPoly::constant(t1) + &BPoly::monomial(r2, 1)) + &BPoly::monomial(r3, 2))
    } else {
        None
    }
}

/// Applies both the printed polynomial invariant (where one exists) and the
/// generalized projector operator D = Σ_K N²c_{Kℓ}(b)𝒫^{[(K+1)²]} to the
/// unit-coefficient mixture, eigenvalue-wise and in exact arithmetic.
/// Discrepancies land in the report, never in an error.
pub fn dynamical_polynomial_apply(
    n_principal: usize,
    ell: usize,
    b: &Rational,
) -> Result<DynamicalReport> {
    let table = jacobi_to_gegenbauer(n_principal, ell)?;
    let projectors = ProjectorPolynomial::new(n_principal, ell)?;
    let nn = Rational::from_integer((n_principal * n_principal) as i64);

    let mut components = Vec::new();
    for (k, _) in table.iter() {
        let x = Rational::from_integer(((k + 1) * (k + 1)) as i64);

        // D's action on this component: Σ_{K0} N² c_{K0}(b) · 𝒫^{[(K0+1)²]}(x)
        let mut generalized = BPoly::zero();
        for (k0, c0) in table.iter() {
            let w = projectors.lagrange_weight(k0, &x);
            generalized = &generalized + &c0.scale(&(&nn * &w));
        }

        let literal = literal_weight(n_principal, ell, &x);
        let target = table.coefficient(k).unwrap().scale(&nn);

        let literal_at_b = literal.as_ref().map(|p| p.eval(b));
        let generalized_at_b = generalized.eval(b);
        let target_at_b = target.eval(b);
        let literal_matches = literal.as_ref().map(|p| *p == target);
        let generalized_matches = generalized == target;

        components.push(DynamicalComponent {
            k,
            literal,
            generalized,
            target,
            literal_at_b,
            generalized_at_b,
            target_at_b,
            literal_matches,
            generalized_matches,
        });
    }

    let generalized_all_match = components.iter().all(|c| c.generalized_matches);
    let literal_available = components.iter().any(|c| c.literal.is_some());
    let literal_matches_below_top = literal_available
        && components
            .iter()
            .filter(|c| c.k + 1 < n_principal)
            .all(|c| c.literal_matches == Some(true));
    let literal_matches_top = literal_available
        && components
            .iter()
            .filter(|c| c.k + 1 == n_principal)
            .all(|c| c.literal_matches == Some(true));

    Ok(DynamicalReport {
        n_principal,
        ell,
        b: b.clone(),
        components,
        generalized_all_match,
        literal_available,
        literal_matches_below_top,
        literal_matches_top,
    })
}

/// Convenience: the decomposition table used by the checks above.
pub fn mixture_table(n_principal: usize, ell: usize) -> Result<DecompositionTable> {
    jacobi_to_gegenbauer(n_principal, ell)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rescale_factor_is_one_at_center() {
        for b in [-1.3, 0.0, 0.7] {
            let s = StateSampler::new(StateKind::RescaleFactor, b);
            assert!((s.eval(0.0).unwrap().value - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn lowest_quasi_radial_is_constant_one() {
        let s = StateSampler::new(StateKind::QuasiRadial { k: 0, ell: 0 }, 0.9);
        for chi in [-1.5, -0.3, 0.0, 1.2] {
            let jet = s.eval(chi).unwrap();
            assert!((jet.value - 1.0).abs() < 1e-15);
            assert!(jet.d1.abs() < 1e-15 && jet.d2.abs() < 1e-15);
        }
    }

    #[test]
    fn first_excited_state_closed_form() {
        // φ_{20}(χ) = F⁻¹(χ)(−b + (3/2) sin χ)
        let b = 0.37;
        let phi = StateSampler::new(StateKind::Perturbed { n_principal: 2, ell: 0 }, b);
        for chi in [-1.3, -0.4, 0.25, 1.45] {
            let expect = (b * atanh_sin(chi)).exp() * (-b + 1.5 * chi.sin());
            assert!((phi.eval(chi).unwrap().value - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn rescaled_factorizes_pointwise() {
        let b = 0.6;
        for (k, ell) in [(2usize, 0usize), (3, 1), (5, 5)] {
            let st = StateSampler::new(StateKind::Rescaled { k, ell }, b);
            let s = StateSampler::new(StateKind::QuasiRadial { k, ell }, b);
            let f = StateSampler::new(StateKind::RescaleFactor, b);
            for chi in interior_grid(41) {
                let lhs = st.eval(chi).unwrap().value;
                let rhs = f.eval(chi).unwrap().value * s.eval(chi).unwrap().value;
                assert!((lhs - rhs).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn stretched_state_is_pure_rescaled_harmonic() {
        // φ_{N,N−1} coincides with S̃_{(N−1)(N−1)}
        let b = 0.45;
        for n in 1..=5usize {
            let phi = StateSampler::new(
                StateKind::Perturbed { n_principal: n, ell: n - 1 },
                b,
            );
            let st = StateSampler::new(StateKind::Rescaled { k: n - 1, ell: n - 1 }, b);
            for chi in interior_grid(17) {
                assert!((phi.eval(chi).unwrap().value - st.eval(chi).unwrap().value).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let b = 0.52;
        let samplers = [
            StateSampler::new(StateKind::RescaleFactor, b),
            StateSampler::new(StateKind::Rescaled { k: 3, ell: 1 }, b),
            StateSampler::new(StateKind::Perturbed { n_principal: 4, ell: 1 }, b),
            StateSampler::new(StateKind::Schroedinger { n_principal: 3, ell: 0 }, b),
        ];
        let h = 1e-5;
        for s in &samplers {
            for chi in [-0.9, -0.1, 0.6, 1.1] {
                let jet = s.eval(chi).unwrap();
                let fp = s.eval(chi + h).unwrap().value;
                let fm = s.eval(chi - h).unwrap().value;
                let d1 = (fp - fm) / (2.0 * h);
                let d2 = (fp - 2.0 * jet.value + fm) / (h * h);
                assert!((jet.d1 - d1).abs() < 1e-6 * jet.d1.abs().max(1.0), "{:?}", s.kind());
                assert!((jet.d2 - d2).abs() < 1e-4 * jet.d2.abs().max(1.0), "{:?}", s.kind());
            }
        }
    }

    #[test]
    fn domain_guard() {
        let s = StateSampler::new(StateKind::RescaleFactor, 0.4);
        assert!(matches!(s.eval(FRAC_PI_2), Err(Error::Domain { .. })));
        assert!(matches!(s.eval(-2.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn gradient_identity_first_mixture() {
        // symbolic expansion gives exact cancellation; the grid sees rounding
        assert!(gradient_identity_residual(2, 0, 0.5, 200).unwrap() < 1e-12);
        assert!(gradient_identity_residual(2, 0, 0.0, 200).unwrap() < 1e-12);
        // ℓ = N−1 has a constant polynomial: the gradient term vanishes
        assert!(gradient_identity_residual(4, 3, 0.8, 200).unwrap() < 1e-12);
    }

    #[test]
    fn commutator_dichotomy_spot() {
        assert!(commutator_probe(3, 0, 0.0, 200).unwrap() < 1e-10);
        assert!(commutator_probe(3, 2, 0.5, 200).unwrap() < 1e-10);
        assert!(commutator_probe(2, 0, 0.5, 200).unwrap() > 1e-3);
    }

    #[test]
    fn transformed_casimir_agrees_on_its_eigenbasis() {
        for (k, ell) in [(0usize, 0usize), (2, 0), (3, 1), (4, 4)] {
            for b in [0.0, 0.3, 0.9] {
                let r = transformed_casimir_residual(k, ell, b, 150).unwrap();
                assert!(r < 1e-9, "K={k} ℓ={ell} b={b}: {r}");
            }
        }
    }

    #[test]
    fn ledger_reproduces_bookkeeping() {
        // ℓ = N−2: the gradient term moves (2N−1)(−b) onto the lower
        // component, closing (N−1)²(−b) + (2N−1)(−b) = N²(−b).
        let report = component_ledger(5, 3).unwrap();
        assert!(report.all_match);
        let low = &report.entries[0];
        assert_eq!(low.k, 3);
        assert_eq!(low.eigen_term, BPoly::monomial(Rational::from_integer(-16), 1));
        assert_eq!(low.gradient_term, BPoly::monomial(Rational::from_integer(-9), 1));
        assert_eq!(low.target, BPoly::monomial(Rational::from_integer(-25), 1));

        for n in 1..=8usize {
            for ell in 0..n {
                assert!(component_ledger(n, ell).unwrap().all_match, "N={n} ℓ={ell}");
            }
        }
    }

    #[test]
    fn projector_annihilates_complementary_node() {
        let p = ProjectorPolynomial::new(4, 2).unwrap();
        // projector onto (N−1)² = 9 (K = 2), evaluated at the K = 3 node 16
        let w = p.lagrange_weight(2, &Rational::from_integer(16));
        assert!(w.is_zero());
        let at_own = p.lagrange_weight(2, &Rational::from_integer(9));
        assert_eq!(at_own, Rational::one());
    }

    #[test]
    fn printed_polynomial_first_mixture() {
        // N = 2, ℓ = 0: K = 0 output −4b = N²c₀₀; K = 1 output 4 vs N²c₁₀ = 3
        let b = Rational::new(1, 2);
        let report = dynamical_polynomial_apply(2, 0, &b).unwrap();
        assert!(report.literal_available);
        let k0 = &report.components[0];
        assert_eq!(k0.literal.as_ref().unwrap(), &BPoly::monomial(Rational::from_integer(-4), 1));
        assert_eq!(k0.literal_matches, Some(true));
        let k1 = &report.components[1];
        assert_eq!(k1.literal.as_ref().unwrap(), &BPoly::constant(Rational::from_integer(4)));
        assert_eq!(k1.target, BPoly::constant(Rational::from_integer(3)));
        assert_eq!(k1.literal_matches, Some(false));
        assert!(report.generalized_all_match);
        assert!(report.literal_matches_below_top);
        assert!(!report.literal_matches_top);
    }

    #[test]
    fn printed_polynomial_second_mixture() {
        // ℓ = N−3 at N = 4: below-top components match, top differs by the
        // normalization of c_{N−1}
        let b = Rational::new(2, 3);
        let report = dynamical_polynomial_apply(4, 1, &b).unwrap();
        assert!(report.literal_available);
        assert!(report.literal_matches_below_top);
        assert!(!report.literal_matches_top);
        assert!(report.generalized_all_match);
    }

    #[test]
    fn generalized_operator_matches_everywhere() {
        let b = Rational::new(-3, 7);
        for n in 1..=6usize {
            for ell in 0..n {
                let report = dynamical_polynomial_apply(n, ell, &b).unwrap();
                assert!(report.generalized_all_match, "N={n} ℓ={ell}");
            }
        }
    }
}
