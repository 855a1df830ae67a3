//! Finite-difference bound-state solver for the 1D quasi-radial problem
//! on S^{d+1} with the trigonometric Scarf perturbation.
//!
//! Two assemblies share one eigensolver:
//!
//! * [`build_hamiltonian`] — central second difference of −d²/dχ² + V(χ) on
//!   a uniform vertex grid with implicit Dirichlet endpoints. Simple and
//!   O(h²) on channels whose endpoint behavior Dirichlet actually selects.
//! * [`build_weighted_hamiltonian`] — the same operator in Sturm–Liouville
//!   form −(E²g′)′ = (ε − ε₀)E²g for g = U/E with E the exact nodeless
//!   envelope, discretized as a cell-centered finite-volume scheme with
//!   harmonic-averaged flux coefficients. At ℓ = 0 the singular endpoints
//!   sit in the limit-circle regime where both Frobenius exponents {b, 1−b}
//!   vanish at the wall, so the plain Dirichlet matrix converges to the
//!   wrong self-adjoint extension (its spectrum heads to (n+b+1/2)²); the
//!   weighted form carries the physical boundary condition in its weight
//!   and is the production path.
//!
//! Eigenvalues come from Sturm-sequence bisection, eigenvectors from
//! inverse iteration with one reorthogonalization pass.

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

/// Discretized 1D quasi-radial problem on S^{d+1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralProblem {
    d: u32,
    channel: u32,
    b: f64,
    grid_points: usize,
}

impl SpectralProblem {
    /// Validates the Jacobi-weight integrability guard
    /// α = a−b+1/2 > −1 and β = a+b+1/2 > −1 with a = K_{d+1} + (d−2)/2.
    pub fn new(d: u32, channel: u32, b: f64, grid_points: usize) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidParameter("d must be ≥ 1".into()));
        }
        if grid_points < 1 {
            return Err(Error::InvalidParameter("grid must have ≥ 1 point".into()));
        }
        if !b.is_finite() {
            return Err(Error::InvalidParameter("b must be finite".into()));
        }
        let a = channel as f64 + (d as f64 - 2.0) / 2.0;
        let alpha = a - b + 0.5;
        let beta = a + b + 0.5;
        if alpha <= -1.0 || beta <= -1.0 {
            return Err(Error::NonNormalizable { alpha, beta });
        }
        Ok(SpectralProblem {
            d,
            channel,
            b,
            grid_points,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn channel(&self) -> u32 {
        self.channel
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    /// a = K_{d+1} + (d−2)/2.
    pub fn a(&self) -> f64 {
        self.channel as f64 + (self.d as f64 - 2.0) / 2.0
    }
}

/// V_ScI(χ) = (b² + a(a+1))/cos²χ − b(2a+1) tan χ / cos χ.
pub fn scarf_potential(a: f64, b: f64, chi: f64) -> f64 {
    let c = chi.cos();
    (b * b + a * (a + 1.0)) / (c * c) - b * (2.0 * a + 1.0) * chi.tan() / c
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length must be n−1");
        Tridiagonal { diag, off }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Number of eigenvalues strictly below `lambda`, by counting negative
    /// pivots of the LDLᵀ factorization (Sturm sequence).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let n = self.n();
        if n == 0 {
            return 0;
        }
        let scale = self
            .diag
            .iter()
            .chain(self.off.iter())
            .fold(1.0f64, |m, &x| m.max(x.abs()));
        let guard = f64::EPSILON * scale * 1e-3 + f64::MIN_POSITIVE;
        let mut count = 0;
        let mut q = self.diag[0] - lambda;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let q_safe = if q.abs() < guard {
                if q < 0.0 {
                    -guard
                } else {
                    guard
                }
            } else {
                q
            };
            q = (self.diag[i] - lambda) - self.off[i - 1] * self.off[i - 1] / q_safe;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin bounds on the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo - 1.0, hi + 1.0)
    }

    /// y = (T − shift·I) x
    fn apply_shifted(&self, shift: f64, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = (self.diag[i] - shift) * x[i];
            if i > 0 {
                acc += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * x[i + 1];
            }
            y[i] = acc;
        }
        y
    }

    /// Solves (T − shift·I) x = rhs by tridiagonal LU with partial pivoting;
    /// near-singular pivots are guarded (that is the point of inverse
    /// iteration).
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut dl: Vec<f64> = self.off.clone();
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - shift).collect();
        let mut du: Vec<f64> = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let mut x = rhs.to_vec();

        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                let fact = if d[i] != 0.0 { dl[i] / d[i] } else { 0.0 };
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }

        for i in 0..n.saturating_sub(1) {
            if swapped[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= dl[i] * x[i];
        }

        let tiny = f64::MIN_POSITIVE.sqrt();
        let safe = |v: f64| {
            if v.abs() < tiny {
                if v < 0.0 {
                    -tiny
                } else {
                    tiny
                }
            } else {
                v
            }
        };
        x[n - 1] /= safe(d[n - 1]);
        if n >= 2 {
            x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / safe(d[n - 2]);
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / safe(d[i]);
        }
        x
    }
}

/// Computed eigenvalues (strictly increasing) and eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub grid_step: f64,
}

impl Spectrum {
    /// Sturm consistency: exactly k eigenvalues lie below λ_k − δ and at
    /// least k+1 below λ_k + δ.
    pub fn sturm_consistent(&self, t: &Tridiagonal) -> bool {
        self.eigenvalues.iter().enumerate().all(|(k, &lam)| {
            let delta = 1e-8 * lam.abs().max(1.0);
            t.sturm_count(lam - delta) == k && t.sturm_count(lam + delta) >= k + 1
        })
    }
}

/// Sign changes of a grid function, skipping entries below 1e−8 of the peak.
pub fn sign_changes(v: &[f64]) -> usize {
    let peak = v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if peak == 0.0 {
        return 0;
    }
    let mut count = 0;
    let mut last = 0.0f64;
    for &x in v {
        if x.abs() <= 1e-8 * peak {
            continue;
        }
        if last != 0.0 && x.signum() != last.signum() {
            count += 1;
        }
        last = x;
    }
    count
}

const BISECTION_CAP: usize = 160;

/// The `count` lowest eigenvalues by Sturm bisection (interval width below
/// 1e−12·max(1,|λ|)), eigenvectors by inverse iteration with one
/// reorthogonalization pass against the previously computed vectors.
pub fn eigen_solve(t: &Tridiagonal, count: usize, grid_step: f64) -> Result<Spectrum> {
    let n = t.n();
    if count > n {
        return Err(Error::InvalidParameter(format!(
            "requested {count} eigenvalues from a {n}-point grid"
        )));
    }
    let (glo, ghi) = t.gershgorin();
    if !glo.is_finite() || !ghi.is_finite() {
        return Err(Error::ConvergenceFailure("non-finite matrix entries".into()));
    }

    let mut eigenvalues = Vec::with_capacity(count);
    for k in 0..count {
        let mut lo = glo;
        let mut hi = ghi;
        let mut iter = 0;
        loop {
            let mid = 0.5 * (lo + hi);
            if (hi - lo) < 1e-12 * mid.abs().max(1.0) {
                break;
            }
            if t.sturm_count(mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
            iter += 1;
            if iter > BISECTION_CAP {
                return Err(Error::ConvergenceFailure(format!(
                    "bisection for eigenvalue {k} exceeded {BISECTION_CAP} iterations"
                )));
            }
        }
        let lam = 0.5 * (lo + hi);
        if !lam.is_finite() {
            return Err(Error::ConvergenceFailure("NaN contamination in bisection".into()));
        }
        eigenvalues.push(lam);
    }

    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(count);
    for &lam in &eigenvalues {
        let mut v = vec![1.0; n];
        normalize(&mut v);
        for _ in 0..3 {
            v = t.solve_shifted(lam, &v);
            normalize(&mut v);
            let residual = t
                .apply_shifted(lam, &v)
                .iter()
                .fold(0.0f64, |m, &x| m.max(x.abs()));
            if residual < 1e-10 * lam.abs().max(1.0) {
                break;
            }
        }
        for prev in &vectors {
            let dot: f64 = v.iter().zip(prev).map(|(a, c)| a * c).sum();
            for (vi, pi) in v.iter_mut().zip(prev) {
                *vi -= dot * pi;
            }
        }
        normalize(&mut v);
        if let Some(first) = v.iter().find(|x| x.abs() > 1e-8) {
            if *first < 0.0 {
                for vi in v.iter_mut() {
                    *vi = -*vi;
                }
            }
        }
        vectors.push(v);
    }

    Ok(Spectrum {
        eigenvalues,
        eigenvectors: Some(vectors),
        grid_step,
    })
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// Central second difference of −d²/dχ² + V on the vertex grid
/// χ_j = −π/2 + j·h, h = π/(M+1), j = 1..M, implicit Dirichlet endpoints:
/// diagonal 2/h² + V(χ_j), off-diagonal −1/h².
pub fn build_hamiltonian(problem: &SpectralProblem) -> Tridiagonal {
    let m = problem.grid_points;
    let h = PI / (m as f64 + 1.0);
    let a = problem.a();
    let b = problem.b;
    let diag = (1..=m)
        .map(|j| {
            let chi = -FRAC_PI_2 + j as f64 * h;
            2.0 / (h * h) + scarf_potential(a, b, chi)
        })
        .collect();
    let off = vec![-1.0 / (h * h); m - 1];
    Tridiagonal::new(diag, off)
}

impl SpectralProblem {
    /// Grid step of the plain vertex discretization.
    pub fn grid_step_plain(&self) -> f64 {
        PI / (self.grid_points as f64 + 1.0)
    }

    /// Grid step of the cell-centered weighted discretization.
    pub fn grid_step_weighted(&self) -> f64 {
        PI / self.grid_points as f64
    }
}

/// Weighted (Sturm–Liouville) discretization: tridiagonal matrix whose
/// eigenvalues, shifted by `shift` = (a+1)², approximate the spectrum.
#[derive(Debug, Clone)]
pub struct WeightedHamiltonian {
    pub tri: Tridiagonal,
    pub grid_step: f64,
    /// ε = λ + shift
    pub shift: f64,
}

/// Stable atanh(sin χ) = ln tan(π/4 + χ/2) (no cancellation near the walls).
pub fn atanh_sin(chi: f64) -> f64 {
    (std::f64::consts::FRAC_PI_4 + 0.5 * chi).tan().ln()
}

/// E²(χ) where E = exp(b·atanh sin χ)·cos^{a+1}χ is the nodeless envelope
/// solving the channel with ε₀ = (a+1)².
fn envelope_sq(a: f64, b: f64, chi: f64) -> f64 {
    (2.0 * b * atanh_sin(chi)).exp() * chi.cos().powf(2.0 * a + 2.0)
}

fn cell_rule() -> &'static crate::quadrature::QuadratureRule {
    static RULE: OnceLock<crate::quadrature::QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(8).expect("fixed small rule"))
}

/// Cell-centered finite-volume assembly of −(E²g′)′ = λE²g with natural
/// boundary conditions: nodes χ_j = −π/2 + (j+1/2)h, h = π/M; flux
/// coefficients are harmonic averages of E² between nodes, weights are cell
/// averages of E². The zero mode g = const is an exact discrete eigenvector,
/// so the lowest eigenvalue carries no discretization error at all.
pub fn build_weighted_hamiltonian(problem: &SpectralProblem) -> WeightedHamiltonian {
    let m = problem.grid_points;
    let h = PI / m as f64;
    let a = problem.a();
    let b = problem.b;
    let rule = cell_rule();
    let node = |j: usize| -FRAC_PI_2 + (j as f64 + 0.5) * h;
    let face = |j: usize| -FRAC_PI_2 + j as f64 * h;

    // harmonic average between nodes j and j+1
    let p_hat: Vec<f64> = (0..m - 1)
        .map(|j| h / rule.integrate_over(node(j), node(j + 1), |x| 1.0 / envelope_sq(a, b, x)))
        .collect();
    let w: Vec<f64> = (0..m)
        .map(|j| rule.integrate_over(face(j), face(j + 1), |x| envelope_sq(a, b, x)) / h)
        .collect();

    let h2 = h * h;
    let mut diag = vec![0.0; m];
    for j in 0..m {
        let left = if j > 0 { p_hat[j - 1] } else { 0.0 };
        let right = if j + 1 < m { p_hat[j] } else { 0.0 };
        diag[j] = (left + right) / (h2 * w[j]);
    }
    let off: Vec<f64> = (0..m - 1)
        .map(|j| -p_hat[j] / (h2 * (w[j] * w[j + 1]).sqrt()))
        .collect();

    let a1 = a + 1.0;
    WeightedHamiltonian {
        tri: Tridiagonal::new(diag, off),
        grid_step: h,
        shift: a1 * a1,
    }
}

/// Which matrix assembly a solve should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Discretization {
    /// Spec'd central-difference stencil with implicit Dirichlet endpoints.
    PlainDirichlet,
    /// Envelope-weighted finite-volume form (production path).
    WeightedEnvelope,
}

/// Lowest `count` eigenvalues ε of the channel at one grid.
pub fn solve_channel(
    d: u32,
    channel: u32,
    b: f64,
    grid: usize,
    count: usize,
    disc: Discretization,
) -> Result<Vec<f64>> {
    let problem = SpectralProblem::new(d, channel, b, grid)?;
    match disc {
        Discretization::PlainDirichlet => {
            let t = build_hamiltonian(&problem);
            Ok(eigen_solve(&t, count, problem.grid_step_plain())?.eigenvalues)
        }
        Discretization::WeightedEnvelope => {
            let wh = build_weighted_hamiltonian(&problem);
            let spec = eigen_solve(&wh.tri, count, wh.grid_step)?;
            Ok(spec.eigenvalues.iter().map(|l| l + wh.shift).collect())
        }
    }
}

/// Raw and Richardson-extrapolated eigenvalues from the (M, 2M+1) grid pair.
#[derive(Debug, Clone, Serialize)]
pub struct RichardsonValues {
    pub raw: Vec<f64>,
    pub extrapolated: Vec<f64>,
}

/// Two-grid O(h²)-error cancellation; the step ratio is taken from the
/// actual grids (exactly 2 for the vertex scheme, (2M+1)/M for the
/// cell-centered one).
pub fn solve_channel_richardson(
    d: u32,
    channel: u32,
    b: f64,
    grid: usize,
    count: usize,
    disc: Discretization,
) -> Result<RichardsonValues> {
    let coarse = solve_channel(d, channel, b, grid, count, disc)?;
    let fine = solve_channel(d, channel, b, 2 * grid + 1, count, disc)?;
    let (h1, h2) = match disc {
        Discretization::PlainDirichlet => (
            PI / (grid as f64 + 1.0),
            PI / (2.0 * grid as f64 + 2.0),
        ),
        Discretization::WeightedEnvelope => (PI / grid as f64, PI / (2.0 * grid as f64 + 1.0)),
    };
    let r2 = (h1 / h2) * (h1 / h2);
    let extrapolated = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (r2 * f - c) / (r2 - 1.0))
        .collect();
    Ok(RichardsonValues {
        raw: coarse,
        extrapolated,
    })
}

/// One channel's finding in a degeneracy audit.
#[derive(Debug, Clone, Serialize)]
pub struct ChannelFinding {
    pub channel: u32,
    pub node_index: usize,
    pub eigenvalue: f64,
    pub expected: f64,
    pub ok: bool,
}

/// Degeneracy audit report: the level ε = (N−1)(N−1+d) + d²/4 (= N² for
/// d = 2) must appear in every channel K_{d+1} = 0..N−1 at node index
/// n = N−1−K_{d+1}.
#[derive(Debug, Clone, Serialize)]
pub struct DegeneracyReport {
    pub n_principal: usize,
    pub d: u32,
    pub b: f64,
    pub expected_eigenvalue: f64,
    pub channels: Vec<ChannelFinding>,
    /// Σ(2ℓ+1) over confirmed channels; meaningful for d = 2.
    pub multiplicity: Option<usize>,
    pub expected_multiplicity: Option<usize>,
    pub all_ok: bool,
}

/// Solves every channel of the level and confirms the shared eigenvalue
/// within `tol·max(1, |ε|)` after Richardson extrapolation.
pub fn degeneracy_audit(
    n_principal: usize,
    d: u32,
    b: f64,
    grid: usize,
    tol: f64,
) -> Result<DegeneracyReport> {
    if n_principal == 0 {
        return Err(Error::InvalidParameter("N must be ≥ 1".into()));
    }
    // the audit refuses to run unless every channel is normalizable
    for channel in 0..n_principal as u32 {
        SpectralProblem::new(d, channel, b, grid)?;
    }
    let nf = n_principal as f64 - 1.0;
    let expected = nf * (nf + d as f64) + (d as f64) * (d as f64) / 4.0;

    let mut channels = Vec::new();
    for channel in 0..n_principal as u32 {
        let node_index = n_principal - 1 - channel as usize;
        let values = solve_channel_richardson(
            d,
            channel,
            b,
            grid,
            node_index + 1,
            Discretization::WeightedEnvelope,
        )?;
        let eigenvalue = values.extrapolated[node_index];
        let ok = (eigenvalue - expected).abs() <= tol * expected.abs().max(1.0);
        channels.push(ChannelFinding {
            channel,
            node_index,
            eigenvalue,
            expected,
            ok,
        });
    }

    let (multiplicity, expected_multiplicity) = if d == 2 {
        let sum = channels
            .iter()
            .filter(|c| c.ok)
            .map(|c| 2 * c.channel as usize + 1)
            .sum::<usize>();
        (Some(sum), Some(n_principal * n_principal))
    } else {
        (None, None)
    };

    let all_ok = channels.iter().all(|c| c.ok)
        && multiplicity
            .zip(expected_multiplicity)
            .is_none_or(|(m, e)| m == e);

    Ok(DegeneracyReport {
        n_principal,
        d,
        b,
        expected_eigenvalue: expected,
        channels,
        multiplicity,
        expected_multiplicity,
        all_ok,
    })
}
