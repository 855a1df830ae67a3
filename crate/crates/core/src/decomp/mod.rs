//! Exact decomposition of the perturbed quasi-radial functions into
//! rescaled hyperspherical components.
//!
//! With the common factor F⁻¹(χ) cos^ℓ χ stripped, the function-space
//! statement  φ_{Nℓ} = Σ_K c_{Kℓ}(b) S̃_{Kℓ}  is exactly the polynomial
//! identity  P_{N−1−ℓ}^{α,β}(s) = Σ_K c_{Kℓ}(b) C_{K−ℓ}^{ℓ+1}(s),
//! which this module solves and audits in the exact ring.

mod closed_forms;

pub use closed_forms::{closed_form_rows, ClosedFormRow};

use crate::error::{Error, Result};
use crate::exact::{triangular_change_of_basis, BPoly, Parity, SPoly};
use crate::orthopoly::{gegenbauer_exact, jacobi_exact};
use serde::Serialize;

/// For fixed (N, ℓ): the coefficients c_{Kℓ}(b) for K ∈ [ℓ, N−1].
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTable {
    n_principal: usize,
    ell: usize,
    /// index k−ℓ, i.e. coeffs[j] is the coefficient of the K = ℓ+j component
    coeffs: Vec<BPoly>,
}

impl DecompositionTable {
    pub fn n_principal(&self) -> usize {
        self.n_principal
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Number of components, N − ℓ.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// c_{Kℓ}(b) for K ∈ [ℓ, N−1].
    pub fn coefficient(&self, k: usize) -> Option<&BPoly> {
        k.checked_sub(self.ell).and_then(|j| self.coeffs.get(j))
    }

    /// Iterate (K, c_{Kℓ}) from K = ℓ up to K = N−1.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &BPoly)> {
        self.coeffs.iter().enumerate().map(|(j, c)| (self.ell + j, c))
    }

    /// Evaluate every coefficient at a concrete b.
    pub fn eval_f64(&self, b: f64) -> Vec<(usize, f64)> {
        self.iter().map(|(k, c)| (k, c.eval_f64(b))).collect()
    }
}

/// Decomposes P_{n=N−1−ℓ}^{α,β}(s) over the Gegenbauer basis C_{K−ℓ}^{ℓ+1}(s),
/// K ∈ [ℓ, N−1], by triangular back-substitution in the exact ring.
pub fn jacobi_to_gegenbauer(n_principal: usize, ell: usize) -> Result<DecompositionTable> {
    if n_principal == 0 || ell >= n_principal {
        return Err(Error::InvalidParameter(format!(
            "need 0 ≤ ℓ ≤ N−1, got N={n_principal}, ℓ={ell}"
        )));
    }
    let n = n_principal - 1 - ell;
    let target = jacobi_exact(n, ell);
    let basis: Vec<SPoly> = (0..=n).map(|k| gegenbauer_exact(k, ell as u32 + 1)).collect();
    let coeffs = triangular_change_of_basis(&target, &basis)?;
    Ok(DecompositionTable {
        n_principal,
        ell,
        coeffs,
    })
}

/// Per-entry outcome of the closed-form comparison.
#[derive(Debug, Clone, Serialize)]
pub struct EntryCheck {
    pub k: usize,
    pub expected: BPoly,
    pub computed: BPoly,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RowCheck {
    pub ell: usize,
    pub entries: Vec<EntryCheck>,
}

/// Comparison of the computed decomposition against the transcribed
/// closed forms, row by row; mismatches are entries, not errors.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormReport {
    pub n_principal: usize,
    pub rows: Vec<RowCheck>,
}

impl ClosedFormReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.entries.iter().all(|e| e.matches))
    }
}

/// Evaluates the closed forms at the given N and compares bit-exactly
/// against [`jacobi_to_gegenbauer`].
pub fn verify_closed_forms(n_principal: usize) -> Result<ClosedFormReport> {
    if n_principal == 0 {
        return Err(Error::InvalidParameter("N must be ≥ 1".into()));
    }
    let mut rows = Vec::new();
    for row in closed_form_rows(n_principal) {
        let table = jacobi_to_gegenbauer(n_principal, row.ell)?;
        let entries = row
            .entries
            .into_iter()
            .map(|(k, expected)| {
                let computed = table.coefficient(k).cloned().unwrap_or_else(BPoly::zero);
                let matches = computed == expected;
                EntryCheck {
                    k,
                    expected,
                    computed,
                    matches,
                }
            })
            .collect();
        rows.push(RowCheck { ell: row.ell, entries });
    }
    Ok(ClosedFormReport { n_principal, rows })
}

/// Per-component b-degree data.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeProfile {
    pub k: usize,
    /// deg_b c_{Kℓ}; None only for an identically zero coefficient.
    pub max_degree: Option<usize>,
    pub min_nonzero_degree: Option<usize>,
    pub parity: Parity,
    /// max_degree ≤ N−1−K
    pub degree_bound_ok: bool,
    /// all powers ≡ N−1−K (mod 2), i.e. c(−b) = (−1)^{N−1−K} c(b)
    pub parity_ok: bool,
}

/// Reports the b-degree bounds and parity class of every component.
/// Only the upper bound N−1−K and the parity class are laws; the minimal
/// nonzero degree is observational (mixed degrees occur from ℓ = N−4 down).
pub fn degree_profile(table: &DecompositionTable) -> Vec<DegreeProfile> {
    let n_principal = table.n_principal();
    table
        .iter()
        .map(|(k, c)| {
            let bound = n_principal - 1 - k;
            let parity = c.parity();
            let parity_ok = match parity {
                Parity::Zero => false, // coefficients never vanish identically here
                Parity::Even => bound % 2 == 0,
                Parity::Odd => bound % 2 == 1,
                Parity::Mixed => false,
            };
            DegreeProfile {
                k,
                max_degree: c.degree(),
                min_nonzero_degree: c.min_nonzero_degree(),
                parity,
                degree_bound_ok: c.degree().is_some_and(|d| d <= bound),
                parity_ok,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    #[test]
    fn ground_multiplet_is_single_component() {
        let t = jacobi_to_gegenbauer(1, 0).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.coefficient(0), Some(&BPoly::one()));
    }

    #[test]
    fn first_mixture() {
        let t = jacobi_to_gegenbauer(2, 0).unwrap();
        assert_eq!(t.coefficient(0), Some(&-BPoly::variable()));
        assert_eq!(t.coefficient(1), Some(&BPoly::constant(Rational::new(3, 4))));
    }

    #[test]
    fn second_mixture() {
        let t = jacobi_to_gegenbauer(3, 0).unwrap();
        assert_eq!(
            t.coefficient(0),
            Some(&BPoly::from_coeffs(vec![
                Rational::zero(),
                Rational::zero(),
                Rational::new(1, 2)
            ]))
        );
        assert_eq!(t.coefficient(1), Some(&-BPoly::variable()));
        assert_eq!(t.coefficient(2), Some(&BPoly::constant(Rational::new(5, 8))));
    }

    #[test]
    fn closed_forms_match_small_and_large() {
        for n in [2, 5, 12] {
            let report = verify_closed_forms(n).unwrap();
            assert!(report.all_match(), "closed forms disagree at N={n}");
            let expected_rows = n.min(4);
            assert_eq!(report.rows.len(), expected_rows);
        }
    }

    #[test]
    fn reconstruction_is_exact() {
        for n_principal in 1..=9usize {
            for ell in 0..n_principal {
                let t = jacobi_to_gegenbauer(n_principal, ell).unwrap();
                let mut sum = SPoly::zero();
                for (k, c) in t.iter() {
                    sum = &sum + &gegenbauer_exact(k - ell, ell as u32 + 1).scale_bpoly(c);
                }
                assert_eq!(sum, jacobi_exact(n_principal - 1 - ell, ell));
            }
        }
    }

    #[test]
    fn degree_profiles() {
        // K = 0 at N = 4, ℓ = 0: degrees {1, 3}, parity odd
        let t = jacobi_to_gegenbauer(4, 0).unwrap();
        let profile = degree_profile(&t);
        assert_eq!(profile[0].max_degree, Some(3));
        assert_eq!(profile[0].min_nonzero_degree, Some(1));
        assert_eq!(profile[0].parity, Parity::Odd);
        assert!(profile[0].degree_bound_ok && profile[0].parity_ok);

        // leading component is a nonzero constant for any (N, ℓ)
        for n_principal in 1..=8usize {
            for ell in 0..n_principal {
                let t = jacobi_to_gegenbauer(n_principal, ell).unwrap();
                let lead = t.coefficient(n_principal - 1).unwrap();
                assert_eq!(lead.degree(), Some(0));
            }
        }

        // K = 1 at N = 3, ℓ = 0: exactly degree {1, 1}, odd
        let t = jacobi_to_gegenbauer(3, 0).unwrap();
        let profile = degree_profile(&t);
        assert_eq!(profile[1].max_degree, Some(1));
        assert_eq!(profile[1].min_nonzero_degree, Some(1));
        assert_eq!(profile[1].parity, Parity::Odd);
    }

    #[test]
    fn unperturbed_limit() {
        for n_principal in 1..=9usize {
            for ell in 0..n_principal {
                let t = jacobi_to_gegenbauer(n_principal, ell).unwrap();
                for (k, c) in t.iter() {
                    let at_zero = c.eval(&Rational::zero());
                    if k < n_principal - 1 {
                        assert!(at_zero.is_zero(), "N={n_principal} ℓ={ell} K={k}");
                    } else {
                        assert!(!at_zero.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn numeric_cross_check() {
        // reconstruction evaluated at float (s, b) pairs agrees with the
        // float Jacobi evaluator to 1e-12 relative
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let s = 2.0 * next() - 1.0;
            let b = 2.0 * next() - 1.0;
            for (n_principal, ell) in [(4usize, 0usize), (6, 2), (8, 5)] {
                let t = jacobi_to_gegenbauer(n_principal, ell).unwrap();
                let mut sum = 0.0;
                for (k, c) in t.iter() {
                    sum += c.eval_f64(b)
                        * crate::orthopoly::gegenbauer(k - ell, ell as f64 + 1.0, s);
                }
                let alpha = ell as f64 - b + 0.5;
                let beta = ell as f64 + b + 0.5;
                let direct = crate::orthopoly::jacobi(n_principal - 1 - ell, alpha, beta, s);
                assert!(
                    (sum - direct).abs() <= 1e-12 * direct.abs().max(1.0),
                    "N={n_principal} ℓ={ell} s={s} b={b}"
                );
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(jacobi_to_gegenbauer(0, 0).is_err());
        assert!(jacobi_to_gegenbauer(3, 3).is_err());
    }
}
