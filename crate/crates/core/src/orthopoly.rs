//! Jacobi polynomials with b-dependent parameters and Gegenbauer
//! polynomials: exact (SPoly) constructors and floating-point evaluators,
//! including derivatives.
//!
//! Conventions: P_n^{α,β} is the standard Jacobi polynomial with
//! α = ℓ − b + 1/2, β = ℓ + b + 1/2 (so α + β = 2ℓ + 1 independently of b),
//! and C_k^λ is the standard Gegenbauer polynomial normalized by
//! C_1^λ(x) = 2λx.

use crate::error::{Error, Result};
use crate::exact::{BPoly, Rational, SPoly};

/// Parameters of the Jacobi family in the symbolic-b setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JacobiParams {
    pub n: usize,
    pub ell: usize,
}

/// Parameters of the Gegenbauer family (order λ is a positive integer here).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GegenbauerParams {
    pub degree: usize,
    pub order: u32,
}

/// P_n^{ℓ−b+1/2, ℓ+b+1/2}(s) with exact coefficients in b.
///
/// Built by the three-term recurrence carried out over the exact ring.
/// With q = α + β = 2ℓ + 1 the recurrence prefactors 2n(n+q)(2n+q−2) are
/// nonzero rationals for every n ≥ 2, so no division ever fails.
pub fn jacobi_exact(n: usize, ell: usize) -> SPoly {
    let q = 2 * ell as i64 + 1; // α + β, b-free
    if n == 0 {
        return SPoly::one();
    }
    // P_1 = (α−β)/2 + ((α+β+2)/2) s = −b + ((q+2)/2) s
    let p1 = SPoly::from_coeffs(vec![
        -BPoly::variable(),
        BPoly::constant(Rational::new(q + 2, 2)),
    ]);
    if n == 1 {
        return p1;
    }
    let mut prev = SPoly::one();
    let mut cur = p1;
    for m in 2..=n as i64 {
        // 2m(m+q)(2m+q−2) P_m = (2m+q−1)[(2m+q)(2m+q−2) s + (α²−β²)] P_{m−1}
        //                        − 2(m+α−1)(m+β−1)(2m+q) P_{m−2}
        // α²−β² = −2bq; (m+α−1)(m+β−1) = (m+ℓ−1/2)² − b²
        let t = 2 * m + q;
        let denom = Rational::from_integer(2 * m * (m + q)) * Rational::from_integer(t - 2);
        let s_term = SPoly::monomial(
            BPoly::constant(Rational::from_integer(t * (t - 2))),
            1,
        );
        let b_term = SPoly::constant(BPoly::monomial(Rational::from_integer(-2 * q), 1));
        let mid = (&s_term + &b_term).scale(&Rational::from_integer(t - 1));
        let m_half = Rational::new(2 * m + 2 * ell as i64 - 1, 2); // m + ℓ − 1/2
        let c_poly = &BPoly::constant(&m_half * &m_half)
            - &BPoly::monomial(Rational::one(), 2);
        let tail = prev.scale_bpoly(&c_poly.scale(&Rational::from_integer(2 * t)));
        let next = (&(&mid * &cur) - &tail).scale(&denom.recip());
        prev = cur;
        cur = next;
    }
    cur
}

/// C_k^λ(s) with exact rational (b-free) coefficients; λ ≥ 1.
pub fn gegenbauer_exact(k: usize, lambda: u32) -> SPoly {
    assert!(lambda >= 1, "Gegenbauer order must be a positive integer");
    let lam = lambda as i64;
    if k == 0 {
        return SPoly::one();
    }
    let c1 = SPoly::monomial(BPoly::constant(Rational::from_integer(2 * lam)), 1);
    if k == 1 {
        return c1;
    }
    let mut prev = SPoly::one();
    let mut cur = c1;
    for m in 2..=k as i64 {
        // m C_m = 2(m+λ−1) s C_{m−1} − (m+2λ−2) C_{m−2}
        let lead = SPoly::monomial(
            BPoly::constant(Rational::from_integer(2 * (m + lam - 1))),
            1,
        );
        let next = (&(&lead * &cur) - &prev.scale(&Rational::from_integer(m + 2 * lam - 2)))
            .scale(&Rational::new(1, m));
        prev = cur;
        cur = next;
    }
    cur
}

/// Floating-point Jacobi P_n^{α,β}(x), forward three-term recurrence.
pub fn jacobi(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let p1 = 0.5 * (alpha - beta) + 0.5 * (alpha + beta + 2.0) * x;
    if n == 1 {
        return p1;
    }
    let mut prev = 1.0;
    let mut cur = p1;
    for m in 2..=n {
        let m = m as f64;
        let t = 2.0 * m + alpha + beta;
        let a = 2.0 * m * (m + alpha + beta) * (t - 2.0);
        let bb = (t - 1.0) * (alpha * alpha - beta * beta);
        let c = (t - 1.0) * t * (t - 2.0);
        let d = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * t;
        let next = ((bb + c * x) * cur - d * prev) / a;
        prev = cur;
        cur = next;
    }
    cur
}

/// dP_n^{α,β}/dx = ((n+α+β+1)/2) P_{n−1}^{α+1,β+1}.
pub fn jacobi_derivative(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    0.5 * (n as f64 + alpha + beta + 1.0) * jacobi(n - 1, alpha + 1.0, beta + 1.0, x)
}

/// d²P_n^{α,β}/dx² through the same parameter-shift identity applied twice.
pub fn jacobi_second_derivative(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let f = n as f64 + alpha + beta;
    0.25 * (f + 1.0) * (f + 2.0) * jacobi(n - 2, alpha + 2.0, beta + 2.0, x)
}

/// Floating-point Gegenbauer C_k^λ(x), forward three-term recurrence.
pub fn gegenbauer(k: usize, lambda: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let c1 = 2.0 * lambda * x;
    if k == 1 {
        return c1;
    }
    let mut prev = 1.0;
    let mut cur = c1;
    for m in 2..=k {
        let m = m as f64;
        let next = (2.0 * (m + lambda - 1.0) * x * cur - (m + 2.0 * lambda - 2.0) * prev) / m;
        prev = cur;
        cur = next;
    }
    cur
}

/// dC_k^λ/dx = 2λ C_{k−1}^{λ+1}.
pub fn gegenbauer_derivative(k: usize, lambda: f64, x: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    2.0 * lambda * gegenbauer(k - 1, lambda + 1.0, x)
}

/// d²C_k^λ/dx² = 4λ(λ+1) C_{k−2}^{λ+2}.
pub fn gegenbauer_second_derivative(k: usize, lambda: f64, x: f64) -> f64 {
    if k < 2 {
        return 0.0;
    }
    4.0 * lambda * (lambda + 1.0) * gegenbauer(k - 2, lambda + 2.0, x)
}

/// Family selector for grid evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolyFamily {
    /// P_n^{ℓ−b+1/2, ℓ+b+1/2} at a concrete b.
    Jacobi { n: usize, ell: usize, b: f64 },
    Gegenbauer { degree: usize, order: u32 },
}

/// Evaluates the selected family at x ∈ [−1, 1], optionally with the first
/// derivative. Errors with `Domain` for |x| > 1.
pub fn eval_float_family(family: PolyFamily, x: f64, with_derivative: bool) -> Result<(f64, Option<f64>)> {
    if !(-1.0..=1.0).contains(&x) || !x.is_finite() {
        return Err(Error::Domain {
            value: x,
            domain: "[-1, 1]",
        });
    }
    match family {
        PolyFamily::Jacobi { n, ell, b } => {
            let alpha = ell as f64 - b + 0.5;
            let beta = ell as f64 + b + 0.5;
            let value = jacobi(n, alpha, beta, x);
            let deriv = with_derivative.then(|| jacobi_derivative(n, alpha, beta, x));
            Ok((value, deriv))
        }
        PolyFamily::Gegenbauer { degree, order } => {
            let lam = order as f64;
            let value = gegenbauer(degree, lam, x);
            let deriv = with_derivative.then(|| gegenbauer_derivative(degree, lam, x));
            Ok((value, deriv))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: the explicit Jacobi sum formula
    /// P_n^{α,β}(x) = Σ_s binom(n+α, n−s) binom(n+β, s) ((x−1)/2)^s ((x+1)/2)^{n−s},
    /// expanded over the exact ring with α = ℓ+1/2−b, β = ℓ+1/2+b.
    fn jacobi_sum_oracle(n: usize, ell: usize) -> SPoly {
        // generalized binomial binom(z, k) = z(z−1)…(z−k+1)/k! with z linear in b
        fn binom(z: &BPoly, k: usize) -> BPoly {
            let mut acc = BPoly::one();
            let mut fact = Rational::one();
            for i in 0..k {
                acc = &acc * &(z - &BPoly::constant(Rational::from_integer(i as i64)));
                fact = &fact * &Rational::from_integer(i as i64 + 1);
            }
            acc.scale(&fact.recip())
        }
        let half = Rational::new(1, 2);
        let x_minus = SPoly::from_coeffs(vec![BPoly::constant(-&half), BPoly::constant(half.clone())]);
        let x_plus = SPoly::from_coeffs(vec![BPoly::constant(half.clone()), BPoly::constant(half)]);
        let n_alpha = &BPoly::from_coeffs(vec![Rational::new(2 * (n + ell) as i64 + 1, 2), -Rational::one()]);
        let n_beta = &BPoly::from_coeffs(vec![Rational::new(2 * (n + ell) as i64 + 1, 2), Rational::one()]);
        let mut total = SPoly::zero();
        for s in 0..=n {
            let mut term = SPoly::constant(&binom(n_alpha, n - s) * &binom(n_beta, s));
            for _ in 0..s {
                term = &term * &x_minus;
            }
            for _ in 0..(n - s) {
                term = &term * &x_plus;
            }
            total = &total + &term;
        }
        total
    }

    #[test]
    fn degree_zero_is_one() {
        for ell in 0..4 {
            assert_eq!(jacobi_exact(0, ell), SPoly::one());
        }
    }

    #[test]
    fn first_order_matches_mixture_form() {
        // P_1 = −b + ((2N−1)/2) s at ℓ = N−2
        for n_principal in 2..=6usize {
            let ell = n_principal - 2;
            let p = jacobi_exact(1, ell);
            assert_eq!(p.coeff(0), -BPoly::variable());
            assert_eq!(
                p.coeff(1),
                BPoly::constant(Rational::new(2 * n_principal as i64 - 1, 2))
            );
        }
    }

    #[test]
    fn second_order_frozen_from_sum_oracle() {
        // oracle output for n=2, ℓ=0, frozen coefficient by coefficient:
        // P_2 = (b²/2 − 5/8) + (−2b) s + (5/2) s²
        let p = jacobi_exact(2, 0);
        let frozen = SPoly::from_coeffs(vec![
            BPoly::from_coeffs(vec![Rational::new(-5, 8), Rational::zero(), Rational::new(1, 2)]),
            BPoly::monomial(Rational::from_integer(-2), 1),
            BPoly::constant(Rational::new(5, 2)),
        ]);
        assert_eq!(p, frozen);
        assert_eq!(jacobi_sum_oracle(2, 0), frozen);
    }

    #[test]
    fn recurrence_agrees_with_sum_oracle() {
        for ell in 0..=3 {
            for n in 0..=6 {
                assert_eq!(jacobi_exact(n, ell), jacobi_sum_oracle(n, ell), "n={n} ell={ell}");
            }
        }
    }

    #[test]
    fn gegenbauer_low_orders() {
        assert_eq!(gegenbauer_exact(0, 3), SPoly::one());
        for lambda in 1..=5u32 {
            assert_eq!(
                gegenbauer_exact(1, lambda),
                SPoly::monomial(BPoly::constant(Rational::from_integer(2 * lambda as i64)), 1)
            );
        }
        // recurrence oracle k C_k = 2(k+λ−1) x C_{k−1} − (k+2λ−2) C_{k−2}:
        // C_2^2 = 12 s² − 2
        let c22 = gegenbauer_exact(2, 2);
        assert_eq!(c22.coeff(2), BPoly::constant(Rational::from_integer(12)));
        assert_eq!(c22.coeff(0), BPoly::constant(Rational::from_integer(-2)));
        assert_eq!(c22.coeff(1), BPoly::zero());
    }

    #[test]
    fn gegenbauer_parity() {
        for k in 0..=10 {
            for lambda in 1..=4u32 {
                let c = gegenbauer_exact(k, lambda);
                let reflected = c.reflect_s();
                let signed = if k % 2 == 0 { c.clone() } else { -&c };
                assert_eq!(reflected, signed);
            }
        }
    }

    #[test]
    fn jacobi_symmetry_under_joint_reflection() {
        // P_n^{α,β}(−x) = (−1)^n P_n^{β,α}(x); swapping α and β is b → −b here.
        for ell in 0..=4 {
            for n in 0..=10 {
                let p = jacobi_exact(n, ell);
                let reflected = p.reflect_s().reflect_b();
                let signed = if n % 2 == 0 { p.clone() } else { -&p };
                assert_eq!(reflected, signed, "n={n} ell={ell}");
            }
        }
    }

    #[test]
    fn unperturbed_limit_is_gegenbauer() {
        // at b = 0, P_n^{ℓ+1/2,ℓ+1/2} ∝ C_n^{ℓ+1} with a nonzero rational ratio
        let b0 = Rational::zero();
        for ell in 0..=3u32 {
            for n in 1..=8usize {
                let p = jacobi_exact(n, ell as usize);
                let g = gegenbauer_exact(n, ell + 1);
                let ratio = p.leading().unwrap().eval(&b0) / g.leading().unwrap().eval(&b0);
                assert!(!ratio.is_zero());
                let mut matches = true;
                for k in 0..=n {
                    let pk = p.coeff(k).eval(&b0);
                    let gk = &g.coeff(k).eval(&b0) * &ratio;
                    if pk != gk {
                        matches = false;
                    }
                }
                assert!(matches, "n={n} ell={ell}");
            }
        }
    }

    #[test]
    fn exact_and_float_evaluations_agree() {
        let pts = [
            (Rational::new(3, 10), Rational::new(1, 2)),
            (Rational::new(-7, 8), Rational::new(-3, 1)),
            (Rational::new(9, 10), Rational::new(12, 5)),
            (Rational::new(1, 3), Rational::new(-5, 4)),
        ];
        for ell in 0..=3 {
            for n in 0..=10 {
                let p = jacobi_exact(n, ell);
                for (s, b0) in &pts {
                    let exact = p.eval(s, b0).to_f64();
                    let (float, _) = eval_float_family(
                        PolyFamily::Jacobi { n, ell, b: b0.to_f64() },
                        s.to_f64(),
                        false,
                    )
                    .unwrap();
                    let scale = exact.abs().max(1.0);
                    assert!(
                        (exact - float).abs() <= 1e-12 * scale,
                        "n={n} ell={ell} s={s} b={b0}: {exact} vs {float}"
                    );
                }
            }
        }
    }

    #[test]
    fn float_spot_values() {
        // P_1 with α=−1/2, β=3/2 at x=0.3: (α−β)/2 + ((α+β+2)/2) x = −1 + 1.5·0.3
        let (v, d) = eval_float_family(
            PolyFamily::Jacobi { n: 1, ell: 0, b: 1.0 },
            0.3,
            true,
        )
        .unwrap();
        assert!((v - (-0.55)).abs() < 1e-14);
        assert!((d.unwrap() - 1.5).abs() < 1e-14);

        let (g, _) = eval_float_family(
            PolyFamily::Gegenbauer { degree: 1, order: 2 },
            0.5,
            false,
        )
        .unwrap();
        assert!((g - 2.0).abs() < 1e-14);
    }

    #[test]
    fn first_order_jacobi_derivative_is_constant() {
        for x in [-0.9, -0.2, 0.0, 0.4, 0.99] {
            let d = jacobi_derivative(1, -0.5, 1.5, x);
            assert!((d - 1.5).abs() < 1e-14);
        }
    }

    #[test]
    fn domain_guard() {
        let err = eval_float_family(PolyFamily::Gegenbauer { degree: 2, order: 1 }, 1.5, false);
        assert!(matches!(err, Err(crate::error::Error::Domain { .. })));
    }
}
