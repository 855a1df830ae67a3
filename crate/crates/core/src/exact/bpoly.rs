//! Polynomials in the deformation parameter `b` over the rationals.
//!
//! Dense representation, trailing zeros trimmed; the zero polynomial has an
//! empty coefficient vector and `degree() == None`. This is the ring in which
//! the mixing coefficients of the decompositions live.

use super::Rational;
use crate::error::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Parity class of a polynomial in `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Zero,
    Even,
    Odd,
    Mixed,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BPoly {
    /// Coefficient of b^i at index i; highest entry nonzero unless empty.
    coeffs: Vec<Rational>,
}

impl BPoly {
    pub fn zero() -> Self {
        BPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        BPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        BPoly { coeffs: vec![c] }.trimmed()
    }

    /// The monomial `b`.
    pub fn variable() -> Self {
        BPoly {
            coeffs: vec![Rational::zero(), Rational::one()],
        }
    }

    /// The monomial `c * b^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return BPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        BPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        BPoly { coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(Rational::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of b^k (zero beyond the stored range).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, b0: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * b0 + c;
        }
        acc
    }

    pub fn eval_f64(&self, b0: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * b0 + c.to_f64();
        }
        acc
    }

    /// Substitution b -> -b.
    pub fn reflect(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c })
            .collect();
        BPoly { coeffs }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return BPoly::zero();
        }
        BPoly {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn min_nonzero_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                if i % 2 == 0 {
                    even = true;
                } else {
                    odd = true;
                }
            }
        }
        match (even, odd) {
            (false, false) => Parity::Zero,
            (true, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    /// Exact polynomial division; `Err(InexactDivision)` if the remainder
    /// is nonzero. Coefficients live in a field, so divisibility is the only
    /// obstruction.
    pub fn try_div_exact(&self, divisor: &BPoly) -> Result<BPoly> {
        let ctx = divisor.degree().unwrap_or(0);
        if divisor.is_zero() {
            return Err(Error::InexactDivision { degree: ctx });
        }
        if self.is_zero() {
            return Ok(BPoly::zero());
        }
        let (dn, dd) = (self.degree().unwrap(), divisor.degree().unwrap());
        if dn < dd {
            return Err(Error::InexactDivision { degree: ctx });
        }
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); dn - dd + 1];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] / &lead;
            if !q.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] = &rem[i + j] - &(&q * dc);
                }
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision { degree: ctx });
        }
        Ok(BPoly::from_coeffs(quot))
    }
}

impl Add for &BPoly {
    type Output = BPoly;
    fn add(self, rhs: &BPoly) -> BPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        BPoly { coeffs }.trimmed()
    }
}

impl Sub for &BPoly {
    type Output = BPoly;
    fn sub(self, rhs: &BPoly) -> BPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        BPoly { coeffs }.trimmed()
    }
}

impl Mul for &BPoly {
    type Output = BPoly;
    fn mul(self, rhs: &BPoly) -> BPoly {
        if self.is_zero() || rhs.is_zero() {
            return BPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, c) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * c);
            }
        }
        BPoly { coeffs }.trimmed()
    }
}

impl Neg for &BPoly {
    type Output = BPoly;
    fn neg(self) -> BPoly {
        BPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for BPoly {
            type Output = BPoly;
            fn $method(self, rhs: BPoly) -> BPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BPoly> for BPoly {
            type Output = BPoly;
            fn $method(self, rhs: &BPoly) -> BPoly {
                (&self).$method(rhs)
            }
        }
        impl $trait<BPoly> for &BPoly {
            type Output = BPoly;
            fn $method(self, rhs: BPoly) -> BPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BPoly {
    type Output = BPoly;
    fn neg(self) -> BPoly {
        -&self
    }
}

impl fmt::Display for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = if c.is_negative() { -c } else { c.clone() };
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag} b")?,
                _ => write!(f, "{mag} b^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Ordered JSON array of "num/den" strings, index = power of b.
impl Serialize for BPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coeffs = Vec::<Rational>::deserialize(deserializer)?;
        Ok(BPoly::from_coeffs(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> BPoly {
        BPoly::variable()
    }

    #[test]
    fn ring_identity_bplus1_times_bminus1() {
        let p = &b() + &BPoly::one();
        let q = &b() - &BPoly::one();
        let expect = BPoly::from_coeffs(vec![Rational::from_integer(-1), Rational::zero(), Rational::one()]);
        assert_eq!(&p * &q, expect);
    }

    #[test]
    fn eval_linear() {
        let p = -&b();
        assert_eq!(p.eval(&Rational::new(1, 2)), Rational::new(-1, 2));
    }

    #[test]
    fn addition() {
        let bsq = &b() * &b();
        let two_b = b().scale(&Rational::from_integer(2));
        let sum = &bsq + &two_b;
        assert_eq!(sum.coeff(0), Rational::zero());
        assert_eq!(sum.coeff(1), Rational::from_integer(2));
        assert_eq!(sum.coeff(2), Rational::one());
        assert_eq!(sum.degree(), Some(2));
    }

    #[test]
    fn zero_degree_sentinel() {
        assert_eq!(BPoly::zero().degree(), None);
        let cancelled = &b() - &b();
        assert!(cancelled.is_zero());
        assert_eq!(cancelled.degree(), None);
    }

    #[test]
    fn exact_division() {
        let p = &(&b() + &BPoly::one()) * &(&b() - &BPoly::one());
        let q = p.try_div_exact(&(&b() + &BPoly::one())).unwrap();
        assert_eq!(q, &b() - &BPoly::one());
        let r = p.try_div_exact(&b());
        assert!(matches!(r, Err(Error::InexactDivision { .. })));
    }

    #[test]
    fn reflect_and_parity() {
        let p = BPoly::from_coeffs(vec![Rational::zero(), Rational::new(-1, 2), Rational::zero(), Rational::one()]);
        assert_eq!(p.parity(), Parity::Odd);
        assert_eq!(p.reflect(), -&p);
        assert_eq!(BPoly::one().parity(), Parity::Even);
        assert_eq!(BPoly::zero().parity(), Parity::Zero);
        assert_eq!((&BPoly::one() + &b()).parity(), Parity::Mixed);
    }

    #[test]
    fn serde_round_trip_bit_exact() {
        let p = BPoly::from_coeffs(vec![Rational::new(-1, 3), Rational::zero(), Rational::new(22, 7)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["-1/3","0/1","22/7"]"#);
        let back: BPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
