//! Polynomials in s = sin χ with [`BPoly`] coefficients.
//!
//! Houses the Jacobi polynomials with b-dependent parameters and the
//! Gegenbauer polynomials; all arithmetic is exact.

use super::{BPoly, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct SPoly {
    /// Coefficient of s^i at index i; highest entry nonzero unless empty.
    coeffs: Vec<BPoly>,
}

impl SPoly {
    pub fn zero() -> Self {
        SPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        SPoly::constant(BPoly::one())
    }

    pub fn constant(c: BPoly) -> Self {
        SPoly { coeffs: vec![c] }.trimmed()
    }

    /// The monomial `s`.
    pub fn variable() -> Self {
        SPoly {
            coeffs: vec![BPoly::zero(), BPoly::one()],
        }
    }

    /// The monomial `c * s^k`.
    pub fn monomial(c: BPoly, k: usize) -> Self {
        if c.is_zero() {
            return SPoly::zero();
        }
        let mut coeffs = vec![BPoly::zero(); k + 1];
        coeffs[k] = c;
        SPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BPoly>) -> Self {
        SPoly { coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(BPoly::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in s; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BPoly {
        self.coeffs.get(k).cloned().unwrap_or_else(BPoly::zero)
    }

    pub fn coeffs(&self) -> &[BPoly] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BPoly> {
        self.coeffs.last()
    }

    /// d/ds; lowers the s-degree by one.
    pub fn derivative(&self) -> SPoly {
        if self.coeffs.len() <= 1 {
            return SPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&Rational::from_integer(i as i64)))
            .collect();
        SPoly { coeffs }.trimmed()
    }

    pub fn scale_bpoly(&self, factor: &BPoly) -> SPoly {
        if factor.is_zero() {
            return SPoly::zero();
        }
        SPoly {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> SPoly {
        self.scale_bpoly(&BPoly::constant(factor.clone()))
    }

    /// Exact evaluation at rational (s, b).
    pub fn eval(&self, s: &Rational, b0: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * s + &c.eval(b0);
        }
        acc
    }

    pub fn eval_f64(&self, s: f64, b0: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c.eval_f64(b0);
        }
        acc
    }

    /// Substitution s -> -s.
    pub fn reflect_s(&self) -> SPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c })
            .collect();
        SPoly { coeffs }
    }

    /// Substitution b -> -b in every coefficient.
    pub fn reflect_b(&self) -> SPoly {
        SPoly {
            coeffs: self.coeffs.iter().map(BPoly::reflect).collect(),
        }
    }
}

impl Add for &SPoly {
    type Output = SPoly;
    fn add(self, rhs: &SPoly) -> SPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        SPoly { coeffs }.trimmed()
    }
}

impl Sub for &SPoly {
    type Output = SPoly;
    fn sub(self, rhs: &SPoly) -> SPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        SPoly { coeffs }.trimmed()
    }
}

impl Mul for &SPoly {
    type Output = SPoly;
    fn mul(self, rhs: &SPoly) -> SPoly {
        if self.is_zero() || rhs.is_zero() {
            return SPoly::zero();
        }
        let mut coeffs = vec![BPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, c) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * c);
            }
        }
        SPoly { coeffs }.trimmed()
    }
}

impl Neg for &SPoly {
    type Output = SPoly;
    fn neg(self) -> SPoly {
        SPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for SPoly {
            type Output = SPoly;
            fn $method(self, rhs: SPoly) -> SPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&SPoly> for SPoly {
            type Output = SPoly;
            fn $method(self, rhs: &SPoly) -> SPoly {
                (&self).$method(rhs)
            }
        }
        impl $trait<SPoly> for &SPoly {
            type Output = SPoly;
            fn $method(self, rhs: SPoly) -> SPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SPoly {
    type Output = SPoly;
    fn neg(self) -> SPoly {
        -&self
    }
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c}) s")?,
                _ => write!(f, "({c}) s^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// JSON array of BPoly arrays, index = power of s.
impl Serialize for SPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coeffs = Vec::<BPoly>::deserialize(deserializer)?;
        Ok(SPoly::from_coeffs(coeffs))
    }
}
