//! Dense univariate polynomials with ascending coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{Field, Ring};

/// Polynomial `c_0 + c_1 x + ... + c_n x^n`, trailing zeros trimmed.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![T::one()] }
    }

    /// `x - a`.
    pub fn linear_root(a: T) -> Self {
        Poly { coeffs: vec![-a, T::one()] }
    }

    /// `x^n + c`.
    pub fn monomial_plus(n: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        coeffs[0] = coeffs[0].clone() + c;
        Poly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for c in self.coeffs.iter().skip(1) {
            k = k + T::one();
            out.push(c.clone() * k.clone());
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, k: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Coefficients in reverse order, `x^n p(1/x)` for `n = deg p`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(c)
    }

    /// Division by a monic divisor; the quotient stays in the coefficient ring.
    pub fn div_rem_monic(&self, d: &Self) -> (Self, Self) {
        assert!(d.is_monic(), "divisor must be monic");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = rem[i + dd].clone();
            if q.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - q.clone() * dc.clone();
            }
            quot[i] = q;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Quotient when `d` (monic) divides `self` exactly.
    pub fn div_exact_monic(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_monic(d);
        r.is_zero().then_some(q)
    }

    pub fn map<U: Ring>(&self, f: impl FnMut(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Field> Poly<T> {
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let inv = T::one() / d.lead();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = rem[i + dd].clone() * inv.clone();
            if q.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - q.clone() * dc.clone();
            }
            quot[i] = q;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = T::one() / self.lead();
        self.scale(&inv)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self / gcd(self, self')`: same roots, each simple.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }
}

impl Poly<BigInt> {
    pub fn from_i64s(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn to_rational(&self) -> Poly<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl<T: Ring + fmt::Display> fmt::Display for Poly<T> {
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
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Monic integer polynomial, typically `det(xI - A)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct CharPoly(Poly<BigInt>);

impl CharPoly {
    pub fn new(p: Poly<BigInt>) -> Result<Self> {
        if p.is_monic() {
            Ok(CharPoly(p))
        } else {
            Err(Error::NotMonic)
        }
    }

    pub(crate) fn from_monic(p: Poly<BigInt>) -> Self {
        debug_assert!(p.is_monic());
        CharPoly(p)
    }

    pub fn from_i64s(c: &[i64]) -> Result<Self> {
        Self::new(Poly::from_i64s(c))
    }

    pub fn poly(&self) -> &Poly<BigInt> {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.coeff(i)
    }

    pub fn constant_term(&self) -> BigInt {
        self.0.coeff(0)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0.eval(x)
    }

    /// Errors unless `|c_0| = 1`, as for every characteristic polynomial of a GL_n(Z) matrix.
    pub fn ensure_unit_constant(&self) -> Result<()> {
        let c0 = self.constant_term();
        if c0.abs().is_one() {
            Ok(())
        } else {
            Err(Error::NonUnitConstantTerm(c0.to_string()))
        }
    }

    /// Small-coefficient view for tests and display; panics on overflow.
    pub fn to_i64s(&self) -> Vec<i64> {
        self.0.coeffs().iter().map(|c| c.to_i64().expect("coefficient fits in i64")).collect()
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<Vec<String>> for CharPoly {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        let coeffs = v
            .iter()
            .map(|s| s.trim().parse::<BigInt>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        CharPoly::new(Poly::new(coeffs))
    }
}

impl From<CharPoly> for Vec<String> {
    fn from(p: CharPoly) -> Self {
        p.0.coeffs.iter().map(ToString::to_string).collect()
    }
}
