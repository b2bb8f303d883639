//! Affine maps `p ↦ A p + b` on log-modulus space.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct AffineAutomorphism {
    pub matrix: IntMatrix,
    pub translation: Vec<BigRational>,
}

impl AffineAutomorphism {
    pub fn new(matrix: IntMatrix, translation: Vec<BigRational>) -> Result<Self> {
        matrix.ensure_gl()?;
        if translation.len() != matrix.dim() {
            return Err(Error::DimensionMismatch { expected: matrix.dim(), found: translation.len() });
        }
        Ok(AffineAutomorphism { matrix, translation })
    }

    pub fn apply(&self, p: &[BigRational]) -> Vec<BigRational> {
        let a = self.matrix.to_rational();
        a.mul_vec(p).into_iter().zip(&self.translation).map(|(x, b)| x + b).collect()
    }
}

/// The unique fixed point `p = -(A - I)^{-1} b`, exact.
pub fn affine_fixed_point(f: &AffineAutomorphism) -> Result<Vec<BigRational>> {
    let shifted = f.matrix.minus_identity();
    if shifted.det().is_zero() {
        return Err(Error::OneInSpectrum);
    }
    let rhs: Vec<BigRational> = f.translation.iter().map(|b| -b.clone()).collect();
    let p = shifted.to_rational().solve(&rhs).ok_or(Error::OneInSpectrum)?;
    debug_assert_eq!(f.apply(&p), p);
    Ok(p)
}
