//! Real eigenbases of integer matrices with positive simple spectrum.

use serde::{Deserialize, Serialize};

use super::dense::{self, Dense};
use crate::error::{Error, Result};
use crate::intmat::{IntMatrix, SturmChain};
use crate::num::Real;

const ROOT_WIDTH: f64 = 1e-15;

/// Eigenvalues sorted descending with unit eigenvectors `X_j`. The first
/// nonzero coordinate of every `X_j` is positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenBasis<T> {
    values: Vec<T>,
    value_radius: Vec<f64>,
    vectors: Vec<Vec<T>>,
    dual: Vec<Vec<T>>,
}

impl<T: Real> EigenBasis<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Certified bound on `|λ_j - values[j]|` (before rounding to `T`).
    pub fn value_radius(&self) -> &[f64] {
        &self.value_radius
    }

    pub fn vectors(&self) -> &[Vec<T>] {
        &self.vectors
    }

    /// Row `j` is the linear functional giving the `X_j` coordinate.
    pub fn dual(&self) -> &[Vec<T>] {
        &self.dual
    }

    /// `λ_1 > 1 > λ_2 > ... > λ_n > 0`.
    pub fn is_normalized(&self) -> bool {
        self.values[0] > T::one() && self.values[1..].iter().all(|&v| v < T::one())
    }

    pub fn to_eigen(&self, x: &[T]) -> Vec<T> {
        dense::mat_vec(&self.dual, x)
    }

    pub fn to_standard(&self, c: &[T]) -> Vec<T> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| c[j] * self.vectors[j][i]).sum()).collect()
    }

    /// Eigen-coordinates of `A^t` applied to the point with coordinates `c`.
    pub fn flow(&self, t: T, c: &[T]) -> Vec<T> {
        self.values.iter().zip(c).map(|(&l, &x)| l.powf(t) * x).collect()
    }

    /// `max_j |A X_j - λ_j X_j|` for the matrix the basis was built from.
    pub fn residual(&self, a: &IntMatrix) -> T {
        let m = to_dense::<T>(a);
        self.vectors
            .iter()
            .zip(&self.values)
            .map(|(x, &l)| {
                let ax = dense::mat_vec(&m, x);
                ax.iter().zip(x).map(|(&u, &v)| (u - l * v).abs()).fold(T::zero(), T::max)
            })
            .fold(T::zero(), T::max)
    }
}

pub(crate) fn to_dense<T: Real>(a: &IntMatrix) -> Dense<T> {
    (0..a.rows()).map(|i| a.row(i).iter().map(T::from_exact).collect()).collect()
}

/// Eigenbasis of a GL_n(Z) matrix whose eigenvalues are real, positive and
/// distinct. Eigenvalues come from certified Sturm isolation; each
/// eigenvector is the largest column of `adj(A - λ I)`.
pub fn eigenbasis<T: Real>(a: &IntMatrix) -> Result<EigenBasis<T>> {
    a.ensure_gl()?;
    let n = a.dim();
    let p = a.charpoly();
    let sturm = SturmChain::new(p.poly());
    let mut roots = sturm.real_roots(ROOT_WIDTH);
    let distinct_real = roots.len() == n && sturm.squarefree().degree() == Some(n);
    if !distinct_real || roots.iter().any(|r| r.sign() <= 0) {
        return Err(Error::SpectrumNotTotallyRealPositive(format!("characteristic polynomial {p}")));
    }
    roots.reverse();
    let values: Vec<T> = roots.iter().map(|r| T::lit(r.midpoint_f64())).collect();
    let value_radius = roots.iter().map(|r| r.radius_f64()).collect();
    let m = to_dense::<T>(a);
    let vectors: Vec<Vec<T>> = values.iter().map(|&l| eigenvector(&m, l)).collect();
    let cols: Dense<T> = (0..n).map(|i| (0..n).map(|j| vectors[j][i]).collect()).collect();
    let dual = dense::inverse(&cols)
        .ok_or_else(|| Error::SpectrumNotTotallyRealPositive("eigenvectors are numerically dependent".into()))?;
    Ok(EigenBasis { values, value_radius, vectors, dual })
}

fn eigenvector<T: Real>(m: &Dense<T>, l: T) -> Vec<T> {
    let n = m.len();
    let shifted: Dense<T> =
        (0..n).map(|i| (0..n).map(|j| if i == j { m[i][j] - l } else { m[i][j] }).collect()).collect();
    let v = (0..n)
        .map(|k| dense::adjugate_column(&shifted, k))
        .max_by(|a, b| dense::norm(a).partial_cmp(&dense::norm(b)).unwrap())
        .expect("n >= 1");
    let len = dense::norm(&v);
    let tiny = len * T::epsilon() * T::lit(16.0);
    let sign = match v.iter().find(|x| x.abs() > tiny) {
        Some(&x) if x < T::zero() => -T::one(),
        _ => T::one(),
    };
    v.iter().map(|&x| sign * x / len).collect()
}

/// First power `A^e`, `e ∈ [1, -1, 2, -2]`, with `λ_1 > 1 > λ_2 > ... > 0`;
/// failing that, the first with a positive simple real spectrum.
pub fn normalize_hyperbolic<T: Real>(a: &IntMatrix) -> Result<(i32, IntMatrix, EigenBasis<T>)> {
    let mut fallback = None;
    for e in [1, -1, 2, -2] {
        let m = a.pow_signed(e)?;
        if let Ok(b) = eigenbasis::<T>(&m) {
            if b.is_normalized() {
                return Ok((e, m, b));
            }
            fallback.get_or_insert((e, m, b));
        }
    }
    fallback.ok_or_else(|| {
        Error::SpectrumNotTotallyRealPositive(format!("no power A^e, e in [1, -1, 2, -2], of {a} qualifies"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::CharPoly;

    #[test]
    fn golden_basis() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let b = eigenbasis::<f64>(&a).unwrap();
        assert!((b.values()[0] - 2.618_033_988_749_895).abs() < 1e-14);
        assert!((b.values()[1] - 0.381_966_011_250_105).abs() < 1e-14);
        let x1 = &b.vectors()[0];
        assert!((x1[1] / x1[0] - 0.618_033_988_749_895).abs() < 1e-14);
        let x2 = &b.vectors()[1];
        assert!((x2[1] / x2[0] + 1.618_033_988_749_895).abs() < 1e-14);
        assert!(b.residual(&a) < 1e-14);
        assert!(b.is_normalized());
        let c = b.to_eigen(&[0.3, -0.7]);
        let back = b.to_standard(&c);
        assert!((back[0] - 0.3).abs() < 1e-15 && (back[1] + 0.7).abs() < 1e-15);
    }

    #[test]
    fn cubic_needs_inverse_square() {
        let a = IntMatrix::companion(&CharPoly::from_i64s(&[1, -2, -1, 1]).unwrap());
        assert!(matches!(eigenbasis::<f64>(&a), Err(Error::SpectrumNotTotallyRealPositive(_))));
        let (e, m, b) = normalize_hyperbolic::<f64>(&a).unwrap();
        assert_eq!(e, -2);
        assert!(b.is_normalized());
        assert!(b.residual(&m) < 1e-12);
        let l = 1.801_937_735_804_838f64;
        assert!((b.values()[2] - l.powi(-2)).abs() < 1e-13);
    }

    #[test]
    fn single_precision_basis() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let b = eigenbasis::<f32>(&a).unwrap();
        assert!((b.values()[0] - 2.618_034f32).abs() < 1e-6);
        assert!(b.residual(&a) < 1e-5);
    }
}
