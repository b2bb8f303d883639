//! Dense matrices over an exact ring, with the integer specialisations used
//! throughout the crate.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{CharPoly, Poly};
use crate::error::{Error, Result};
use crate::num::{Field, Ring};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]))
            .finish()
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn ensure_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

impl<T: Ring> Matrix<T> {
    /// Builds a matrix from rows; rejects ragged input.
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    /// `self - I`.
    pub fn minus_identity(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = m[(i, i)].clone() - T::one();
        }
        m
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kronecker(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self[(i / other.rows, j / other.cols)].clone() * other[(i % other.rows, j % other.cols)].clone()
        })
    }

    /// Submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Characteristic polynomial `det(xI - A)` by Berkowitz's division-free
    /// algorithm, valid over any commutative ring.
    pub fn charpoly_coeffs(&self) -> Poly<T> {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.rows;
        // descending coefficients, leading 1
        let mut p: Vec<T> = vec![T::one()];
        for k in 1..=n {
            let m = k - 1;
            let mut t: Vec<T> = Vec::with_capacity(k + 1);
            t.push(T::one());
            t.push(-self[(m, m)].clone());
            let mut v: Vec<T> = (0..m).map(|i| self[(i, m)].clone()).collect();
            for _ in 2..=k {
                let rv = (0..m).fold(T::zero(), |acc, i| acc + self[(m, i)].clone() * v[i].clone());
                t.push(-rv);
                v = (0..m)
                    .map(|i| (0..m).fold(T::zero(), |acc, l| acc + self[(i, l)].clone() * v[l].clone()))
                    .collect();
            }
            let next: Vec<T> = (0..=k)
                .map(|i| {
                    (0..k)
                        .filter(|&l| l <= i)
                        .fold(T::zero(), |acc, l| acc + t[i - l].clone() * p[l].clone())
                })
                .collect();
            p = next;
        }
        p.reverse();
        Poly::new(p)
    }

    /// Determinant via the constant term of the characteristic polynomial.
    pub fn det(&self) -> T {
        let c0 = self.charpoly_coeffs().coeff(0);
        if self.rows.is_multiple_of(2) {
            c0
        } else {
            -c0
        }
    }
}

impl<T: Field> Matrix<T> {
    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = T::one() / m[(r, c)].clone();
            for j in 0..m.cols {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in 0..m.cols {
                        m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right nullspace, one vector per free column in
    /// ascending column order.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![T::zero(); self.cols];
                v[free] = T::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, free)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let n = self.rows;
        if !self.is_square() || b.len() != n {
            return None;
        }
        let aug = Self::from_fn(n, n + 1, |i, j| if j < n { self[(i, j)].clone() } else { b[i].clone() });
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some((0..n).map(|i| r[(i, n)].clone()).collect())
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows;
        if !self.is_square() {
            return None;
        }
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }
}

impl<T: Ring> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self[(i, k)].clone() * rhs[(k, j)].clone())
        })
    }
}

/// Exact integer matrix.
pub type IntMatrix = Matrix<BigInt>;
/// Exact rational matrix.
pub type RatMatrix = Matrix<BigRational>;

impl Matrix<BigInt> {
    /// Builds an integer matrix from machine integers.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .expect("rectangular literal")
    }

    /// Builds a matrix and checks that it lies in GL_n(Z).
    pub fn new_gl(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let m = Self::new(rows)?;
        m.ensure_gl()?;
        Ok(m)
    }

    /// Errors unless the matrix is square with determinant ±1.
    pub fn ensure_gl(&self) -> Result<()> {
        self.ensure_square()?;
        if self.rows == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        let d = self.det();
        if d.abs().is_one() {
            Ok(())
        } else {
            Err(Error::NotInGL(d.to_string()))
        }
    }

    pub fn charpoly(&self) -> CharPoly {
        CharPoly::from_monic(self.charpoly_coeffs())
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    /// Exact inverse of a GL_n(Z) matrix.
    pub fn inverse_gl(&self) -> Result<Self> {
        self.ensure_gl()?;
        let inv = self.to_rational().inverse().expect("unimodular matrices are invertible");
        Ok(inv.map(|q| {
            debug_assert!(q.is_integer());
            q.to_integer()
        }))
    }

    /// Integer power, negative exponents through the exact inverse.
    pub fn pow_signed(&self, e: i32) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inverse_gl()?.pow(e.unsigned_abs()))
        }
    }

    /// Block-diagonal matrix with the given blocks.
    pub fn block_diag(blocks: &[&IntMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        m
    }

    /// Companion matrix of a monic polynomial (last column holds `-c_i`).
    pub fn companion(p: &CharPoly) -> Self {
        let n = p.degree();
        Self::from_fn(n, n, |i, j| {
            if j == n - 1 {
                -p.coeff(i)
            } else if i == j + 1 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    /// Largest absolute entry, as a cheap size measure.
    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl Serialize for Matrix<BigInt> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

/// JSON integer given as a number or a decimal string.
#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum IntEntry {
    Str(String),
    Int(i64),
}

impl IntEntry {
    pub(crate) fn into_bigint(self) -> Result<BigInt> {
        match self {
            IntEntry::Int(x) => Ok(BigInt::from(x)),
            IntEntry::Str(s) => s.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
        }
    }
}

impl<'de> Deserialize<'de> for Matrix<BigInt> {
    /// Accepts decimal strings or JSON integers for each entry.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<IntEntry>>::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(IntEntry::into_bigint).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Matrix::new(rows).map_err(D::Error::custom)
    }
}
