//! Unimodular vectors, SL_n(Z) completion and the induced action on Z^n / <v>.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{CharPoly, IntEntry, IntMatrix, Poly};

/// Integer vector, serialised as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<IntEntry>", into = "Vec<String>")]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    pub fn from_i64s(v: &[i64]) -> Self {
        IntVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// gcd of the entries (0 for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl TryFrom<Vec<IntEntry>> for IntVector {
    type Error = Error;
    fn try_from(v: Vec<IntEntry>) -> Result<Self> {
        v.into_iter().map(IntEntry::into_bigint).collect::<Result<Vec<_>>>().map(IntVector)
    }
}

impl From<IntVector> for Vec<String> {
    fn from(v: IntVector) -> Self {
        v.0.iter().map(ToString::to_string).collect()
    }
}

pub fn is_unimodular(v: &IntVector) -> Result<bool> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.content().is_one())
}

/// `(x, y)` with `a x - b y = 1`, for coprime `a, b`; `x` is reduced into
/// `[0, |b|)` when `b ≠ 0`.
fn bezout_pair(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    if b.is_zero() {
        // a = ±1
        return (a.clone(), BigInt::zero());
    }
    let m = b.abs();
    let e = a.extended_gcd(&m);
    debug_assert!(e.gcd.is_one());
    let x = e.x.mod_floor(&m);
    let y = (a * &x - BigInt::one()) / b;
    (x, y)
}

/// Deterministic `M ∈ SL_n(Z)` whose first column is the unimodular vector `v`.
///
/// For n = 2 this is `[[a, y], [b, x]]` with `a x - b y = 1`. For larger n,
/// with `g = gcd(v_1..v_{n-1})` and `w = (v_1..v_{n-1}) / g`,
/// `M = diag(complete(w), 1) · [[g, 0, y], [0, I, 0], [v_n, 0, x]]`
/// where `g x - v_n y = 1`.
pub fn complete_to_slnz(v: &IntVector) -> Result<IntMatrix> {
    if !is_unimodular(v)? {
        return Err(Error::NotUnimodular(v.content().to_string()));
    }
    Ok(complete_unchecked(&v.0))
}

fn complete_unchecked(v: &[BigInt]) -> IntMatrix {
    let n = v.len();
    match n {
        1 => IntMatrix::from_fn(1, 1, |_, _| v[0].clone()),
        2 => {
            let (x, y) = bezout_pair(&v[0], &v[1]);
            IntMatrix::new(vec![vec![v[0].clone(), y], vec![v[1].clone(), x]]).expect("2x2")
        }
        _ => {
            let head = &v[..n - 1];
            let g = head.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let w: Vec<BigInt> = if g.is_zero() {
                (0..n - 1).map(|i| if i == 0 { BigInt::one() } else { BigInt::zero() }).collect()
            } else {
                head.iter().map(|x| x / &g).collect()
            };
            let inner = complete_unchecked(&w);
            let (x, y) = bezout_pair(&g, &v[n - 1]);
            IntMatrix::from_fn(n, n, |i, j| match (i == n - 1, j) {
                (false, 0) => &g * &w[i],
                (false, j) if j == n - 1 => &y * &w[i],
                (false, j) => inner[(i, j)].clone(),
                (true, 0) => v[n - 1].clone(),
                (true, j) if j == n - 1 => x.clone(),
                (true, _) => BigInt::zero(),
            })
        }
    }
}

/// Primitive integer vector fixed by every generator, or `None` when the
/// common fixed space is `{0}`.
///
/// When the fixed space has dimension above one, the vector returned is the
/// nullspace basis vector attached to the lowest free column of the reduced
/// row echelon form of the stacked system `(A_i - I) x = 0`; it is scaled to
/// be primitive with its first nonzero entry positive.
pub fn common_fixed_vector(gens: &[IntMatrix]) -> Result<Option<IntVector>> {
    let n = gens.first().ok_or(Error::EmptyGenerators)?.dim();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for g in gens {
        g.ensure_square()?;
        if g.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.dim() });
        }
        let d = g.minus_identity().to_rational();
        rows.extend(d.to_rows());
    }
    let stacked = crate::intmat::RatMatrix::new(rows)?;
    let Some(basis) = stacked.nullspace().into_iter().next() else {
        return Ok(None);
    };
    Ok(Some(primitive(&basis)))
}

fn primitive(v: &[BigRational]) -> IntVector {
    let lcm = v.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    IntVector(ints.iter().map(|x| x / &g * &sign).collect())
}

/// Matrix of the action of `A` on `Z^n / <v>` in the basis formed by columns
/// `2..n` of `complete_to_slnz(v)`.
pub fn quotient_action(a: &IntMatrix, v: &IntVector) -> Result<IntMatrix> {
    a.ensure_square()?;
    let n = a.dim();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    let m = complete_to_slnz(v)?;
    if a.mul_vec(&v.0) != v.0 {
        return Err(Error::NotFixed);
    }
    let m_inv = m.inverse_gl()?;
    let b = &(&m_inv * a) * &m;
    debug_assert!(b.column(0) == IntMatrix::identity(n).column(0));
    let idx: Vec<usize> = (1..n).collect();
    let q = b.submatrix(&idx, &idx);
    debug_assert!(factorization_holds(a, &q));
    Ok(q)
}

/// `charpoly(A) = (x - 1) · charpoly(A')`, checked exactly.
pub fn factorization_holds(a: &IntMatrix, quotient: &IntMatrix) -> bool {
    let lin = Poly::linear_root(BigInt::one());
    let rhs = lin.mul(quotient.charpoly().poly());
    CharPoly::new(rhs).is_ok_and(|p| p == a.charpoly())
}
