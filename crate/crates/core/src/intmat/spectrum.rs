//! Spectral classification of GL_n(Z) matrices, decided in exact arithmetic.
//!
//! Floating-point numbers only appear in the reported eigenvalue
//! approximations, each carrying a certified radius.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::cyclotomic::spec_on_unit_circle;
use super::matrix::IntMatrix;
use super::poly::{CharPoly, Poly};
use super::roots::{rational_from_f64, RootInterval, SturmChain};
use crate::error::{Error, Result};

/// Default bisection width for eigenvalue intervals.
pub const DEFAULT_ROOT_WIDTH: f64 = 1e-12;

/// Spectral case of a GL_2(Z) or GL_3(Z) matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpectrumTag {
    /// n = 3: spectrum inside {+1, -1}.
    Case1,
    /// n = 3: ±1 together with a conjugate pair on the unit circle.
    Case2C,
    /// n = 3: ±1 together with a real pair λ, ±1/λ off the unit circle.
    Case2R,
    /// n = 3: irreducible characteristic polynomial.
    Case3,
    /// n = 2: both eigenvalues on the unit circle.
    UnitCircle2,
    /// n = 2: real eigenvalues λ, ±1/λ with |λ| ≠ 1.
    Hyperbolic2,
}

/// Eigenvalue approximation `re + i·im`, exact value within `radius`
/// (Euclidean) of the reported centre.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
    pub radius: f64,
    pub multiplicity: usize,
}

impl Eigenvalue {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_real(&self) -> bool {
        self.im == 0.0
    }

    fn real(iv: &RootInterval, multiplicity: usize) -> Self {
        Eigenvalue { re: iv.midpoint_f64(), im: 0.0, radius: iv.radius_f64(), multiplicity }
    }
}

/// Real number with a certified absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusBound {
    pub value: f64,
    pub error: f64,
}

impl RadiusBound {
    pub fn lo(&self) -> f64 {
        self.value - self.error
    }

    pub fn hi(&self) -> f64 {
        self.value + self.error
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumClass {
    pub tag: SpectrumTag,
    /// Every eigenvalue is real. For `Case3` this is condition (a) of the
    /// classification: three distinct real eigenvalues.
    pub all_real: bool,
    pub charpoly: CharPoly,
    pub eigenvalues: Vec<Eigenvalue>,
    pub spectral_radius: RadiusBound,
}

impl SpectrumClass {
    pub fn on_unit_circle(&self) -> bool {
        matches!(self.tag, SpectrumTag::Case1 | SpectrumTag::Case2C | SpectrumTag::UnitCircle2)
    }

    /// Three distinct real eigenvalues, none rational.
    pub fn is_totally_real_cubic(&self) -> bool {
        self.tag == SpectrumTag::Case3 && self.all_real
    }
}

/// Exact rational roots of a characteristic polynomial with unit constant
/// term. By the rational root theorem these divide `c_0 = ±1`.
pub fn rational_eigenvalues(p: &CharPoly) -> Result<BTreeSet<i32>> {
    p.ensure_unit_constant()?;
    let mut out = BTreeSet::new();
    for cand in [1i32, -1] {
        if p.eval(&BigInt::from(cand)).is_zero() {
            out.insert(cand);
        }
    }
    debug_assert!(out.iter().all(|r| r.abs() == 1));
    Ok(out)
}

/// Whether the polynomial has a repeated complex root: `deg gcd(P, P') ≥ 1` over Q.
pub fn has_multiple_roots(p: &CharPoly) -> bool {
    let q = p.poly().to_rational();
    q.gcd(&q.derivative()).degree().unwrap_or(0) >= 1
}

fn multiplicity_of(p: &Poly<BigInt>, root: i64) -> usize {
    let lin = Poly::linear_root(BigInt::from(root));
    let mut rest = p.clone();
    let mut k = 0;
    while let Some(q) = rest.div_exact_monic(&lin) {
        rest = q;
        k += 1;
    }
    k
}

/// Roots of a monic quadratic `x^2 + b x + c` with a negative discriminant.
fn complex_pair(b: &BigInt, c: &BigInt) -> [Eigenvalue; 2] {
    let disc = b * b - BigInt::from(4) * c;
    debug_assert!(disc.is_negative());
    let re = -b.to_f64().unwrap_or(f64::NAN) / 2.0;
    let im = (-disc).to_f64().unwrap_or(f64::NAN).sqrt() / 2.0;
    let radius = 4.0 * f64::EPSILON * re.hypot(im).max(1.0);
    [
        Eigenvalue { re, im, radius, multiplicity: 1 },
        Eigenvalue { re, im: -im, radius, multiplicity: 1 },
    ]
}

/// Eigenvalues of a monic integer quadratic.
fn quadratic_eigenvalues(q: &Poly<BigInt>, width: f64) -> Vec<Eigenvalue> {
    let (c, b) = (q.coeff(0), q.coeff(1));
    let disc = &b * &b - BigInt::from(4) * &c;
    if disc.is_negative() {
        return complex_pair(&b, &c).to_vec();
    }
    let sturm = SturmChain::new(q);
    let roots = sturm.real_roots(width);
    if roots.len() == 1 {
        return vec![Eigenvalue::real(&roots[0], 2)];
    }
    roots.iter().map(|iv| Eigenvalue::real(iv, 1)).collect()
}

/// Conjugate pair of an irreducible cubic with a single real root `r`,
/// recovered from `λ + λ̄ = -c_2 - r` and `|λ|^2 = -c_0 / r`.
fn cubic_complex_pair(p: &CharPoly, r: &RootInterval) -> [Eigenvalue; 2] {
    let c2 = p.coeff(2).to_f64().unwrap_or(f64::NAN);
    let c0 = p.coeff(0).to_f64().unwrap_or(f64::NAN);
    let at = |x: f64| {
        let re = (-c2 - x) / 2.0;
        let m2 = -c0 / x;
        (re, (m2 - re * re).max(0.0).sqrt())
    };
    let (re, im) = at(r.midpoint_f64());
    let dev = [r.lo_f64(), r.hi_f64()]
        .iter()
        .map(|&x| {
            let (a, b) = at(x);
            (a - re).hypot(b - im)
        })
        .fold(0.0, f64::max);
    let radius = dev + 8.0 * f64::EPSILON * re.hypot(im).max(1.0);
    [
        Eigenvalue { re, im, radius, multiplicity: 1 },
        Eigenvalue { re, im: -im, radius, multiplicity: 1 },
    ]
}

pub fn classify_spectrum(a: &IntMatrix) -> Result<SpectrumClass> {
    classify_spectrum_with(a, DEFAULT_ROOT_WIDTH)
}

/// Exact spectral classification; `width` bounds the eigenvalue intervals.
pub fn classify_spectrum_with(a: &IntMatrix, width: f64) -> Result<SpectrumClass> {
    a.ensure_square()?;
    let n = a.dim();
    if n != 2 && n != 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    a.ensure_gl()?;
    let p = a.charpoly();
    let on_circle = spec_on_unit_circle(&p)?;
    let (tag, eigenvalues) = if n == 2 {
        let tag = if on_circle { SpectrumTag::UnitCircle2 } else { SpectrumTag::Hyperbolic2 };
        (tag, quadratic_eigenvalues(p.poly(), width))
    } else {
        classify_cubic(&p, width)?
    };
    let all_real = eigenvalues.iter().all(Eigenvalue::is_real);
    let spectral_radius = if on_circle {
        RadiusBound { value: 1.0, error: 0.0 }
    } else {
        spectral_radius(a, width)?
    };
    Ok(SpectrumClass { tag, all_real, charpoly: p, eigenvalues, spectral_radius })
}

fn classify_cubic(p: &CharPoly, width: f64) -> Result<(SpectrumTag, Vec<Eigenvalue>)> {
    let rational = rational_eigenvalues(p)?;
    let Some(&first) = rational.iter().next_back() else {
        // no rational root: the cubic is irreducible over Q
        let sturm = SturmChain::new(p.poly());
        let roots = sturm.real_roots(width);
        let eigenvalues = match roots.len() {
            3 => roots.iter().map(|iv| Eigenvalue::real(iv, 1)).collect(),
            1 => {
                let mut v = vec![Eigenvalue::real(&roots[0], 1)];
                v.extend(cubic_complex_pair(p, &roots[0]));
                v
            }
            k => unreachable!("irreducible cubic with {k} distinct real roots"),
        };
        return Ok((SpectrumTag::Case3, eigenvalues));
    };
    let lin = Poly::linear_root(BigInt::from(first));
    let quad = p.poly().div_exact_monic(&lin).expect("rational root divides");
    let quad_rational = [1i64, -1].into_iter().any(|s| quad.eval(&BigInt::from(s)).is_zero());
    if quad_rational {
        let mut eigenvalues = Vec::new();
        for s in [1i64, -1] {
            let k = multiplicity_of(p.poly(), s);
            if k > 0 {
                eigenvalues.push(Eigenvalue { re: s as f64, im: 0.0, radius: 0.0, multiplicity: k });
            }
        }
        return Ok((SpectrumTag::Case1, eigenvalues));
    }
    let mut eigenvalues = vec![Eigenvalue { re: first as f64, im: 0.0, radius: 0.0, multiplicity: 1 }];
    eigenvalues.extend(quadratic_eigenvalues(&quad, width));
    let quad_poly = CharPoly::new(quad)?;
    let tag = if spec_on_unit_circle(&quad_poly)? { SpectrumTag::Case2C } else { SpectrumTag::Case2R };
    Ok((tag, eigenvalues))
}

/// Certified spectral radius.
///
/// `ρ²` is the largest real root of the characteristic polynomial of
/// `A ⊗ A`, whose roots are the products `λ_i λ_j`; it is isolated with a
/// Sturm chain and refined until the error bound is below `tol`.
pub fn spectral_radius(a: &IntMatrix, tol: f64) -> Result<RadiusBound> {
    a.ensure_gl()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let p = a.charpoly();
    if spec_on_unit_circle(&p)? {
        return Ok(RadiusBound { value: 1.0, error: 0.0 });
    }
    let kron = a.kronecker(a).charpoly();
    let sturm = SturmChain::new(kron.poly());
    let top = sturm.isolate().pop().expect("ρ² ≥ 1 is a real root");
    let mut width = tol;
    loop {
        let iv = sturm.refine(&top, &rational_from_f64(width));
        let (lo, hi) = (iv.lo_f64().max(0.0).sqrt(), iv.hi_f64().sqrt());
        let value = (lo + hi) / 2.0;
        let error = (hi - lo) / 2.0 + 4.0 * f64::EPSILON * value;
        if error <= tol || iv.is_exact() || width < 1e-300 {
            return Ok(RadiusBound { value, error });
        }
        width /= 4.0;
    }
}

/// Exact test `|λ| = 1` for every eigenvalue, taking a matrix.
pub fn matrix_on_unit_circle(a: &IntMatrix) -> Result<bool> {
    spec_on_unit_circle(&a.charpoly())
}
