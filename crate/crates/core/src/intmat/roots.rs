//! Certified real-root isolation with Sturm sequences over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;

type Q = BigRational;

/// Half-open interval `(lo, hi]` holding exactly one real root, or the
/// degenerate interval `lo == hi` when the root is known exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct RootInterval {
    pub lo: Q,
    pub hi: Q,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(2.into())
    }

    pub fn midpoint_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    /// Half-width plus the rounding error of the `f64` midpoint.
    pub fn radius_f64(&self) -> f64 {
        let half = (self.width() / Q::from_integer(2.into())).to_f64().unwrap_or(f64::INFINITY);
        half + self.midpoint_f64().abs() * f64::EPSILON
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    /// Sign of the isolated root; never ambiguous because isolation splits at 0.
    pub fn sign(&self) -> i8 {
        if self.hi.is_zero() && self.lo.is_zero() {
            0
        } else if self.lo >= Q::zero() {
            1
        } else {
            -1
        }
    }
}

/// Sturm chain of the squarefree part of an integer polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    squarefree: Poly<Q>,
    /// Positive integer multiples of the chain members, for sign evaluation.
    chain: Vec<Vec<BigInt>>,
}

/// Clears denominators with a positive factor.
fn integral(p: &Poly<Q>) -> Vec<BigInt> {
    let den = p.coeffs().iter().fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()));
    p.coeffs().iter().map(|c| (c * Q::from_integer(den.clone())).to_integer()).collect()
}

/// Sign of `Σ c_i x^i` at `x = p/q`, from the homogeneous form
/// `Σ c_i p^i q^(d-i)` with `q > 0`.
fn sign_at(c: &[BigInt], x: &Q) -> i8 {
    let (p, q) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    for k in c.iter().rev() {
        acc = acc * p + k * &qpow;
        qpow *= q;
    }
    if acc.is_zero() {
        0
    } else if acc.is_positive() {
        1
    } else {
        -1
    }
}

impl SturmChain {
    pub fn new(p: &Poly<BigInt>) -> Self {
        Self::from_rational(&p.to_rational())
    }

    pub fn from_rational(p: &Poly<Q>) -> Self {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let squarefree = p.squarefree_part();
        let mut chain = vec![squarefree.clone(), squarefree.derivative()];
        while !chain.last().expect("nonempty").is_zero() {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            chain.push(Poly::zero().sub(&r));
        }
        chain.pop();
        SturmChain { squarefree, chain: chain.iter().map(integral).collect() }
    }

    pub fn squarefree(&self) -> &Poly<Q> {
        &self.squarefree
    }

    fn variations(&self, x: &Q) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let s = sign_at(p, x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Q, hi: &Q) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }

    /// Cauchy bound: every root has absolute value below it.
    pub fn root_bound(&self) -> Q {
        let p = &self.squarefree;
        let lead = p.lead().abs();
        let m = p.coeffs()[..p.coeffs().len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .fold(Q::zero(), |a, b| if b > a { b } else { a });
        m + Q::one()
    }

    /// Isolating intervals for all distinct real roots, ascending. The
    /// points -1, 0 and 1 are always interval boundaries.
    pub fn isolate(&self) -> Vec<RootInterval> {
        if self.squarefree.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let b = self.root_bound().max(Q::from_integer(2.into()));
        let splits = [-b.clone(), -Q::one(), Q::zero(), Q::one(), b];
        let mut out = Vec::new();
        for w in splits.windows(2) {
            self.isolate_in(w[0].clone(), w[1].clone(), &mut out);
        }
        out
    }

    fn isolate_in(&self, lo: Q, hi: Q, out: &mut Vec<RootInterval>) {
        match self.count(&lo, &hi) {
            0 => {}
            1 => out.push(self.tighten_exact(RootInterval { lo, hi })),
            _ => {
                let mid = (&lo + &hi) / Q::from_integer(2.into());
                self.isolate_in(lo, mid.clone(), out);
                self.isolate_in(mid, hi, out);
            }
        }
    }

    fn tighten_exact(&self, iv: RootInterval) -> RootInterval {
        if self.squarefree.eval(&iv.hi).is_zero() {
            RootInterval { lo: iv.hi.clone(), hi: iv.hi }
        } else {
            iv
        }
    }

    /// Bisects an isolating interval until its width is at most `width`.
    pub fn refine(&self, iv: &RootInterval, width: &Q) -> RootInterval {
        let mut iv = self.tighten_exact(iv.clone());
        // the root is simple in the squarefree part, so the sign flips across it
        let upper = sign_at(&self.chain[0], &iv.hi);
        while !iv.is_exact() && iv.width() > *width {
            let mid = iv.midpoint();
            let v = sign_at(&self.chain[0], &mid);
            if v == 0 {
                return RootInterval { lo: mid.clone(), hi: mid };
            }
            if v == upper {
                iv.hi = mid;
            } else {
                iv.lo = mid;
            }
        }
        iv
    }

    /// All distinct real roots, refined to the given width.
    pub fn real_roots(&self, width: f64) -> Vec<RootInterval> {
        let w = rational_from_f64(width);
        self.isolate().iter().map(|iv| self.refine(iv, &w)).collect()
    }
}

/// Exact rational value of a finite positive `f64` tolerance.
pub fn rational_from_f64(x: f64) -> Q {
    Q::from_float(x).unwrap_or_else(|| Q::new(1.into(), BigInt::from(10).pow(12)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_square_roots() {
        let s = SturmChain::new(&Poly::from_i64s(&[1, -3, 1]));
        let roots = s.real_roots(1e-12);
        assert_eq!(roots.len(), 2);
        let phi2 = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((roots[1].midpoint_f64() - phi2).abs() < 1e-11);
        assert!((roots[0].midpoint_f64() - 1.0 / phi2).abs() < 1e-11);
    }

    #[test]
    fn exact_roots_collapse() {
        let s = SturmChain::new(&Poly::from_i64s(&[-1, 0, 1]));
        let roots = s.isolate();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(RootInterval::is_exact));
        assert_eq!(roots[0].sign(), -1);
    }

    #[test]
    fn repeated_roots_counted_once() {
        // (x - 1)^2 (x + 2)
        let p = Poly::from_i64s(&[-1, 2, -1]).mul(&Poly::from_i64s(&[2, 1]));
        let p = Poly::from_i64s(&[1, -1]).mul(&p);
        let s = SturmChain::new(&p);
        assert_eq!(s.isolate().len(), 2);
    }

    #[test]
    fn cubic_with_one_real_root() {
        // x^3 - x - 1 has a single real root near 1.3247
        let s = SturmChain::new(&Poly::from_i64s(&[-1, -1, 0, 1]));
        let r = s.real_roots(1e-13);
        assert_eq!(r.len(), 1);
        assert!((r[0].midpoint_f64() - 1.324_717_957_244_746).abs() < 1e-12);
    }
}
