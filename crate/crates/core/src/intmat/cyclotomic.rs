//! Cyclotomic polynomials and the Kronecker unit-circle test.

use std::cell::RefCell;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::poly::{CharPoly, Poly};
use crate::error::Result;

/// Euler's totient.
pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut out = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// All `m` with `φ(m) ≤ degree`, ascending. Uses `φ(m) ≥ sqrt(m/2)`, so
/// `m ≤ 2·degree²` bounds the search.
pub fn indices_up_to_degree(degree: usize) -> Vec<u64> {
    let d = degree as u64;
    (1..=2 * d * d + 2).filter(|&m| euler_phi(m) <= d).collect()
}

/// The cyclotomic polynomials `Φ_1 .. Φ_max`, computed by exact division
/// `x^m - 1 = ∏_{d | m} Φ_d`.
pub fn cyclotomic_table(max: u64) -> Vec<Poly<BigInt>> {
    let mut table: Vec<Poly<BigInt>> = Vec::with_capacity(max as usize);
    for m in 1..=max {
        let mut p = Poly::monomial_plus(m as usize, -BigInt::one());
        for d in (1..m).filter(|d| m % d == 0) {
            p = p.div_exact_monic(&table[(d - 1) as usize]).expect("Φ_d divides x^m - 1");
        }
        table.push(p);
    }
    table
}

pub fn cyclotomic(m: u64) -> Poly<BigInt> {
    assert!(m >= 1, "cyclotomic index starts at 1");
    with_table(m, |t| t[(m - 1) as usize].clone())
}

thread_local! {
    static TABLE: RefCell<Vec<Poly<BigInt>>> = const { RefCell::new(Vec::new()) };
}

fn with_table<R>(max: u64, f: impl FnOnce(&[Poly<BigInt>]) -> R) -> R {
    TABLE.with(|cell| {
        let mut t = cell.borrow_mut();
        if (t.len() as u64) < max {
            *t = cyclotomic_table(max);
        }
        f(&t)
    })
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Necessary condition for all roots on the unit circle:
/// `|c_{n-k}| ≤ C(n, k)` since `c_{n-k}` is a signed elementary symmetric
/// function of `n` roots of modulus one.
pub fn coefficient_bound_holds(p: &CharPoly) -> bool {
    let n = p.degree();
    (0..=n).all(|k| p.coeff(n - k).abs() <= binomial(n, k))
}

/// Exact decision of "every complex root has modulus 1" for a monic integer
/// polynomial with unit constant term: by Kronecker's theorem this holds iff
/// the polynomial is a product of cyclotomic factors.
pub fn spec_on_unit_circle(p: &CharPoly) -> Result<bool> {
    p.ensure_unit_constant()?;
    if !coefficient_bound_holds(p) {
        return Ok(false);
    }
    Ok(cyclotomic_factorization(p).is_some())
}

/// Multiset of cyclotomic indices `m` with `p = ∏ Φ_m`, if one exists.
pub fn cyclotomic_factorization(p: &CharPoly) -> Option<Vec<u64>> {
    let n = p.degree();
    let indices = indices_up_to_degree(n);
    let max = indices.last().copied().unwrap_or(1);
    with_table(max, |table| divide_out(p, &indices, table))
}

fn divide_out(p: &CharPoly, indices: &[u64], table: &[Poly<BigInt>]) -> Option<Vec<u64>> {
    let mut rest = p.poly().clone();
    let mut factors = Vec::new();
    for &m in indices {
        let phi = &table[(m - 1) as usize];
        while rest.degree().unwrap_or(0) >= phi.degree().unwrap_or(0) && rest.degree().unwrap_or(0) > 0 {
            match rest.div_exact_monic(phi) {
                Some(q) => {
                    rest = q;
                    factors.push(m);
                }
                None => break,
            }
        }
    }
    (rest.degree() == Some(0) && rest.coeff(0).is_one()).then_some(factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), Poly::from_i64s(&[-1, 1]));
        assert_eq!(cyclotomic(3), Poly::from_i64s(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), Poly::from_i64s(&[1, 0, 1]));
        assert_eq!(cyclotomic(12), Poly::from_i64s(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(7).degree(), Some(6));
    }

    #[test]
    fn totient_index_bound() {
        assert_eq!(indices_up_to_degree(1), vec![1, 2]);
        assert_eq!(indices_up_to_degree(2), vec![1, 2, 3, 4, 6]);
        for d in 1..=8 {
            for m in indices_up_to_degree(d) {
                assert!(euler_phi(m) as usize <= d);
            }
            // nothing beyond the search bound qualifies
            let b = 2 * (d as u64).pow(2) + 2;
            assert!((b + 1..b + 200).all(|m| euler_phi(m) as usize > d));
        }
    }

    #[test]
    fn unit_circle_examples() {
        let p = |c: &[i64]| CharPoly::from_i64s(c).unwrap();
        assert!(spec_on_unit_circle(&p(&[1, 1, 1])).unwrap());
        assert!(!spec_on_unit_circle(&p(&[1, -3, 1])).unwrap());
        assert!(spec_on_unit_circle(&p(&[-1, 3, -3, 1])).unwrap());
        assert!(spec_on_unit_circle(&p(&[1, 0, 0, 0, 0, 0, 1])).unwrap());
        // x^2 - x + 1 is Φ_6; x^2 + x - 1 is not
        assert!(spec_on_unit_circle(&p(&[1, -1, 1])).unwrap());
        assert!(!spec_on_unit_circle(&p(&[-1, 1, 1])).unwrap());
        assert!(spec_on_unit_circle(&p(&[2, 0, 1])).is_err());
    }

    #[test]
    fn factorization_multiplicities() {
        let p = CharPoly::from_i64s(&[1, 2, 1]).unwrap();
        assert_eq!(cyclotomic_factorization(&p), Some(vec![2, 2]));
    }
}
