//! Exact facet description of the convex hull of finitely many dyadic points.
//!
//! Every finite `f64` is a dyadic rational, so after scaling by a common power
//! of two the points are integer vectors and all facet normals, offsets and
//! slacks are computed without rounding. Only the final clearance is
//! converted back to floating point.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::intmat::RatMatrix;

/// Supporting hyperplane `⟨normal, P⟩ ≤ offset` in scaled integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Facet {
    normal: Vec<BigInt>,
    offset: BigInt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactHull {
    dim: usize,
    /// Points are stored multiplied by `scale`.
    scale: BigInt,
    points: Vec<Vec<BigInt>>,
    facets: Vec<Facet>,
    norms: Vec<f64>,
    degenerate: bool,
}

/// Dyadic vector as (integer numerators, common denominator).
pub(crate) fn dyadic(x: &[f64]) -> Option<(Vec<BigInt>, BigInt)> {
    let qs: Vec<BigRational> = x.iter().map(|&v| BigRational::from_float(v)).collect::<Option<_>>()?;
    let den = qs.iter().map(|q| q.denom().clone()).max().unwrap_or_else(BigInt::one);
    let nums = qs.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    Some((nums, den))
}

impl ExactHull {
    /// Hull of already-scaled integer points; `scale` is the common factor.
    pub fn from_scaled(points: Vec<Vec<BigInt>>, scale: BigInt) -> Self {
        let dim = points.first().map_or(0, Vec::len);
        let mut uniq: Vec<Vec<BigInt>> = Vec::new();
        let mut seen = HashSet::new();
        for p in points {
            if seen.insert(p.clone()) {
                uniq.push(p);
            }
        }
        let degenerate = affine_rank(&uniq) < dim;
        let facets = if degenerate { Vec::new() } else { enumerate_facets(&uniq, dim) };
        let norms = facets.iter().map(|f| norm_f64(&f.normal)).collect();
        ExactHull { dim, scale, points: uniq, facets, norms, degenerate }
    }

    /// Hull of floating-point points, taken exactly.
    pub fn from_f64(points: &[Vec<f64>]) -> Option<Self> {
        let ds: Vec<(Vec<BigInt>, BigInt)> = points.iter().map(|p| dyadic(p)).collect::<Option<_>>()?;
        let scale = ds.iter().map(|(_, d)| d.clone()).max().unwrap_or_else(BigInt::one);
        let pts = ds.into_iter().map(|(n, d)| n.into_iter().map(|x| x * (&scale / &d)).collect()).collect();
        Some(Self::from_scaled(pts, scale))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Empty interior: the points span a proper affine subspace.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn points_f64(&self) -> Vec<Vec<f64>> {
        self.points
            .iter()
            .map(|p| p.iter().map(|x| BigRational::new(x.clone(), self.scale.clone()).to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }

    /// Smallest Euclidean distance from `x` to a facet hyperplane, positive
    /// inside. `-inf` for a degenerate hull; `None` for non-finite input.
    pub fn clearance(&self, x: &[f64]) -> Option<f64> {
        if self.degenerate {
            return Some(f64::NEG_INFINITY);
        }
        let (xs, den) = dyadic(x)?;
        let denom = &self.scale * &den;
        let mut best = f64::INFINITY;
        for (f, &nrm) in self.facets.iter().zip(&self.norms) {
            let dotp: BigInt = f.normal.iter().zip(&xs).map(|(a, b)| a * b).sum();
            let slack = &f.offset * &den - &self.scale * dotp;
            let c = BigRational::new(slack, denom.clone()).to_f64().unwrap_or(f64::NAN) / nrm;
            best = best.min(c);
        }
        Some(best)
    }
}

fn norm_f64(v: &[BigInt]) -> f64 {
    let m = v.iter().map(|x| x.abs()).max().unwrap_or_default();
    if m.is_zero() {
        return 0.0;
    }
    let s: f64 = v.iter().map(|x| BigRational::new(x.clone(), m.clone()).to_f64().unwrap_or(0.0).powi(2)).sum();
    s.sqrt() * m.to_f64().unwrap_or(f64::INFINITY)
}

fn affine_rank(points: &[Vec<BigInt>]) -> usize {
    let Some(p0) = points.first() else { return 0 };
    if points.len() == 1 {
        return 0;
    }
    let rows: Vec<Vec<BigRational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| BigRational::from_integer(a - b)).collect())
        .collect();
    RatMatrix::new(rows).map(|m| m.rref().1.len()).unwrap_or(0)
}

/// Normal to the hyperplane through `n` points: the generalised cross
/// product of the `n - 1` difference vectors.
fn hyperplane_normal(points: &[&Vec<BigInt>]) -> Vec<BigInt> {
    let n = points[0].len();
    let diffs: Vec<Vec<BigInt>> =
        points[1..].iter().map(|p| p.iter().zip(points[0].iter()).map(|(a, b)| a - b).collect()).collect();
    match n {
        2 => return vec![diffs[0][1].clone(), -&diffs[0][0]],
        3 => {
            let (u, v) = (&diffs[0], &diffs[1]);
            return vec![&u[1] * &v[2] - &u[2] * &v[1], &u[2] * &v[0] - &u[0] * &v[2], &u[0] * &v[1] - &u[1] * &v[0]];
        }
        _ => {}
    }
    (0..n)
        .map(|i| {
            let cols: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let minor = crate::intmat::IntMatrix::from_fn(n - 1, n - 1, |r, c| diffs[r][cols[c]].clone());
            let d = minor.det();
            if i % 2 == 0 { d } else { -d }
        })
        .collect()
}

fn enumerate_facets(points: &[Vec<BigInt>], dim: usize) -> Vec<Facet> {
    let m = points.len();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut idx: Vec<usize> = (0..dim).collect();
    if m < dim {
        return out;
    }
    loop {
        let chosen: Vec<&Vec<BigInt>> = idx.iter().map(|&i| &points[i]).collect();
        let mut normal = hyperplane_normal(&chosen);
        if normal.iter().any(|x| !x.is_zero()) {
            let g = normal.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            for x in normal.iter_mut() {
                *x = &*x / &g;
            }
            let offset: BigInt = normal.iter().zip(chosen[0]).map(|(a, b)| a * b).sum();
            let (mut pos, mut neg) = (false, false);
            for p in points {
                let v: BigInt = normal.iter().zip(p).map(|(a, b)| a * b).sum::<BigInt>() - &offset;
                pos |= v.is_positive();
                neg |= v.is_negative();
                if pos && neg {
                    break;
                }
            }
            if !(pos && neg) {
                let f = if pos {
                    Facet { normal: normal.iter().map(|x| -x).collect(), offset: -offset }
                } else {
                    Facet { normal, offset }
                };
                if seen.insert(f.clone()) {
                    out.push(f);
                }
            }
        }
        // next combination in lexicographic order
        let mut k = dim;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] < m - dim + k {
                idx[k] += 1;
                for j in k + 1..dim {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
