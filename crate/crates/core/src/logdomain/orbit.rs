//! Real orbits `{A^t r}` inside invariant regions, with truncation escalation.

use serde::{Deserialize, Serialize};

use super::eigen::EigenBasis;
use super::region::{ConvexRegion, DEFAULT_K_CAP};
use crate::error::{Error, Result};
use crate::num::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitOptions {
    /// Number of sampled parameters.
    pub samples: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub k_cap: usize,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions { samples: 101, t_min: 0.0, t_max: 1.0, k_cap: DEFAULT_K_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct OrbitPointReport<T> {
    /// Eigen-coordinates of the orbit point.
    pub r: Vec<T>,
    pub r_standard: Vec<T>,
    /// Signs of the input point; the construction runs in the matching cone.
    pub signs: Vec<i8>,
    /// Parallelepiped vertices `V_1 ..` in eigen-coordinates.
    pub vertices: Vec<Vec<T>>,
    pub min_vertex_clearance: T,
    pub samples: usize,
    pub min_orbit_clearance: T,
    pub worst_t: T,
    pub k_used: Option<usize>,
    pub region: ConvexRegion<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayReport {
    pub passed: bool,
    pub samples: usize,
    pub worst_clearance: f64,
    pub k_used: Option<usize>,
    pub note: Option<String>,
}

fn normalized_frame<T: Real>(region: &ConvexRegion<T>) -> Result<EigenBasis<T>> {
    let (_, b) = region
        .frame()
        .ok_or_else(|| Error::InvalidArgument(format!("{} region carries no eigen frame", region.kind())))?;
    if !b.is_normalized() {
        return Err(Error::SpectrumNotTotallyRealPositive(
            "need eigenvalues λ_1 > 1 > λ_2 > ... > 0 for the region's matrix".into(),
        ));
    }
    Ok(b.clone())
}

fn min_clearance<T: Real>(region: &ConvexRegion<T>, basis: &EigenBasis<T>, pts: &[Vec<T>]) -> Result<(T, usize)> {
    let mut best = (T::infinity(), 0);
    for (i, p) in pts.iter().enumerate() {
        let c = region.clearance(&basis.to_standard(p))?;
        if c < best.0 || c.is_nan() {
            best = (c, i);
        }
    }
    Ok(best)
}

fn sample_params<T: Real>(opts: &OrbitOptions) -> Vec<T> {
    let m = opts.samples.max(2);
    (0..m).map(|i| T::lit(opts.t_min + (opts.t_max - opts.t_min) * i as f64 / (m - 1) as f64)).collect()
}

/// Point `r` whose whole real orbit `{A^t r}` lies in the region, built from
/// an interior point `q` (eigen-coordinates) as `r = (λ_1 q_1, q_2, λ_3^{-1} q_3)`
/// for n = 3 and `r = (λ_1 q_1, q_2)` for n = 2.
///
/// The parallelepiped vertices and `A^t r` for sampled `t` are checked for
/// membership; orbit hulls are escalated on failure.
pub fn find_r_orbit_point<T: Real>(
    region: &ConvexRegion<T>,
    q: &[T],
    opts: &OrbitOptions,
) -> Result<OrbitPointReport<T>> {
    let n = region.dim();
    if n != 2 && n != 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if q.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: q.len() });
    }
    let basis = normalized_frame(region)?;
    if q.iter().any(|&x| x == T::zero()) {
        return Err(Error::PointOutsideRegion("q lies on an eigen-hyperplane".into()));
    }
    if !region.contains_point(&basis.to_standard(q), T::zero())? {
        return Err(Error::PointOutsideRegion(format!("q = {q:?} (eigen-coordinates)")));
    }
    let l = basis.values();
    let signs: Vec<i8> = q.iter().map(|&x| if x > T::zero() { 1 } else { -1 }).collect();
    let first = [l[0] * q[0], l[0] * l[0] * q[0]];
    let second = [q[1], l[1] * q[1]];
    let (r, vertices): (Vec<T>, Vec<Vec<T>>) = if n == 3 {
        let third = [q[2], q[2] / l[2]];
        let vs = (0..8).map(|i| vec![first[i >> 2 & 1], second[i >> 1 & 1], third[i & 1]]).collect();
        (vec![first[0], second[0], third[1]], vs)
    } else {
        let vs = (0..4).map(|i| vec![first[i >> 1 & 1], second[i & 1]]).collect();
        (vec![first[0], second[0]], vs)
    };
    let ts = sample_params::<T>(opts);
    let orbit: Vec<Vec<T>> = ts.iter().map(|&t| basis.flow(t, &r)).collect();
    let mut region = region.clone();
    loop {
        let (vc, vi) = min_clearance(&region, &basis, &vertices)?;
        let (oc, oi) = min_clearance(&region, &basis, &orbit)?;
        if vc > T::zero() && oc > T::zero() {
            return Ok(OrbitPointReport {
                r_standard: basis.to_standard(&r),
                r,
                signs,
                vertices,
                min_vertex_clearance: vc,
                samples: ts.len(),
                min_orbit_clearance: oc,
                worst_t: ts[oi],
                k_used: region.truncation(),
                region,
            });
        }
        match region.escalate(opts.k_cap) {
            Some(next) => region = next,
            None if vc <= T::zero() => {
                return Err(Error::VerificationFailed {
                    at: format!("vertex V{}", vi + 1),
                    clearance: vc.to_f64().unwrap_or(f64::NAN),
                })
            }
            None => {
                return Err(Error::VerificationFailed {
                    at: format!("t = {}", ts[oi]),
                    clearance: oc.to_f64().unwrap_or(f64::NAN),
                })
            }
        }
    }
}

/// Checks that moving an interior point of the all-positive cone along
/// `+X_1` and `+X_n` (by up to `t_max`) stays in the region.
pub fn ray_closure_check<T: Real>(
    region: &ConvexRegion<T>,
    p: &[T],
    samples: usize,
    t_max: T,
    k_cap: usize,
) -> Result<(RayReport, ConvexRegion<T>)> {
    let n = region.dim();
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.len() });
    }
    let basis = normalized_frame(region)?;
    if p.iter().any(|&x| x <= T::zero()) || !region.contains_point(&basis.to_standard(p), T::zero())? {
        return Err(Error::PointOutsideRegion(format!("p = {p:?} is not in the region's positive cone")));
    }
    let m = samples.max(1);
    let mut pts = Vec::with_capacity(2 * m);
    for i in 1..=m {
        let t = t_max * T::lit(i as f64 / m as f64);
        for axis in [0, n - 1] {
            let mut x = p.to_vec();
            x[axis] = x[axis] + t;
            pts.push(x);
        }
    }
    let mut region = region.clone();
    loop {
        let (c, _) = min_clearance(&region, &basis, &pts)?;
        let c64 = c.to_f64().unwrap_or(f64::NAN);
        if c > T::zero() {
            let report = RayReport { passed: true, samples: m, worst_clearance: c64, k_used: region.truncation(), note: None };
            return Ok((report, region));
        }
        match region.escalate(k_cap) {
            Some(next) => region = next,
            None => {
                let note = region.truncation().map(|k| format!("still failing at the truncation cap K = {k}"));
                let report = RayReport { passed: false, samples: m, worst_clearance: c64, k_used: region.truncation(), note };
                return Ok((report, region));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::{CharPoly, IntMatrix};
    use crate::logdomain::region::{octant_domains, orbit_hull, quadrant_domains};

    fn cubic() -> IntMatrix {
        IntMatrix::companion(&CharPoly::from_i64s(&[1, -2, -1, 1]).unwrap())
    }

    #[test]
    fn octant_orbit_point() {
        let oct = octant_domains::<f64>(&cubic()).unwrap();
        let rep = find_r_orbit_point(&oct[0], &[1.0, 1.0, 1.0], &OrbitOptions::default()).unwrap();
        let (_, b) = oct[0].frame().unwrap();
        let l = b.values();
        assert_eq!(rep.r, vec![l[0], 1.0, 1.0 / l[2]]);
        assert_eq!(rep.vertices.len(), 8);
        // V7 = A r
        let ar = b.flow(1.0, &rep.r);
        for (u, v) in ar.iter().zip(&rep.vertices[6]) {
            assert!((u - v).abs() < 1e-12 * u.abs().max(1.0));
        }
    }

    #[test]
    fn sign_flipped_point() {
        let oct = octant_domains::<f64>(&cubic()).unwrap();
        // mask 1 flips X_1
        let rep = find_r_orbit_point(&oct[1], &[-1.0, 2.0, 0.5], &OrbitOptions::default()).unwrap();
        assert_eq!(rep.signs, vec![-1, 1, 1]);
        assert!(rep.r[0] < 0.0);
        assert!(matches!(
            find_r_orbit_point(&oct[0], &[-1.0, 2.0, 0.5], &OrbitOptions::default()),
            Err(Error::PointOutsideRegion(_))
        ));
    }

    #[test]
    fn quadrant_orbit_point() {
        let g = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let q = quadrant_domains::<f64>(&g).unwrap();
        let rep = find_r_orbit_point(&q[0], &[1.0, 1.0], &OrbitOptions::default()).unwrap();
        assert_eq!(rep.vertices.len(), 4);
        assert!(rep.min_orbit_clearance > 0.0);
    }

    #[test]
    fn ray_check_escalates_orbit_hull() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let q = quadrant_domains::<f64>(&a).unwrap();
        let (_, b) = q[0].frame().unwrap();
        let l = b.values()[0];
        let hull = orbit_hull::<f64>(&a, &b.to_standard(&[1.0, 1.0]), 1).unwrap();
        // centroid of the triangle {p, A p, A^-1 p}
        let c = (1.0 + l + 1.0 / l) / 3.0;
        let (rep, grown) = ray_closure_check(&hull, &[c, c], 20, 0.5, 64).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!(grown.truncation(), Some(2));
        let (rep, _) = ray_closure_check(&hull, &[c, c], 20, 0.5, 1).unwrap();
        assert!(!rep.passed && rep.worst_clearance < 0.0);
    }
}
