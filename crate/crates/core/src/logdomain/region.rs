//! Open convex regions modelling `log D`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dense;
use super::eigen::{normalize_hyperbolic, EigenBasis};
use super::hull::{dyadic, ExactHull};
use super::lp;
use crate::error::{Error, Result};
use crate::intmat::{IntMatrix, RatMatrix};
use crate::num::Real;

/// Largest truncation order reached by hull escalation.
pub const DEFAULT_K_CAP: usize = 64;

/// Open cone `{ Σ a_j X_j : s_j a_j > 0 }` over the eigenbasis of a
/// normalised power of `matrix`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cone<T> {
    matrix: IntMatrix,
    exponent: i32,
    basis: EigenBasis<T>,
    dual_norms: Vec<T>,
    signs: Vec<i8>,
}

/// Interior of the convex hull of `{A^k p : |k| ≤ K}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitHull<T> {
    matrix: IntMatrix,
    basepoint: Vec<T>,
    k: usize,
    hull: ExactHull,
    frame: Option<(i32, EigenBasis<T>)>,
}

/// Open halfspace `⟨normal, x⟩ < offset`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace<T> {
    pub normal: Vec<T>,
    pub offset: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HPolytope<T> {
    dim: usize,
    raw: Vec<Halfspace<f64>>,
    /// Unit-normal rows; rows with a zero normal are dropped when vacuous.
    unit: Vec<Halfspace<T>>,
    empty: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConvexRegion<T> {
    Cone(Cone<T>),
    OrbitHull(OrbitHull<T>),
    HPolytope(HPolytope<T>),
}

fn to_f64s<T: Real>(x: &[T]) -> Vec<f64> {
    x.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

impl<T: Real> ConvexRegion<T> {
    pub fn dim(&self) -> usize {
        match self {
            ConvexRegion::Cone(c) => c.signs.len(),
            ConvexRegion::OrbitHull(h) => h.basepoint.len(),
            ConvexRegion::HPolytope(p) => p.dim,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConvexRegion::Cone(c) => match c.signs.len() {
                2 => "quadrant",
                3 => "octant",
                _ => "orthant",
            },
            ConvexRegion::OrbitHull(_) => "orbit_hull",
            ConvexRegion::HPolytope(_) => "hpolytope",
        }
    }

    /// The matrix the region was built from, if any.
    pub fn matrix(&self) -> Option<&IntMatrix> {
        match self {
            ConvexRegion::Cone(c) => Some(&c.matrix),
            ConvexRegion::OrbitHull(h) => Some(&h.matrix),
            ConvexRegion::HPolytope(_) => None,
        }
    }

    /// Eigen frame of the normalising power `A^e`, with `e`.
    pub fn frame(&self) -> Option<(i32, &EigenBasis<T>)> {
        match self {
            ConvexRegion::Cone(c) => Some((c.exponent, &c.basis)),
            ConvexRegion::OrbitHull(h) => h.frame.as_ref().map(|(e, b)| (*e, b)),
            ConvexRegion::HPolytope(_) => None,
        }
    }

    /// Truncation order of an orbit hull.
    pub fn truncation(&self) -> Option<usize> {
        match self {
            ConvexRegion::OrbitHull(h) => Some(h.k),
            _ => None,
        }
    }

    /// Region with empty interior (degenerate orbit hull or inconsistent halfspaces).
    pub fn is_degenerate(&self) -> bool {
        match self {
            ConvexRegion::Cone(_) => false,
            ConvexRegion::OrbitHull(h) => h.hull.is_degenerate(),
            ConvexRegion::HPolytope(p) => p.empty,
        }
    }

    /// Signed Euclidean clearance: the smallest distance from `x` to a facet
    /// hyperplane, positive inside the region.
    pub fn clearance(&self, x: &[T]) -> Result<T> {
        check_dim(self.dim(), x.len())?;
        Ok(match self {
            ConvexRegion::Cone(c) => {
                let e = c.basis.to_eigen(x);
                e.iter()
                    .zip(&c.signs)
                    .zip(&c.dual_norms)
                    .map(|((&v, &s), &w)| T::lit(f64::from(s)) * v / w)
                    .fold(T::infinity(), T::min)
            }
            ConvexRegion::OrbitHull(h) => {
                let c = h.hull.clearance(&to_f64s(x)).unwrap_or(f64::NAN);
                T::lit(c)
            }
            ConvexRegion::HPolytope(p) => {
                if p.empty {
                    return Ok(T::neg_infinity());
                }
                p.unit.iter().map(|h| h.offset - dense::dot(&h.normal, x)).fold(T::infinity(), T::min)
            }
        })
    }

    /// `clearance(x) > margin`. A zero margin tests the open region; a
    /// negative margin admits points within `|margin|` outside it.
    pub fn contains_point(&self, x: &[T], margin: T) -> Result<bool> {
        Ok(self.clearance(x)? > margin)
    }

    /// Whether the region contains an affine line.
    pub fn contains_affine_line(&self) -> bool {
        match self {
            ConvexRegion::Cone(_) | ConvexRegion::OrbitHull(_) => false,
            ConvexRegion::HPolytope(p) => p.contains_affine_line(),
        }
    }

    /// A finite truncation is bounded; the full orbit hull need not be.
    pub fn affine_line_caveat(&self) -> Option<&'static str> {
        match self {
            ConvexRegion::OrbitHull(_) => {
                Some("bounded finite truncation; the hull of the full orbit may be unbounded")
            }
            _ => None,
        }
    }

    /// Orbit hull with doubled truncation order, up to `cap`.
    pub fn escalate(&self, cap: usize) -> Option<Self> {
        match self {
            ConvexRegion::OrbitHull(h) if h.k < cap => {
                let k = (2 * h.k).min(cap);
                orbit_hull(&h.matrix, &h.basepoint, k).ok()
            }
            _ => None,
        }
    }

    /// The JSON description this region is built from.
    pub fn spec(&self) -> RegionSpec {
        match self {
            ConvexRegion::Cone(c) => {
                let matrix = c.matrix.clone();
                let signs = c.signs.clone();
                if signs.len() == 2 {
                    RegionSpec::Quadrant { matrix, signs }
                } else {
                    RegionSpec::Octant { matrix, signs }
                }
            }
            ConvexRegion::OrbitHull(h) => RegionSpec::OrbitHull {
                matrix: h.matrix.clone(),
                basepoint: to_f64s(&h.basepoint),
                k: h.k,
                frame: Frame::Standard,
            },
            ConvexRegion::HPolytope(p) => RegionSpec::Hpolytope { dim: Some(p.dim), halfspaces: p.raw.clone() },
        }
    }
}

impl<T: Real> HPolytope<T> {
    fn contains_affine_line(&self) -> bool {
        if self.empty {
            return false;
        }
        let rows: Option<Vec<Vec<BigRational>>> = self
            .raw
            .iter()
            .map(|h| {
                let (nums, den) = dyadic(&h.normal)?;
                Some(nums.into_iter().map(|x| BigRational::new(x, den.clone())).collect())
            })
            .collect();
        let rank = match rows {
            Some(r) if !r.is_empty() => RatMatrix::new(r).map(|m| m.rref().1.len()).unwrap_or(self.dim),
            Some(_) => 0,
            None => self.dim,
        };
        if rank == self.dim {
            return false;
        }
        let normals: Vec<Vec<f64>> = self.unit.iter().map(|h| to_f64s(&h.normal)).collect();
        let offsets: Vec<f64> = self.unit.iter().map(|h| h.offset.to_f64().unwrap_or(f64::NAN)).collect();
        lp::max_uniform_slack(&normals, &offsets, self.dim, 1.0).is_some_and(|t| t > 1e-12)
    }

    pub fn halfspaces(&self) -> &[Halfspace<T>] {
        &self.unit
    }
}

impl<T: Real> OrbitHull<T> {
    pub fn hull(&self) -> &ExactHull {
        &self.hull
    }
}

/// Coordinate frame of a JSON basepoint.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    #[default]
    Standard,
    Eigen,
}

impl Frame {
    fn is_standard(&self) -> bool {
        *self == Frame::Standard
    }
}

/// JSON region description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionSpec {
    Quadrant {
        matrix: IntMatrix,
        signs: Vec<i8>,
    },
    Octant {
        matrix: IntMatrix,
        signs: Vec<i8>,
    },
    OrbitHull {
        matrix: IntMatrix,
        basepoint: Vec<f64>,
        #[serde(rename = "K")]
        k: usize,
        #[serde(default, skip_serializing_if = "Frame::is_standard")]
        frame: Frame,
    },
    Hpolytope {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
        halfspaces: Vec<Halfspace<f64>>,
    },
}

impl RegionSpec {
    pub fn build<T: Real>(&self) -> Result<ConvexRegion<T>> {
        match self {
            RegionSpec::Quadrant { matrix, signs } => {
                check_dim(2, matrix.dim())?;
                cone(matrix, signs)
            }
            RegionSpec::Octant { matrix, signs } => {
                check_dim(3, matrix.dim())?;
                cone(matrix, signs)
            }
            RegionSpec::OrbitHull { matrix, basepoint, k, frame } => {
                let p: Vec<T> = basepoint.iter().map(|&x| T::lit(x)).collect();
                let p = match frame {
                    Frame::Standard => p,
                    Frame::Eigen => {
                        let (_, _, b) = normalize_hyperbolic::<T>(matrix)?;
                        check_dim(b.dim(), p.len())?;
                        b.to_standard(&p)
                    }
                };
                orbit_hull(matrix, &p, *k)
            }
            RegionSpec::Hpolytope { dim, halfspaces } => {
                let d = dim.or_else(|| halfspaces.first().map(|h| h.normal.len())).ok_or_else(|| {
                    Error::InvalidArgument("hpolytope without halfspaces needs an explicit dim".into())
                })?;
                let hs = halfspaces
                    .iter()
                    .map(|h| Halfspace { normal: h.normal.iter().map(|&x| T::lit(x)).collect(), offset: T::lit(h.offset) })
                    .collect();
                hpolytope(d, hs)
            }
        }
    }
}

impl<T: Real> Serialize for ConvexRegion<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.spec().serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for ConvexRegion<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RegionSpec::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

/// The cone with the given sign pattern over the eigenbasis of the
/// normalising power of `a`.
pub fn cone<T: Real>(a: &IntMatrix, signs: &[i8]) -> Result<ConvexRegion<T>> {
    a.ensure_gl()?;
    check_dim(a.dim(), signs.len())?;
    if signs.iter().any(|s| s.abs() != 1) {
        return Err(Error::InvalidArgument(format!("signs must be ±1, got {signs:?}")));
    }
    let (exponent, _, basis) = normalize_hyperbolic::<T>(a)?;
    let dual_norms = basis.dual().iter().map(|r| dense::norm(r)).collect();
    Ok(ConvexRegion::Cone(Cone { matrix: a.clone(), exponent, basis, dual_norms, signs: signs.to_vec() }))
}

/// All `2^n` sign cones, all-positive first; bit `j` of the index flips `X_j`.
pub fn orthant_domains<T: Real>(a: &IntMatrix) -> Result<Vec<ConvexRegion<T>>> {
    a.ensure_gl()?;
    let n = a.dim();
    let first = cone::<T>(a, &vec![1; n])?;
    let ConvexRegion::Cone(base) = &first else { unreachable!() };
    let mut out = vec![first.clone()];
    for mask in 1..(1usize << n) {
        let signs: Vec<i8> = (0..n).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect();
        out.push(ConvexRegion::Cone(Cone { signs, ..base.clone() }));
    }
    Ok(out)
}

pub fn quadrant_domains<T: Real>(a: &IntMatrix) -> Result<Vec<ConvexRegion<T>>> {
    check_dim(2, a.dim())?;
    orthant_domains(a)
}

pub fn octant_domains<T: Real>(a: &IntMatrix) -> Result<Vec<ConvexRegion<T>>> {
    check_dim(3, a.dim())?;
    orthant_domains(a)
}

/// Orbit hull of `p` (standard coordinates) under `A^k`, `|k| ≤ K`, with
/// exact vertex coordinates.
pub fn orbit_hull<T: Real>(a: &IntMatrix, p: &[T], k: usize) -> Result<ConvexRegion<T>> {
    a.ensure_gl()?;
    check_dim(a.dim(), p.len())?;
    if k == 0 {
        return Err(Error::InvalidArgument("truncation order K must be at least 1".into()));
    }
    let (base, scale) = dyadic(&to_f64s(p)).ok_or_else(|| Error::InvalidArgument("non-finite basepoint".into()))?;
    let inv = a.inverse_gl()?;
    let mut points: Vec<Vec<BigInt>> = vec![base.clone()];
    let (mut fwd, mut bwd) = (base.clone(), base);
    for _ in 0..k {
        fwd = a.mul_vec(&fwd);
        bwd = inv.mul_vec(&bwd);
        points.push(fwd.clone());
        points.push(bwd.clone());
    }
    let hull = ExactHull::from_scaled(points, scale);
    let frame = normalize_hyperbolic::<T>(a).ok().map(|(e, _, b)| (e, b));
    Ok(ConvexRegion::OrbitHull(OrbitHull { matrix: a.clone(), basepoint: p.to_vec(), k, hull, frame }))
}

/// Intersection of open halfspaces `⟨a_i, x⟩ < b_i`.
pub fn hpolytope<T: Real>(dim: usize, halfspaces: Vec<Halfspace<T>>) -> Result<ConvexRegion<T>> {
    let mut unit = Vec::new();
    let mut raw = Vec::new();
    let mut empty = false;
    for h in halfspaces {
        check_dim(dim, h.normal.len())?;
        raw.push(Halfspace { normal: to_f64s(&h.normal), offset: h.offset.to_f64().unwrap_or(f64::NAN) });
        let len = dense::norm(&h.normal);
        if len == T::zero() {
            // 0 < b holds everywhere or nowhere
            empty |= h.offset <= T::zero();
            continue;
        }
        unit.push(Halfspace { normal: h.normal.iter().map(|&x| x / len).collect(), offset: h.offset / len });
    }
    Ok(ConvexRegion::HPolytope(HPolytope { dim, raw, unit, empty }))
}
