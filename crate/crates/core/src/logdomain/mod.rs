//! Log-modulus geometry: eigenbases, invariant convex regions, orbit hulls
//! and affine fixed points.

mod affine;
pub(crate) mod dense;
mod eigen;
mod hull;
pub mod lp;
mod orbit;
mod region;

pub use affine::{affine_fixed_point, AffineAutomorphism};
pub use eigen::{eigenbasis, normalize_hyperbolic, EigenBasis};
pub use hull::ExactHull;
pub use orbit::{find_r_orbit_point, ray_closure_check, OrbitOptions, OrbitPointReport, RayReport};
pub use region::{
    cone, hpolytope, octant_domains, orbit_hull, orthant_domains, quadrant_domains, ConvexRegion, Frame, HPolytope,
    Halfspace, OrbitHull, RegionSpec, Cone, DEFAULT_K_CAP,
};
