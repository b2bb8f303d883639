pub mod disks;
pub mod error;
pub mod intmat;
pub mod lattice;
pub mod logdomain;
pub mod num;
pub mod steinness;

pub use error::{Error, Result};
pub use intmat::{CharPoly, IntMatrix, RatMatrix};
pub use lattice::IntVector;

pub type ConvexRegion64 = logdomain::ConvexRegion<f64>;
pub type EigenBasis64 = logdomain::EigenBasis<f64>;
pub type SuspensionData64 = disks::SuspensionData<f64>;
