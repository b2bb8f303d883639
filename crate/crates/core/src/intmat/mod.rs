//! Exact integer-matrix and integer-polynomial algebra.

pub mod cyclotomic;
pub mod group;
pub mod matrix;
pub mod poly;
pub mod roots;
pub mod spectrum;

pub use cyclotomic::{cyclotomic, cyclotomic_factorization, spec_on_unit_circle};
pub use group::{group_spec_verdict, GroupVerdict, Letter, SearchParams, UnitCircleCertificate, Word};
pub(crate) use matrix::IntEntry;
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use poly::{CharPoly, Poly};
pub use roots::{RootInterval, SturmChain};
pub use spectrum::{
    classify_spectrum, classify_spectrum_with, has_multiple_roots, rational_eigenvalues, spectral_radius,
    Eigenvalue, RadiusBound, SpectrumClass, SpectrumTag,
};
