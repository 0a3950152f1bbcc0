//! Graded projective complexes over the algebra and the homological engine built on them.

pub mod approximation;
mod complex;
mod fine;
pub mod hom;
pub mod normalize;
pub mod resolution;
pub mod restrict;

pub(crate) use complex::serialize_q;
pub use complex::{BettiRow, Entry, ProjectiveComplex, Summand};
pub use resolution::{
    exactness_report, minimal_resolution, module_dims, resolve_off_distinguished_tops, shape_report, syzygy,
    ExactnessReport, GradedModule, Resolution, ShapeReport, SyzygyModule,
};
pub use approximation::{minimal_left_approximation, Approximation, ApproximationCertificate};
pub use normalize::normalize;
pub use hom::{ext_table, hom_dimension, ChainMap, DegreeZeroMaps, ExtTable, MapTerm, SparseVec};
pub use restrict::{apply_idempotent, apply_idempotent_module, RestrictedComplex};
