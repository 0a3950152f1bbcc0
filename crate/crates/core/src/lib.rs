//! Exact computations for non-commutative crepant resolutions of quotients of
//! polynomial rings by a one-dimensional torus (optionally times a finite abelian
//! group), and for the tilting objects of the associated graded singularity
//! categories.
//!
//! The pipeline is:
//!
//! 1. [`weights`] validates the action data and computes the index set of
//!    characters that defines the resolution.
//! 2. [`monomial`] enumerates and counts multigraded monomials, computes the
//!    Hilbert basis of the invariant monoid and checks Gorenstein symmetry of the
//!    Hilbert series of the invariant ring.
//! 3. [`covariants`] models modules of covariants and their hom-spaces as spans
//!    of monomials.
//! 4. [`nccr`] assembles the endomorphism algebra as a truncated graded algebra,
//!    extracts a quiver presentation and measures the quotient by the
//!    distinguished idempotent.
//! 5. [`homological`] computes minimal projective resolutions, syzygies,
//!    approximations and hom-spaces between complexes of projectives.
//! 6. [`tilting`] assembles the tilting object, its Ext table and its
//!    endomorphism algebra.
//!
//! All linear algebra is exact over the rationals.

#![allow(clippy::type_complexity)]

pub mod covariants;
pub mod error;
pub mod homological;
pub mod linalg;
pub mod monomial;
pub mod nccr;
pub mod par;
pub mod tilting;
pub mod weights;

pub use error::{Error, Hypothesis, Result};
pub use linalg::Q;
pub use monomial::Monomial;
pub use nccr::NccrAlgebra;

pub use weights::{Character, GroupSpec, IntervalConvention, WeightData};
