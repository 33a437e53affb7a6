//! Exact arithmetic for codimension-one foliations on weighted projective
//! spaces: polynomial forms on the affine cone, pullbacks by rational maps,
//! first-order deformations and the comparison of tangent spaces.

pub mod catalog;
pub mod error;
pub mod exterior;
pub mod foliation;
pub mod groebner;
pub mod linalg;
pub mod report;
pub mod ring;
pub mod rng;
pub mod tangent;

pub use error::{Error, Result};
pub use exterior::{DiffForm, VectorField};
pub use ring::{Monomial, Poly, Rational, WeightedRing};
