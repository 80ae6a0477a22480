//! Groups acting by piecewise translations on labelled Schreier graphs.
//!
//! The crate builds labelled graphs (Cayley graphs, gluings, pocket and star
//! extensions, Houghton rays, bubble graphs), computes exact normal forms in the
//! groups they define, runs random walks, and evaluates isoperimetric and
//! spectral profiles together with explicit test functions.
//!
//! Numeric code is generic over [`Scalar`], implemented for `f32`, `f64` and
//! the exact [`Rational`] type.

pub mod alternating;
pub mod bubble;
pub mod curves;
pub mod erschler;
pub mod error;
pub mod gluing;
pub mod group;
pub mod io;
pub mod labelled_graph;
pub mod normal_form;
pub mod perm;
pub mod profile;
pub mod scalar;
pub mod test_functions;
pub mod walk;

pub use error::{Error, Result};
pub use group::{BaseGroup, Group, PermGroup};
pub use labelled_graph::{Letter, LabelledGraph, Sign, Vertex};
pub use normal_form::{GluedGroup, GroupElement};
pub use perm::FinPerm;
pub use scalar::{Rational, Scalar};

/// Step measure with floating point weights.
pub type MeasureF64<E> = walk::Measure<E, f64>;
/// Step measure with exact rational weights.
pub type MeasureQ<E> = walk::Measure<E, Rational>;
/// Distribution with floating point weights.
pub type DistributionF64<E> = walk::Distribution<E, f64>;
/// Distribution with exact rational weights.
pub type DistributionQ<E> = walk::Distribution<E, Rational>;
/// Test function with floating point values.
pub type TestFunctionF64<E> = test_functions::TestFunction<E, f64>;
/// Test function with exact rational values.
pub type TestFunctionQ<E> = test_functions::TestFunction<E, Rational>;
