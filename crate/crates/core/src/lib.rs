//! Volumes of orthocentric simplices in hyperbolic and spherical space.

// Series coefficients are kept at full printed precision, `!(x >= y)` guards
// deliberately reject NaN, and `Real` has no assign operators.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord, clippy::assign_op_pattern)]

pub mod complex_gaussian;
pub mod contour_quadrature;
pub mod double_double;
pub mod error;
pub mod oracles;
pub mod quadrature;
pub mod real;
pub mod simplex_geometry;
pub mod steepest;
pub mod volume_engine;

pub use error::{Error, Result};
