//! Gauss–Jacobi rules, graded composite rules and symmetric weighted grids.

mod graded;
mod grid;
mod jacobi;

pub use graded::{depth_for_distance, GradedJacobi, MAX_GRADING_DEPTH};
pub use grid::{weighted_integral, weighted_lp_norm, GridSpec, Scalar, SymmetricGrid};
pub use jacobi::{gauss_laguerre, gauss_legendre, jacobi_rule, JacobiRule};
