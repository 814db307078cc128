//! Special functions: Gamma, normalized Bessel functions, the Dunkl kernel,
//! and the λ-dependent constants.

mod bessel;
mod context;
mod dd;
mod gamma;
mod kernel;

pub(crate) use bessel::{hankel_norm, j_norm};
pub use bessel::{bessel_j_norm, bessel_j_norm_complex, MAX_IMAG, SERIES_CROSSOVER};
pub use context::{constants, LambdaContext, GRADED_ORDER, LAPLACE_RULE_SIZE};
pub use gamma::{beta, gamma, ln_gamma};
pub use kernel::{dunkl_kernel, dunkl_kernel_real, KernelMethod};
