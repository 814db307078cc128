//! The Dunkl kernel E_λ(iz) = j_{λ−1/2}(z) + iz/(2λ+1) · j_{λ+1/2}(z).

use num_complex::Complex64;

use super::bessel::{bessel_j_norm_complex, j_norm, MAX_IMAG};
use super::context::LambdaContext;
use crate::error::{Error, Result};

/// How E_λ(iz) is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMethod {
    /// Normalized Bessel series / asymptotics.
    Series,
    /// Gauss–Jacobi quadrature of c′_λ ∫ e^{izt}(1+t)(1−t²)^{λ−1} dt.
    Laplace,
}

/// Evaluates E_λ(iz).
pub fn dunkl_kernel(ctx: &LambdaContext, z: Complex64, method: KernelMethod) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("kernel argument must be finite"));
    }
    if z.im.abs() > MAX_IMAG {
        return Err(Error::Overflow(format!(
            "|Im z| = {} exceeds {MAX_IMAG}",
            z.im.abs()
        )));
    }
    match method {
        KernelMethod::Series => {
            let even = bessel_j_norm_complex(ctx.alpha_even(), z)?;
            let odd = bessel_j_norm_complex(ctx.alpha_odd(), z)?;
            Ok(even + Complex64::i() * z / (2.0 * ctx.lambda + 1.0) * odd)
        }
        KernelMethod::Laplace => {
            let rule = ctx.laplace_rule();
            let mut acc = Complex64::new(0.0, 0.0);
            for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                acc += w * (Complex64::i() * z * t).exp();
            }
            Ok(ctx.c_prime * acc)
        }
    }
}

/// E_λ(ix) for real x by the series method; the hot path of every transform.
#[inline]
pub fn dunkl_kernel_real(ctx: &LambdaContext, x: f64) -> Complex64 {
    let even = j_norm(ctx.alpha_even(), x);
    let odd = x / (2.0 * ctx.lambda + 1.0) * j_norm(ctx.alpha_odd(), x);
    Complex64::new(even, odd)
}
