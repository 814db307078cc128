use std::f64::consts::PI;
use std::sync::OnceLock;

use super::gamma::{gamma, ln_gamma};
use crate::error::{Error, Result};
use crate::quadrature::{jacobi_rule, GradedJacobi, JacobiRule};

/// Number of nodes in the Laplace-representation rule for E_λ.
pub const LAPLACE_RULE_SIZE: usize = 96;

/// Panel order of the graded rules used for θ-integrals.
pub const GRADED_ORDER: usize = 16;

/// The multiplicity parameter λ together with every normalization constant
/// that depends on it.
#[derive(Debug, Clone)]
pub struct LambdaContext {
    pub lambda: f64,
    /// c_λ, with c_λ⁻¹ = 2^{λ+1/2} Γ(λ+1/2).
    pub c_lambda: f64,
    /// c′_λ = Γ(λ+1/2) / (Γ(λ) Γ(1/2)).
    pub c_prime: f64,
    /// c″_λ = 2^{3/2−λ} Γ(λ+1/2)² / (√π Γ(λ)).
    pub c_dblprime: f64,
    /// m_λ = 2^{λ+1/2} Γ(λ+1) / √π.
    pub m_lambda: f64,
    /// Critical exponent p₀ = 2λ/(2λ+1).
    pub p0: f64,
    laplace: OnceLock<JacobiRule>,
    graded: OnceLock<GradedJacobi>,
}

impl LambdaContext {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
        }
        let g_half = gamma(lambda + 0.5);
        let sqrt_pi = PI.sqrt();
        let c_lambda = 1.0 / (2f64.powf(lambda + 0.5) * g_half);
        let c_prime = (ln_gamma(lambda + 0.5) - ln_gamma(lambda)).exp() / sqrt_pi;
        let c_dblprime =
            2f64.powf(1.5 - lambda) * (2.0 * ln_gamma(lambda + 0.5) - ln_gamma(lambda)).exp() / sqrt_pi;
        let m_lambda = 2f64.powf(lambda + 0.5) * gamma(lambda + 1.0) / sqrt_pi;
        let p0 = 2.0 * lambda / (2.0 * lambda + 1.0);
        Ok(LambdaContext {
            lambda,
            c_lambda,
            c_prime,
            c_dblprime,
            m_lambda,
            p0,
            laplace: OnceLock::new(),
            graded: OnceLock::new(),
        })
    }

    /// Gauss–Jacobi rule for (1−t)^{λ−1}(1+t)^λ on (−1, 1).
    pub fn laplace_rule(&self) -> &JacobiRule {
        self.laplace.get_or_init(|| {
            jacobi_rule(self.lambda - 1.0, self.lambda, LAPLACE_RULE_SIZE)
                .expect("lambda > 0 gives valid Jacobi exponents")
        })
    }

    /// Graded composite rule for ∫ g(u) (1−u²)^{λ−1} du.
    pub fn graded_rule(&self) -> &GradedJacobi {
        self.graded.get_or_init(|| {
            GradedJacobi::new(self.lambda - 1.0, GRADED_ORDER)
                .expect("lambda > 0 gives a valid exponent")
        })
    }

    /// Order of the Bessel function in the even part of E_λ.
    #[inline]
    pub fn alpha_even(&self) -> f64 {
        self.lambda - 0.5
    }

    #[inline]
    pub fn alpha_odd(&self) -> f64 {
        self.lambda + 0.5
    }

    /// Exponent 2λ of the measure density |x|^{2λ}.
    #[inline]
    pub fn two_lambda(&self) -> f64 {
        2.0 * self.lambda
    }
}

/// Builds the context for λ; errors when λ ≤ 0.
pub fn constants(lambda: f64) -> Result<LambdaContext> {
    LambdaContext::new(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn half_lambda_values() {
        let ctx = constants(0.5).unwrap();
        assert_relative_eq!(ctx.c_prime, 1.0 / PI, max_relative = 1e-14);
        assert_relative_eq!(ctx.p0, 0.5, max_relative = 1e-15);
        assert_relative_eq!(ctx.c_lambda, 0.5, max_relative = 1e-14);
        // m_{1/2} = 2 Γ(3/2)/√π = 1
        assert_relative_eq!(ctx.m_lambda, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn constants_are_positive_and_normalized() {
        for &l in &[0.05, 0.3, 0.5, 1.0, 2.5, 7.0] {
            let ctx = constants(l).unwrap();
            for v in [ctx.c_lambda, ctx.c_prime, ctx.c_dblprime, ctx.m_lambda] {
                assert!(v.is_finite() && v > 0.0);
            }
            assert!(ctx.p0 > 0.0 && ctx.p0 < 1.0);
            let prod = ctx.c_lambda * 2f64.powf(l + 0.5) * gamma(l + 0.5);
            assert!((prod - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        assert!(matches!(constants(0.0), Err(Error::Domain(_))));
        assert!(constants(-1.0).is_err());
        assert!(constants(f64::NAN).is_err());
    }
}
