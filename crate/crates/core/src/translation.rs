//! λ-translation by the θ-integral and by the kernel W_λ, and λ-convolution.
//!
//! Both translation forms reduce to ∫_{−1}^{1} (…)(1−u²)^{λ−1} du and are
//! integrated with the graded Gegenbauer rule of the [`LambdaContext`].
//! For the θ-form u = cos θ; for the kernel form
//! z² = (|x|−|t|)² + 4|xt|(1+u)/2 maps the support interval of W_λ onto (−1, 1).

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dunkl::{Extension, SampledFunction};
use crate::error::{Error, Result};
use crate::quadrature::{depth_for_distance, SymmetricGrid};
use crate::special::LambdaContext;

/// Smallest length scale of the translated function that the u-grading is
/// sized for.
pub const FEATURE_SCALE: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TranslationMethod {
    #[default]
    Theta,
    Kernel,
}

/// W_λ(x, t, z) with its factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationKernelPoint {
    pub x: f64,
    pub t: f64,
    pub z: f64,
    pub w0: f64,
    pub sigma_xtz: f64,
    pub sigma_zxt: f64,
    pub sigma_ztx: f64,
    pub value: f64,
}

/// σ_{a,b,c} = (a² + b² − c²)/(2ab).
#[inline]
fn sigma(a: f64, b: f64, c: f64) -> f64 {
    (a * a + b * b - c * c) / (2.0 * a * b)
}

/// Evaluates the translation kernel W_λ(x, t, z) for x, t ≠ 0.
pub fn kernel_w(ctx: &LambdaContext, x: f64, t: f64, z: f64) -> Result<TranslationKernelPoint> {
    if x == 0.0 || t == 0.0 {
        return Err(Error::domain("W_lambda needs x and t nonzero"));
    }
    let lam = ctx.lambda;
    let (ax, at, az) = (x.abs(), t.abs(), z.abs());
    let lo = (ax - at).abs();
    let hi = ax + at;
    let sigma_xtz = sigma(x, t, z);
    let (sigma_zxt, sigma_ztx) = if z == 0.0 {
        (0.0, 0.0)
    } else {
        (sigma(z, x, t), sigma(z, t, x))
    };
    let mut point = TranslationKernelPoint {
        x,
        t,
        z,
        w0: 0.0,
        sigma_xtz,
        sigma_zxt,
        sigma_ztx,
        value: 0.0,
    };
    if az < lo || az > hi {
        return Ok(point);
    }
    if az == lo || az == hi {
        if lam < 1.0 {
            return Err(Error::Singular(format!(
                "|z| = {az} is an endpoint of the support of W_lambda"
            )));
        }
        if lam > 1.0 || az == 0.0 {
            return Ok(point);
        }
    }
    let den = ((hi - az) * (hi + az) * (az - lo) * (az + lo)).powf(1.0 - lam);
    point.w0 = ctx.c_dblprime * (ax * at * az).powf(1.0 - 2.0 * lam) / den;
    point.value = point.w0 * (1.0 - sigma_xtz + sigma_zxt + sigma_ztx);
    Ok(point)
}

/// Grading depth at an end of the u-range where the radial variable
/// reaches r, for a product |xt| = p: features of size FEATURE_SCALE in r
/// occupy a u-interval of about (2rs + s²)/(2p).
fn grading_depth(r: f64, p: f64) -> u32 {
    let s = FEATURE_SCALE;
    depth_for_distance((2.0 * r * s + s * s) / (2.0 * p)) + 1
}

/// (τ_t f)(x) for a pointwise-evaluable f.
pub fn translate_point<F>(ctx: &LambdaContext, f: &F, x: f64, t: f64, method: TranslationMethod) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if t == 0.0 {
        return f(x);
    }
    if x == 0.0 {
        return f(t);
    }
    let rule = ctx.graded_rule();
    let mut err = None;
    let xt = x * t;
    let p = xt.abs();
    let zero = Complex64::new(0.0, 0.0);
    let value = match method {
        TranslationMethod::Theta => {
            let (dl, dr) = (grading_depth((x - t).abs(), p), grading_depth((x + t).abs(), p));
            let sum = rule.integrate_gaps(dl, dr, |_u, gp, gm| {
                // r² without cancellation at either end
                let r2 = if xt >= 0.0 {
                    (x - t).powi(2) + 2.0 * xt * gp
                } else {
                    (x + t).powi(2) - 2.0 * xt * gm
                };
                let r = r2.sqrt();
                let (fp, fm) = match (f(r), f(-r)) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(e), _) | (_, Err(e)) => {
                        err.get_or_insert(e);
                        return zero;
                    }
                };
                let even = 0.5 * (fp + fm);
                let odd = if r > 0.0 { 0.5 * (fp - fm) * ((x + t) / r) } else { zero };
                (even + odd) * gp
            });
            ctx.c_prime * sum
        }
        TranslationMethod::Kernel => {
            let lo = (x.abs() - t.abs()).abs();
            let hi = x.abs() + t.abs();
            let lam = ctx.lambda;
            let (dl, dr) = (grading_depth(lo, p), grading_depth(hi, p));
            let sum = rule.integrate_gaps(dl, dr, |_u, gp, gm| {
                let z = (lo * lo + 2.0 * p * gp).sqrt();
                // dz/du = |xt|/z; divide out the (1−u²)^{λ−1} carried by the rule
                let jac = z.powf(2.0 * lam) * p / z / (gp * gm).powf(lam - 1.0);
                let mut acc = zero;
                for zz in [z, -z] {
                    match (kernel_w(ctx, x, t, zz), f(zz)) {
                        (Ok(w), Ok(v)) => acc += v * w.value,
                        (Err(e), _) | (_, Err(e)) => {
                            err.get_or_insert(e);
                            return zero;
                        }
                    }
                }
                acc * jac
            });
            ctx.c_lambda * sum
        }
    };
    match err {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

fn check_range(f: &SampledFunction, out_x_max: f64, t: f64, ext: Extension) -> Result<()> {
    if ext == Extension::Strict && out_x_max + t.abs() > f.grid().x_max() * (1.0 + 1e-12) {
        return Err(Error::range(format!(
            "translation needs |x|+|t| up to {}, window is {}",
            out_x_max + t.abs(),
            f.grid().x_max()
        )));
    }
    Ok(())
}

/// τ_t f sampled on `out`, with f interpolated from its samples.
pub fn translate(
    ctx: &LambdaContext,
    f: &SampledFunction,
    t: f64,
    out: Arc<SymmetricGrid>,
    method: TranslationMethod,
    ext: Extension,
) -> Result<SampledFunction> {
    check_range(f, out.x_max(), t, ext)?;
    let eval = |z: f64| f.eval(z, ext);
    translate_with(ctx, &eval, t, out, method)
}

/// τ_t f sampled on `out` for a callable f.
pub fn translate_fn<F>(ctx: &LambdaContext, f: F, t: f64, out: Arc<SymmetricGrid>, method: TranslationMethod) -> Result<SampledFunction>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let eval = |z: f64| Ok(f(z));
    translate_with(ctx, &eval, t, out, method)
}

fn translate_with<F>(ctx: &LambdaContext, f: &F, t: f64, out: Arc<SymmetricGrid>, method: TranslationMethod) -> Result<SampledFunction>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let values = out
        .nodes()
        .par_iter()
        .map(|&x| translate_point(ctx, f, x, t, method))
        .collect::<Result<Vec<_>>>()?;
    SampledFunction::new(out, values)
}

/// (f ∗_λ g)(x) = c_λ ∫ (τ_x f)(−t) g(t) |t|^{2λ} dt on `out`; the t-integral
/// uses the nodes of g, and f is interpolated from its samples.
pub fn convolve(
    ctx: &LambdaContext,
    f: &SampledFunction,
    g: &SampledFunction,
    out: Arc<SymmetricGrid>,
    ext: Extension,
) -> Result<SampledFunction> {
    check_range(f, out.x_max(), g.grid().x_max(), ext)?;
    let eval = |z: f64| f.eval(z, ext);
    convolve_with(ctx, &eval, g, out)
}

/// Convolution with a callable first factor.
pub fn convolve_fn<F>(ctx: &LambdaContext, f: F, g: &SampledFunction, out: Arc<SymmetricGrid>) -> Result<SampledFunction>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let eval = |z: f64| Ok(f(z));
    convolve_with(ctx, &eval, g, out)
}

fn convolve_with<F>(ctx: &LambdaContext, f: &F, g: &SampledFunction, out: Arc<SymmetricGrid>) -> Result<SampledFunction>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let tg = g.grid();
    let values = out
        .nodes()
        .par_iter()
        .map(|&x| {
            let mut terms = Vec::with_capacity(tg.len());
            for (&t, &gv) in tg.nodes().iter().zip(g.values()) {
                if gv == Complex64::new(0.0, 0.0) {
                    terms.push(gv);
                    continue;
                }
                // (τ_x f)(−t) = (τ_{−t} f)(x)
                terms.push(translate_point(ctx, f, -t, x, TranslationMethod::Theta)? * gv);
            }
            Ok(tg.sum(&terms))
        })
        .collect::<Result<Vec<_>>>()?;
    SampledFunction::new(out, values)
}
