//! λ-Poisson and conjugate kernels, the extensions Pf and Qf, λ-Cauchy–Riemann
//! residuals of sampled fields, and non-tangential maximal functions.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dunkl::{derivative, dunkl_D, DerivativeScheme, Extension, SampledFunction, TransformPlan};
use crate::error::{Error, Result};
use crate::quadrature::{depth_for_distance, gauss_laguerre, gauss_legendre, jacobi_rule, GridSpec, SymmetricGrid};
use crate::special::{beta, dunkl_kernel_real, hankel_norm, j_norm, LambdaContext, SERIES_CROSSOVER};

/// Which of the two kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Poisson,
    Conjugate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtensionMethod {
    /// t-quadrature against the θ-integral kernel.
    Kernel,
    /// e^{−y|ξ|} multiplier on the Dunkl transform.
    #[default]
    Spectral,
}

fn check_height(y: f64) -> Result<()> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain(format!("height y must be positive, got {y}")));
    }
    Ok(())
}

/// Prefactor λΓ(λ+1/2)2^{λ+1/2}/π = m_λ / B(1/2, λ).
fn kernel_constant(ctx: &LambdaContext) -> f64 {
    ctx.m_lambda / beta(0.5, ctx.lambda)
}

fn kernel_theta(ctx: &LambdaContext, x: f64, y: f64, t: f64, kind: KernelKind) -> Result<f64> {
    check_height(y)?;
    let lam = ctx.lambda;
    let numer = match kind {
        KernelKind::Poisson => y,
        KernelKind::Conjugate => x - t,
    };
    let p = (x * t).abs();
    let base = y * y + (x.abs() - t.abs()).powi(2);
    if p == 0.0 {
        // the θ-integrand is constant: ∫(1−u²)^{λ−1}du = B(1/2, λ)
        return Ok(ctx.m_lambda * numer / base.powf(lam + 1.0));
    }
    let s = (x * t).signum();
    let depth = depth_for_distance(base / (2.0 * p)) + 2;
    let val = ctx.graded_rule().integrate_gaps(1, depth, |_u, gp, gm| {
        let factor = if s > 0.0 { gp } else { gm };
        factor / (base + 2.0 * p * gm).powf(lam + 1.0)
    });
    Ok(kernel_constant(ctx) * numer * val)
}

/// (τ_x P_y)(−t) by the θ-integral.
pub fn poisson_kernel(ctx: &LambdaContext, x: f64, y: f64, t: f64) -> Result<f64> {
    kernel_theta(ctx, x, y, t, KernelKind::Poisson)
}

/// (τ_x Q_y)(−t) by the θ-integral.
pub fn conjugate_kernel(ctx: &LambdaContext, x: f64, y: f64, t: f64) -> Result<f64> {
    kernel_theta(ctx, x, y, t, KernelKind::Conjugate)
}

/// P(dδ_s)(x, y), the extension of a unit point mass at s.
pub fn poisson_point_mass(ctx: &LambdaContext, s: f64, x: f64, y: f64) -> Result<f64> {
    poisson_kernel(ctx, x, y, s)
}

/// Kernel value from its spectral form:
/// P: 2c_λ ∫_0^∞ e^{−yξ} Re[E(ixξ) conj E(itξ)] ξ^{2λ} dξ; Q uses Im.
pub fn kernel_spectral(ctx: &LambdaContext, x: f64, y: f64, t: f64, kind: KernelKind) -> Result<f64> {
    check_height(y)?;
    let two_l = 2.0 * ctx.lambda;
    let xi_max = 40.0 / y;
    let freq = x.abs() + t.abs();
    let width = (2.0 / freq.max(1e-300)).min(0.5 * y.max(0.02) * 10.0).min(1.0);
    let gl = gauss_legendre(20);
    let head = jacobi_rule(0.0, two_l, 20)?;
    let integrand = |xi: f64| {
        let a = dunkl_kernel_real(ctx, x * xi) * dunkl_kernel_real(ctx, t * xi).conj();
        let part = match kind {
            KernelKind::Poisson => a.re,
            KernelKind::Conjugate => a.im,
        };
        (-y * xi).exp() * part
    };
    let mut total = 0.0;
    let h = 0.5 * width;
    for (&s, &w) in head.nodes.iter().zip(&head.weights) {
        total += w * h.powf(two_l + 1.0) * integrand(h * (1.0 + s));
    }
    let mut a = width;
    while a < xi_max {
        let b = (a + width).min(xi_max);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (&s, &w) in gl.nodes.iter().zip(&gl.weights) {
            let xi = mid + half * s;
            total += half * w * xi.powf(two_l) * integrand(xi);
        }
        a = b;
    }
    Ok(2.0 * ctx.c_lambda * total)
}

/// Frequencies below this are rejected by [`poisson_kernel_transform`]: the
/// contour-rotated tail would start beyond [`TRANSFORM_X_LIMIT`].
pub const TRANSFORM_X_LIMIT: f64 = 1.0e4;

/// Dunkl transform of P_y (or Q_y) at ξ, computed as a Hankel-type integral
/// over (0, X) plus a tail ∫_X^∞ obtained by splitting j_α into the
/// normalized Hankel functions and rotating each onto x = X ± is.
pub fn poisson_kernel_transform(ctx: &LambdaContext, y: f64, xi: f64, kind: KernelKind) -> Result<Complex64> {
    check_height(y)?;
    let lam = ctx.lambda;
    let m = ctx.m_lambda;
    let two_l = 2.0 * lam;
    let w = xi.abs();
    if w == 0.0 {
        return match kind {
            KernelKind::Conjugate => Ok(Complex64::new(0.0, 0.0)),
            KernelKind::Poisson => {
                let big_x = 10.0 * (1.0 + y);
                let head = integrate_head(two_l, y, big_x, 0.0, |x| {
                    m * y / (x * x + y * y).powf(lam + 1.0)
                })?;
                // x = X/s maps (X, ∞) to (0, 1) with a smooth integrand
                let gl = gauss_legendre(24);
                let tail: f64 = gl
                    .nodes
                    .iter()
                    .zip(&gl.weights)
                    .map(|(&r, &wt)| {
                        let s = 0.5 * (1.0 + r);
                        0.5 * wt * m * y * big_x.powf(two_l + 1.0) / (big_x * big_x + y * y * s * s).powf(lam + 1.0)
                    })
                    .sum();
                Ok(Complex64::new(2.0 * ctx.c_lambda * (head + tail), 0.0))
            }
        };
    }
    let big_x = (30.0 / w).max(4.0 * (1.0 + y));
    if big_x > TRANSFORM_X_LIMIT {
        return Err(Error::range(format!("|xi| = {w} is too small for the tail rotation")));
    }
    let (alpha, smooth): (f64, Box<dyn Fn(Complex64) -> Complex64>) = match kind {
        // G(x) = P_y(x) x^{2λ}; the x^{2λ} is split off on the head panel
        KernelKind::Poisson => (
            lam - 0.5,
            Box::new(move |x: Complex64| m * y * ((x + Complex64::i() * y) * (x - Complex64::i() * y)).powf(-lam - 1.0)),
        ),
        // G(x) = Q_y(x) x^{2λ} · xξ/(2λ+1)
        KernelKind::Conjugate => (
            lam + 0.5,
            Box::new(move |x: Complex64| {
                m * x * x * w / (two_l + 1.0) * ((x + Complex64::i() * y) * (x - Complex64::i() * y)).powf(-lam - 1.0)
            }),
        ),
    };
    let head = integrate_head(two_l, y, big_x, w, |x| {
        smooth(Complex64::new(x, 0.0)).re * j_norm(alpha, x * w)
    })?;

    // rotated tails: ½∫ G h⁺ on x = X + iσ/ξ and ½∫ G h⁻ on x = X − iσ/ξ
    let (nodes, weights) = gauss_laguerre(48)?;
    let mut tail = Complex64::new(0.0, 0.0);
    for (&sg, &wt) in nodes.iter().zip(&weights) {
        let s = sg / w;
        let up = Complex64::new(big_x, s);
        let dn = Complex64::new(big_x, -s);
        let g_up = up.powf(two_l) * smooth(up) * hankel_norm(alpha, up * w, true);
        let g_dn = dn.powf(two_l) * smooth(dn) * hankel_norm(alpha, dn * w, false);
        tail += wt * sg.exp() * (Complex64::i() * g_up - Complex64::i() * g_dn);
    }
    let tail = 0.5 * tail / w;
    let integral = head + tail.re;
    let value = 2.0 * ctx.c_lambda * integral;
    Ok(match kind {
        KernelKind::Poisson => Complex64::new(value, 0.0),
        KernelKind::Conjugate => Complex64::new(0.0, -value * xi.signum()),
    })
}

/// ∫_0^X x^{2λ} g(x) dx by panels: a Gauss–Jacobi head on [0, a] and
/// Gauss–Legendre panels whose widths follow both the pole distance
/// √(x² + y²) and the oscillation period 2π/ξ.
fn integrate_head<F: Fn(f64) -> f64>(two_l: f64, y: f64, big_x: f64, xi: f64, g: F) -> Result<f64> {
    let gl = gauss_legendre(24);
    let jac = jacobi_rule(0.0, two_l, 24)?;
    let a = (0.5 * y).min(0.5).min(big_x);
    let h = 0.5 * a;
    let mut total = 0.0;
    for (&s, &w) in jac.nodes.iter().zip(&jac.weights) {
        total += w * h.powf(two_l + 1.0) * g(h * (1.0 + s));
    }
    let mut lo = a;
    while lo < big_x {
        let mut width = 0.5 * (lo * lo + y * y).sqrt();
        if xi > 0.0 {
            width = width.min(3.0 / xi);
        }
        let hi = (lo + width).min(big_x);
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (&s, &w) in gl.nodes.iter().zip(&gl.weights) {
            let x = mid + half * s;
            total += half * w * x.powf(two_l) * g(x);
        }
        lo = hi;
    }
    Ok(total)
}

/// Sampled field F = u + iv on x-grid × heights.
#[derive(Debug, Clone)]
pub struct HalfPlaneField {
    x_grid: Arc<SymmetricGrid>,
    y: Vec<f64>,
    // u[j][i]: height j, node i
    u: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    parity: FieldParity,
}

/// Parity of u in x (v then has the opposite parity).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldParity {
    UEven,
    UOdd,
    None,
}

/// Component used by maximal functions and norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldPart {
    U,
    V,
    Modulus,
}

/// Pointwise evaluation of a field in the upper half plane.
pub trait FieldEval: Sync {
    fn eval(&self, x: f64, y: f64) -> Result<Complex64>;

    /// Values on a tensor grid, indexed `[j][i]` for `ys[j]`, `xs[i]`.
    fn eval_grid(&self, xs: &[f64], ys: &[f64]) -> Result<Vec<Vec<Complex64>>> {
        ys.iter()
            .map(|&y| xs.iter().map(|&x| self.eval(x, y)).collect())
            .collect()
    }
}

impl HalfPlaneField {
    pub fn new(x_grid: Arc<SymmetricGrid>, y: Vec<f64>, u: Vec<Vec<f64>>, v: Vec<Vec<f64>>) -> Result<Self> {
        if y.is_empty() || !y.iter().all(|&h| h > 0.0) || !y.windows(2).all(|p| p[0] < p[1]) {
            return Err(Error::domain("heights must be positive and increasing"));
        }
        let n = x_grid.len();
        let ok = |m: &Vec<Vec<f64>>| m.len() == y.len() && m.iter().all(|row| row.len() == n);
        if !ok(&u) || !ok(&v) {
            return Err(Error::domain("field dimensions do not match the grids"));
        }
        Ok(HalfPlaneField {
            x_grid,
            y,
            u,
            v,
            parity: FieldParity::None,
        })
    }

    /// Builds u and v from per-height slices (real parts are taken).
    pub fn from_slices(y: Vec<f64>, u: &[SampledFunction], v: &[SampledFunction]) -> Result<Self> {
        let grid = u
            .first()
            .ok_or_else(|| Error::domain("no slices"))?
            .grid()
            .clone();
        let re = |s: &[SampledFunction]| s.iter().map(|f| f.values().iter().map(|c| c.re).collect()).collect();
        Self::new(grid, y, re(u), re(v))
    }

    /// Declares a parity, checked at every height.
    pub fn with_parity(mut self, parity: FieldParity) -> Result<Self> {
        let (su, sv) = match parity {
            FieldParity::None => {
                self.parity = parity;
                return Ok(self);
            }
            FieldParity::UEven => (1.0, -1.0),
            FieldParity::UOdd => (-1.0, 1.0),
        };
        let scale = self
            .u
            .iter()
            .chain(&self.v)
            .flat_map(|r| r.iter())
            .fold(0.0f64, |a, &b| a.max(b.abs()))
            .max(1e-300);
        for j in 0..self.y.len() {
            for i in 0..self.x_grid.len() {
                let m = self.x_grid.mirror(i);
                let eu = (self.u[j][i] - su * self.u[j][m]).abs();
                let ev = (self.v[j][i] - sv * self.v[j][m]).abs();
                if eu.max(ev) > 1e-10 * scale {
                    return Err(Error::domain(format!(
                        "parity {parity:?} fails at x = {}, y = {}",
                        self.x_grid.nodes()[i],
                        self.y[j]
                    )));
                }
            }
        }
        self.parity = parity;
        Ok(self)
    }

    pub fn x_grid(&self) -> &Arc<SymmetricGrid> {
        &self.x_grid
    }

    pub fn heights(&self) -> &[f64] {
        &self.y
    }

    pub fn parity(&self) -> FieldParity {
        self.parity
    }

    /// u at height index j.
    pub fn u_row(&self, j: usize) -> &[f64] {
        &self.u[j]
    }

    pub fn v_row(&self, j: usize) -> &[f64] {
        &self.v[j]
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.u[j][i], self.v[j][i])
    }

    pub fn part(&self, i: usize, j: usize, part: FieldPart) -> f64 {
        match part {
            FieldPart::U => self.u[j][i].abs(),
            FieldPart::V => self.v[j][i].abs(),
            FieldPart::Modulus => self.u[j][i].hypot(self.v[j][i]),
        }
    }

    /// The chosen part at an off-grid abscissa s on row j, by four-point Lagrange
    /// interpolation of u and v. None outside the grid.
    pub fn part_at(&self, s: f64, j: usize, part: FieldPart) -> Option<f64> {
        let xs = self.x_grid.nodes();
        let n = xs.len();
        if n < 4 || s < xs[0] || s > xs[n - 1] {
            return None;
        }
        let i = xs.partition_point(|&a| a <= s).clamp(2, n - 2) - 2;
        let idx = [i, i + 1, i + 2, i + 3];
        let mut w = [1.0f64; 4];
        for (a, &ia) in idx.iter().enumerate() {
            for &ib in &idx {
                if ib != ia {
                    w[a] *= (s - xs[ib]) / (xs[ia] - xs[ib]);
                }
            }
        }
        let dot = |row: &[f64]| idx.iter().zip(&w).map(|(&k, &c)| c * row[k]).sum::<f64>();
        let (u, v) = (dot(&self.u[j]), dot(&self.v[j]));
        Some(match part {
            FieldPart::U => u.abs(),
            FieldPart::V => v.abs(),
            FieldPart::Modulus => u.hypot(v),
        })
    }

    /// Complex row F(·, y_j) as a sampled function.
    pub fn row(&self, j: usize) -> SampledFunction {
        let vals = self.u[j].iter().zip(&self.v[j]).map(|(&a, &b)| Complex64::new(a, b)).collect();
        SampledFunction::new(self.x_grid.clone(), vals).expect("row length matches grid")
    }

    /// Splits F into the parts with u even and u odd.
    pub fn parity_split(&self) -> (HalfPlaneField, HalfPlaneField) {
        let n = self.x_grid.len();
        let mut ue = self.u.clone();
        let mut uo = self.u.clone();
        let mut ve = self.v.clone();
        let mut vo = self.v.clone();
        for j in 0..self.y.len() {
            for i in 0..n {
                let m = self.x_grid.mirror(i);
                ue[j][i] = 0.5 * (self.u[j][i] + self.u[j][m]);
                uo[j][i] = 0.5 * (self.u[j][i] - self.u[j][m]);
                // v odd pairs with u even
                vo[j][i] = 0.5 * (self.v[j][i] - self.v[j][m]);
                ve[j][i] = 0.5 * (self.v[j][i] + self.v[j][m]);
            }
        }
        let mk = |u, v, p| HalfPlaneField {
            x_grid: self.x_grid.clone(),
            y: self.y.clone(),
            u,
            v,
            parity: p,
        };
        (mk(ue, vo, FieldParity::UEven), mk(uo, ve, FieldParity::UOdd))
    }
}

impl FieldEval for HalfPlaneField {
    /// Interpolates in x on each sampled height, then by local cubic
    /// Lagrange interpolation in y. Heights outside the sampled range are
    /// a range error.
    fn eval(&self, x: f64, y: f64) -> Result<Complex64> {
        let ny = self.y.len();
        if !(y >= self.y[0] && y <= self.y[ny - 1]) {
            return Err(Error::range(format!("height {y} outside sampled range")));
        }
        let k = self.y.partition_point(|&h| h <= y).saturating_sub(1).min(ny - 1);
        let start = k.saturating_sub(1).min(ny.saturating_sub(4));
        let end = (start + 4).min(ny);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in start..end {
            let mut l = 1.0;
            for m in start..end {
                if m != j {
                    l *= (y - self.y[m]) / (self.y[j] - self.y[m]);
                }
            }
            if l == 0.0 {
                continue;
            }
            let u = self
                .x_grid
                .interpolate(&self.u[j], x)
                .ok_or_else(|| Error::range(format!("x = {x} outside the field window")))?;
            let v = self.x_grid.interpolate(&self.v[j], x).expect("same window");
            acc += l * Complex64::new(u, v);
        }
        Ok(acc)
    }
}

/// Breakpoints of the composite t-rule for the kernel method.
fn kernel_breaks(x: f64, y: f64, t_max: f64) -> Vec<f64> {
    let mut b: Vec<f64> = Vec::new();
    let n = (t_max / 0.5).ceil() as i64;
    let step = t_max / n as f64;
    for k in -n..=n {
        b.push(k as f64 * step);
    }
    for c in [x, -x] {
        b.push(c);
        let mut d = 0.125 * y;
        while d < 4.0 {
            b.push(c + d);
            b.push(c - d);
            d *= 2.0;
        }
    }
    b.retain(|&v| v.abs() <= t_max);
    b.sort_by(|a, c| a.partial_cmp(c).expect("finite"));
    b.dedup_by(|a, c| (*a - *c).abs() < 1e-14);
    b
}

/// c_λ ∫ f(t) K(x, y, t) |t|^{2λ} dt by composite rules refined near t = ±x.
fn extend_point_kernel(ctx: &LambdaContext, f: &SampledFunction, x: f64, y: f64, kind: KernelKind) -> Result<Complex64> {
    let two_l = 2.0 * ctx.lambda;
    let t_max = f.grid().x_max();
    let gl = gauss_legendre(16);
    let jac = jacobi_rule(0.0, two_l, 16)?;
    let breaks = kernel_breaks(x, y, t_max);
    let mut total = Complex64::new(0.0, 0.0);
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        if a == 0.0 || b == 0.0 {
            // |t|^{2λ} vanishes at the 0 end
            let sign = if b == 0.0 { -1.0 } else { 1.0 };
            let len = 2.0 * half;
            for (&s, &w) in jac.nodes.iter().zip(&jac.weights) {
                let t = sign * 0.5 * len * (1.0 + s);
                let k = kernel_theta(ctx, x, y, t, kind)?;
                total += w * (0.5 * len).powf(two_l + 1.0) * k * f.eval(t, Extension::Zero)?;
            }
        } else {
            let mid = 0.5 * (a + b);
            for (&s, &w) in gl.nodes.iter().zip(&gl.weights) {
                let t = mid + half * s;
                let k = kernel_theta(ctx, x, y, t, kind)?;
                total += half * w * t.abs().powf(two_l) * k * f.eval(t, Extension::Zero)?;
            }
        }
    }
    Ok(ctx.c_lambda * total)
}

/// Default ξ-grid for the spectral method.
pub fn default_xi_grid(ctx: &LambdaContext, xi_max: f64) -> Result<Arc<SymmetricGrid>> {
    let spec = GridSpec {
        x_max: xi_max,
        ..GridSpec::default()
    };
    Ok(Arc::new(SymmetricGrid::panels(ctx, &spec)?))
}

/// Per-height slices of Pf or Qf on `out`.
///
/// The spectral method uses `xi_grid` for the transform of f; its slices carry
/// a tail bound e^{−yΞ}·c_λ∫|𝓕f||ξ|^{2λ} in [`ExtensionReport`].
pub fn extend(
    ctx: &LambdaContext,
    f: &SampledFunction,
    out: Arc<SymmetricGrid>,
    heights: &[f64],
    method: ExtensionMethod,
    kind: KernelKind,
    xi_grid: Option<Arc<SymmetricGrid>>,
) -> Result<ExtensionReport> {
    for &y in heights {
        check_height(y)?;
    }
    match method {
        ExtensionMethod::Kernel => {
            let slices = heights
                .iter()
                .map(|&y| {
                    let vals = out
                        .nodes()
                        .par_iter()
                        .map(|&x| extend_point_kernel(ctx, f, x, y, kind))
                        .collect::<Result<Vec<_>>>()?;
                    SampledFunction::new(out.clone(), vals)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ExtensionReport {
                slices,
                tail_bound: 0.0,
            })
        }
        ExtensionMethod::Spectral => {
            let xi_grid = match xi_grid {
                Some(g) => g,
                None => default_xi_grid(ctx, 40.0)?,
            };
            let forward = TransformPlan::new(ctx, f.grid().clone(), xi_grid.clone());
            let back = TransformPlan::new(ctx, out.clone(), xi_grid.clone());
            let spec = forward.forward(f)?;
            let mass = spec.lp_norm(1.0)?;
            let y_min = heights.iter().copied().fold(f64::INFINITY, f64::min);
            let tail_bound = (-y_min * xi_grid.x_max()).exp() * mass + spec.tail_bound();
            let slices = heights
                .iter()
                .map(|&y| {
                    let vals: Vec<Complex64> = spec
                        .xi_nodes()
                        .iter()
                        .zip(spec.values())
                        .map(|(&xi, &v)| {
                            let damp = (-y * xi.abs()).exp();
                            match kind {
                                KernelKind::Poisson => damp * v,
                                KernelKind::Conjugate => Complex64::new(0.0, -xi.signum()) * damp * v,
                            }
                        })
                        .collect();
                    let g = crate::dunkl::SpectrumSamples::new(xi_grid.clone(), vals)?;
                    back.inverse(&g)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ExtensionReport { slices, tail_bound })
        }
    }
}

/// Output of [`extend`].
#[derive(Debug, Clone)]
pub struct ExtensionReport {
    pub slices: Vec<SampledFunction>,
    pub tail_bound: f64,
}

/// Pf on `out` × heights.
pub fn poisson_extend(
    ctx: &LambdaContext,
    f: &SampledFunction,
    out: Arc<SymmetricGrid>,
    heights: &[f64],
    method: ExtensionMethod,
) -> Result<ExtensionReport> {
    extend(ctx, f, out, heights, method, KernelKind::Poisson, None)
}

/// Qf on `out` × heights.
pub fn conjugate_extend(
    ctx: &LambdaContext,
    f: &SampledFunction,
    out: Arc<SymmetricGrid>,
    heights: &[f64],
    method: ExtensionMethod,
) -> Result<ExtensionReport> {
    extend(ctx, f, out, heights, method, KernelKind::Conjugate, None)
}

/// The pair (Pf, Qf) of a real f as a field.
pub fn poisson_field(
    ctx: &LambdaContext,
    f: &SampledFunction,
    out: Arc<SymmetricGrid>,
    heights: &[f64],
    method: ExtensionMethod,
) -> Result<HalfPlaneField> {
    let u = poisson_extend(ctx, f, out.clone(), heights, method)?;
    let v = conjugate_extend(ctx, f, out, heights, method)?;
    HalfPlaneField::from_slices(heights.to_vec(), &u.slices, &v.slices)
}

/// Max-norm residuals over interior nodes and heights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldResiduals {
    /// D_x u − ∂_y v
    pub cr_first: f64,
    /// ∂_y u + D_x v
    pub cr_second: f64,
    /// (D_x² + ∂_y²) u
    pub harmonic: f64,
}

impl FieldResiduals {
    pub fn cr(&self) -> f64 {
        self.cr_first.max(self.cr_second)
    }
}

/// λ-Cauchy–Riemann and λ-harmonicity residuals; D_x by [`dunkl_D`] on each
/// height, ∂_y by three-point differences. Nodes within the one-sided
/// stencil zone of either end (twice that for D_x²) and the first and last
/// heights are excluded.
pub fn field_residuals(ctx: &LambdaContext, field: &HalfPlaneField, scheme: DerivativeScheme) -> Result<FieldResiduals> {
    let ny = field.y.len();
    if ny < 3 {
        return Err(Error::domain("field residuals need at least 3 heights"));
    }
    let grid = &field.x_grid;
    let n = grid.len();
    let mut dxu = Vec::with_capacity(ny);
    let mut dxv = Vec::with_capacity(ny);
    let mut dxxu = Vec::with_capacity(ny);
    let real = |row: &[f64]| SampledFunction::new(grid.clone(), row.iter().map(|&a| Complex64::new(a, 0.0)).collect());
    for j in 0..ny {
        let du = dunkl_D(ctx, &real(&field.u[j])?, scheme)?;
        let dv = dunkl_D(ctx, &real(&field.v[j])?, scheme)?;
        let ddu = dunkl_D(ctx, &du, scheme)?;
        dxu.push(du.values().iter().map(|c| c.re).collect::<Vec<_>>());
        dxv.push(dv.values().iter().map(|c| c.re).collect::<Vec<_>>());
        dxxu.push(ddu.values().iter().map(|c| c.re).collect::<Vec<_>>());
    }
    let bw = scheme.boundary_width();
    let mut res = FieldResiduals {
        cr_first: 0.0,
        cr_second: 0.0,
        harmonic: 0.0,
    };
    for j in 1..ny - 1 {
        let (y0, y1, y2) = (field.y[j - 1], field.y[j], field.y[j + 1]);
        // nonuniform three-point weights for first and second derivatives
        let (h0, h1) = (y1 - y0, y2 - y1);
        let d1 = [-h1 / (h0 * (h0 + h1)), (h1 - h0) / (h0 * h1), h0 / (h1 * (h0 + h1))];
        let d2 = [2.0 / (h0 * (h0 + h1)), -2.0 / (h0 * h1), 2.0 / (h1 * (h0 + h1))];
        for i in bw..n - bw {
            let dyv = d1[0] * field.v[j - 1][i] + d1[1] * field.v[j][i] + d1[2] * field.v[j + 1][i];
            let dyu = d1[0] * field.u[j - 1][i] + d1[1] * field.u[j][i] + d1[2] * field.u[j + 1][i];
            res.cr_first = res.cr_first.max((dxu[j][i] - dyv).abs());
            res.cr_second = res.cr_second.max((dyu + dxv[j][i]).abs());
            if i >= 2 * bw && i < n - 2 * bw {
                let dyyu = d2[0] * field.u[j - 1][i] + d2[1] * field.u[j][i] + d2[2] * field.u[j + 1][i];
                res.harmonic = res.harmonic.max((dxxu[j][i] + dyyu).abs());
            }
        }
    }
    Ok(res)
}

/// The sampled cone {|s − x| < y − base, y_min ≤ y ≤ y_max}; the vertex
/// (x, y) itself always counts, so a row at y = base contributes |F(x, base)|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSpec {
    aperture: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub base: f64,
}

impl ConeSpec {
    pub fn new(y_min: f64, y_max: f64) -> Result<Self> {
        if !(y_min > 0.0 && y_max >= y_min) {
            return Err(Error::domain("cone needs 0 < y_min <= y_max"));
        }
        Ok(ConeSpec {
            aperture: 1.0,
            y_min,
            y_max,
            base: 0.0,
        })
    }

    /// Cone of F_t(x, y) = F(x, y + t) read off samples at heights ≥ t.
    pub fn above(t: f64, y_max: f64) -> Result<Self> {
        let mut c = Self::new(t, y_max)?;
        c.base = t;
        Ok(c)
    }

    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    /// Cone covering all heights of a field.
    pub fn covering(field: &HalfPlaneField) -> Self {
        ConeSpec {
            aperture: 1.0,
            y_min: field.y[0],
            y_max: field.y[field.y.len() - 1],
            base: 0.0,
        }
    }
}

/// sup of the chosen part over sampled (s, y) with |s − x| < y, per base node.
pub fn nontangential_max(field: &HalfPlaneField, part: FieldPart, cone: &ConeSpec) -> SampledFunction {
    let xs = field.x_grid.nodes();
    let rows: Vec<usize> = (0..field.y.len())
        .filter(|&j| field.y[j] >= cone.y_min && field.y[j] <= cone.y_max)
        .collect();
    let vals = xs
        .par_iter()
        .enumerate()
        .map(|(k, &x)| {
            let mut best = 0.0f64;
            for &j in &rows {
                best = best.max(field.part(k, j, part));
                let y = (field.y[j] - cone.base) * cone.aperture;
                let lo = xs.partition_point(|&s| s <= x - y);
                let hi = xs.partition_point(|&s| s < x + y);
                for i in lo..hi {
                    if (xs[i] - x).abs() < y {
                        best = best.max(field.part(i, j, part));
                    }
                }
                // the open window's endpoints, as limits
                for s in [x - y, x + y] {
                    if let Some(v) = field.part_at(s, j, part) {
                        best = best.max(v);
                    }
                }
            }
            Complex64::new(best, 0.0)
        })
        .collect();
    SampledFunction::new(field.x_grid.clone(), vals).expect("one value per node")
}

/// sup over heights at s = x (the vertical maximal function).
pub fn vertical_max(field: &HalfPlaneField, part: FieldPart, cone: &ConeSpec) -> SampledFunction {
    let vals = (0..field.x_grid.len())
        .map(|i| {
            let best = (0..field.y.len())
                .filter(|&j| field.y[j] >= cone.y_min && field.y[j] <= cone.y_max)
                .map(|j| field.part(i, j, part))
                .fold(0.0, f64::max);
            Complex64::new(best, 0.0)
        })
        .collect();
    SampledFunction::new(field.x_grid.clone(), vals).expect("one value per node")
}

/// Derivative helper re-exported for fields evaluated off-grid.
pub fn x_derivative(grid: &SymmetricGrid, row: &[f64], scheme: DerivativeScheme) -> Result<Vec<f64>> {
    let vals: Vec<Complex64> = row.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    Ok(derivative(grid, &vals, scheme)?.into_iter().map(|c| c.re).collect())
}

/// The crossover below which [`poisson_kernel_transform`] cannot rotate the tail.
pub fn min_transform_frequency() -> f64 {
    SERIES_CROSSOVER / TRANSFORM_X_LIMIT
}
