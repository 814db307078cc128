//! λ-analytic fields F(x, y) = c_λ ∫_0^∞ e^{−yξ} φ(ξ) E_λ(ixξ) ξ^{2λ} dξ.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::density::{ParityTarget, SpectralDensity};
use crate::error::{Error, Result};
use crate::poisson::{FieldEval, FieldParity, HalfPlaneField};
use crate::quadrature::{gauss_legendre, SymmetricGrid};
use crate::special::{dunkl_kernel_real, LambdaContext};

/// Tolerance of the synthesis self-check, relative to the density mass.
pub const SYNTHESIS_TOL: f64 = 1e-6;

/// F as a finite sum Σ_k a_k e^{−yξ_k} E_λ(ixξ_k), exactly λ-analytic for
/// any choice of nodes and coefficients.
#[derive(Debug, Clone)]
pub struct AnalyticField {
    ctx: LambdaContext,
    xi: Vec<f64>,
    coef: Vec<Complex64>,
    parity: ParityTarget,
    shift: f64,
}

impl AnalyticField {
    /// Trapezoid discretization of φ, checked against the rule on every
    /// other node at the widest probe point |x| = `x_reach`.
    pub fn new(ctx: &LambdaContext, phi: &SpectralDensity, x_reach: f64) -> Result<Self> {
        let field = Self::from_rule(ctx, phi, 1);
        if phi.values().len() % 2 == 1 && phi.values().len() >= 5 {
            let coarse = Self::from_rule(ctx, phi, 2);
            let mass = phi.mass(ctx);
            let y = 0.0;
            for &x in &[x_reach, 0.5 * x_reach, 1.0] {
                let d = (field.value(x, y) - coarse.value(x, y)).norm();
                if d > SYNTHESIS_TOL * mass.max(1e-300) {
                    return Err(Error::Resolution(format!(
                        "density sampling does not resolve E(ix xi) at |x| = {x}: halving check differs by {d:.3e}"
                    )));
                }
            }
        }
        Ok(field)
    }

    fn from_rule(ctx: &LambdaContext, phi: &SpectralDensity, stride: usize) -> Self {
        let nodes = phi.nodes();
        let n = nodes.len();
        let h = phi.spacing() * stride as f64;
        let mut xi = Vec::new();
        let mut coef = Vec::new();
        for k in (0..n).step_by(stride) {
            let w = if k == 0 || k == n - 1 { 0.5 * h } else { h };
            xi.push(nodes[k]);
            coef.push(w * ctx.c_lambda * nodes[k].powf(2.0 * ctx.lambda) * phi.values()[k]);
        }
        AnalyticField {
            ctx: ctx.clone(),
            xi,
            coef,
            parity: phi.parity(),
            shift: 0.0,
        }
    }

    /// A single exponential e^{−yξ₀} E_λ(ixξ₀) times `amp`.
    pub fn exponential(ctx: &LambdaContext, xi0: f64, amp: f64) -> Self {
        AnalyticField {
            ctx: ctx.clone(),
            xi: vec![xi0],
            coef: vec![Complex64::new(amp, 0.0)],
            parity: ParityTarget::UEven,
            shift: 0.0,
        }
    }

    /// F_t(x, y) = F(x, y + t).
    pub fn shifted(&self, t: f64) -> Self {
        let mut out = self.clone();
        out.shift += t;
        out
    }

    pub fn parity(&self) -> ParityTarget {
        self.parity
    }

    pub fn lambda(&self) -> f64 {
        self.ctx.lambda
    }

    pub fn context(&self) -> &LambdaContext {
        &self.ctx
    }

    /// F at (x, y) for any y > −shift.
    pub fn value(&self, x: f64, y: f64) -> Complex64 {
        let y = y + self.shift;
        self.xi
            .iter()
            .zip(&self.coef)
            .map(|(&xi, &a)| a * (-y * xi).exp() * dunkl_kernel_real(&self.ctx, x * xi))
            .sum()
    }

    /// Samples on `x_grid` × `heights`.
    pub fn sample(&self, x_grid: Arc<SymmetricGrid>, heights: &[f64]) -> Result<HalfPlaneField> {
        let nodes = x_grid.nodes();
        let n = nodes.len();
        // E(−ixξ) = conj E(ixξ): evaluate for x ≥ 0 and mirror
        let half: Vec<usize> = (0..n).filter(|&i| nodes[i] >= 0.0).collect();
        let kernel: Vec<Vec<Complex64>> = half
            .par_iter()
            .map(|&i| self.xi.iter().map(|&xi| dunkl_kernel_real(&self.ctx, nodes[i] * xi)).collect())
            .collect();
        let mut u = vec![vec![0.0; n]; heights.len()];
        let mut v = vec![vec![0.0; n]; heights.len()];
        for (j, &y) in heights.iter().enumerate() {
            let damped: Vec<Complex64> = self
                .xi
                .iter()
                .zip(&self.coef)
                .map(|(&xi, &a)| a * (-(y + self.shift) * xi).exp())
                .collect();
            for (row, &i) in kernel.iter().zip(&half) {
                let mut plus = Complex64::new(0.0, 0.0);
                let mut minus = Complex64::new(0.0, 0.0);
                for (d, e) in damped.iter().zip(row) {
                    plus += d * e;
                    minus += d * e.conj();
                }
                let m = x_grid.mirror(i);
                u[j][i] = plus.re;
                v[j][i] = plus.im;
                u[j][m] = minus.re;
                v[j][m] = minus.im;
            }
        }
        let field = HalfPlaneField::new(x_grid, heights.to_vec(), u, v)?;
        let parity = match self.parity {
            ParityTarget::UEven => FieldParity::UEven,
            ParityTarget::UOdd => FieldParity::UOdd,
        };
        field.with_parity(parity)
    }
}

impl AnalyticField {
    /// (F(x, y), F(−x, y)) for each x, sharing one kernel row per |x|.
    pub fn line_pairs(&self, xs: &[f64], y: f64) -> Vec<(Complex64, Complex64)> {
        let damped: Vec<Complex64> = self
            .xi
            .iter()
            .zip(&self.coef)
            .map(|(&xi, &a)| a * (-(y + self.shift) * xi).exp())
            .collect();
        xs.par_iter()
            .map(|&x| {
                let mut plus = Complex64::new(0.0, 0.0);
                let mut minus = Complex64::new(0.0, 0.0);
                for (d, &xi) in damped.iter().zip(&self.xi) {
                    let e = dunkl_kernel_real(&self.ctx, x * xi);
                    plus += d * e;
                    minus += d * e.conj();
                }
                (plus, minus)
            })
            .collect()
    }
}

/// Smallest integer N for which the tail of g_t beyond N is at most `rel` of
/// its integral, where g_t(x) = ∫_0^∞ (|F_t(x, y)|² + |F_t(−x, y)|²)|x|^{2λ} dy.
/// The integral runs over [0, X] with X doubled from 256 until N ≤ X/2.
pub fn tail_truncation(field: &AnalyticField, t: f64, rel: f64) -> Result<f64> {
    let mut far = 256.0;
    loop {
        let n = tail_on(field, t, rel, far)?;
        if n <= 0.5 * far {
            return Ok(n);
        }
        if far >= 4096.0 {
            return Err(Error::Resolution(format!("g_t tail still above {rel:e} at N = {n}")));
        }
        far *= 2.0;
    }
}

fn tail_on(field: &AnalyticField, t: f64, rel: f64, x_far: f64) -> Result<f64> {
    let xi_min = field.xi.iter().cloned().filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
    if !(t >= 0.0 && rel > 0.0 && x_far >= 2.0 && xi_min.is_finite()) {
        return Err(Error::domain("tail test needs t ≥ 0, rel > 0, x_far ≥ 2 and a positive spectrum"));
    }
    // |F_t|² decays at least like e^{−2ξ_min y}
    let y_far = 20.0 / xi_min;
    let yr = gauss_legendre(8);
    let mut ys = Vec::new();
    let mut wy = Vec::new();
    let (mut a, mut b) = (0.0, 0.25f64.min(y_far));
    while a < y_far {
        for (&s, &w) in yr.nodes.iter().zip(&yr.weights) {
            ys.push(a + 0.5 * (b - a) * (s + 1.0));
            wy.push(0.5 * (b - a) * w);
        }
        a = b;
        b = (2.0 * b).min(y_far);
    }
    let damped: Vec<Vec<Complex64>> = ys
        .iter()
        .map(|&y| field.xi.iter().zip(&field.coef).map(|(&xi, &c)| c * (-(y + t + field.shift) * xi).exp()).collect())
        .collect();
    let xr = gauss_legendre(16);
    let panels = x_far.ceil() as usize;
    let two_l = 2.0 * field.ctx.lambda;
    let mass: Vec<f64> = (0..panels)
        .into_par_iter()
        .map(|k| {
            let mut acc = 0.0;
            for (&s, &w) in xr.nodes.iter().zip(&xr.weights) {
                let x = k as f64 + 0.5 * (s + 1.0);
                let row: Vec<Complex64> = field.xi.iter().map(|&xi| dunkl_kernel_real(&field.ctx, x * xi)).collect();
                let mut g = 0.0;
                for (d, &v) in damped.iter().zip(&wy) {
                    let mut plus = Complex64::new(0.0, 0.0);
                    let mut minus = Complex64::new(0.0, 0.0);
                    for (c, e) in d.iter().zip(&row) {
                        plus += c * e;
                        minus += c * e.conj();
                    }
                    g += v * (plus.norm_sqr() + minus.norm_sqr());
                }
                acc += 0.5 * w * x.powf(two_l) * g;
            }
            acc
        })
        .collect();
    let total: f64 = mass.iter().sum();
    let mut tail = 0.0;
    for k in (0..panels).rev() {
        if tail + mass[k] > rel * total {
            if k + 1 == panels {
                return Err(Error::Resolution(format!("g_t tail beyond {x_far} exceeds {rel:e} of the total")));
            }
            return Ok((k + 1) as f64);
        }
        tail += mass[k];
    }
    Ok(0.0)
}

/// Spectral mass of one height slice on either side of ξ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSplit {
    /// ∫_{−Ξ}^0 |𝓕_λ(F(·, y) 1_{[−X, X]})| dμ_λ
    pub negative: f64,
    /// Σ_k |a_k| e^{−yξ_k}: total variation of the untruncated spectrum
    pub positive: f64,
    /// the window half-width X
    pub reach: f64,
}

impl SpectralSplit {
    pub fn fraction(&self) -> f64 {
        if self.positive > 0.0 {
            self.negative / self.positive
        } else {
            self.negative
        }
    }
}

impl AnalyticField {
    /// Half-width below which the node sum has not yet started to repeat.
    /// Uniform nodes with spacing Δ make Σ_k a_k E(ixξ_k) nearly periodic
    /// in x with period 2π/Δ once |x| is large.
    pub fn revival_free_reach(&self) -> Result<f64> {
        let gap = self
            .xi
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if !(gap.is_finite() && gap > 0.0) {
            return Err(Error::domain("need at least two distinct nodes"));
        }
        Ok(0.45 * 2.0 * std::f64::consts::PI / gap)
    }

    /// 𝓕_λ(F(·, y) 1_{[−X, X]})(ξ) for ξ off the nodes, in closed form.
    ///
    /// D_λ is skew on symmetric intervals up to a boundary term, so for
    /// D_λE(i·η) = iηE(i·η):
    /// ∫_{−X}^{X} E(ixη)E(−ixξ)|x|^{2λ}dx = X^{2λ}[E(iXη)E(−iXξ) − E(−iXη)E(iXξ)] / (i(η − ξ)).
    pub fn windowed_transform(&self, y: f64, reach: f64, xi: &[f64]) -> Result<Vec<Complex64>> {
        if !(reach > 0.0 && reach.is_finite()) {
            return Err(Error::domain(format!("window half-width must be positive, got {reach}")));
        }
        let l = self.ctx.lambda;
        let scale = self.ctx.c_lambda * reach.powf(2.0 * l);
        let edge: Vec<(Complex64, f64, Complex64)> = self
            .xi
            .iter()
            .zip(&self.coef)
            .map(|(&eta, &a)| (a * (-(y + self.shift) * eta).exp(), eta, dunkl_kernel_real(&self.ctx, reach * eta)))
            .collect();
        xi.par_iter()
            .map(|&s| {
                let e = dunkl_kernel_real(&self.ctx, reach * s);
                let mut acc = Complex64::new(0.0, 0.0);
                for &(d, eta, ee) in &edge {
                    let gap = eta - s;
                    if gap.abs() <= 1e-12 * eta.abs().max(1.0) {
                        return Err(Error::Singular(format!("ξ = {s} coincides with a spectral node")));
                    }
                    let b = ee * e.conj() - ee.conj() * e;
                    acc += d * b / Complex64::new(0.0, gap);
                }
                Ok(scale * acc)
            })
            .collect()
    }

    /// Negative-frequency mass of the slice at height y over ξ ∈ [−Ξ, 0),
    /// windowed at the revival-free reach.
    pub fn spectral_split(&self, y: f64, xi_max: f64) -> Result<SpectralSplit> {
        if !(xi_max > 0.0) {
            return Err(Error::domain(format!("frequency cutoff must be positive, got {xi_max}")));
        }
        let reach = self.revival_free_reach()?;
        // panels of one period of E(iXξ) in ξ
        let panel = 2.0 * std::f64::consts::PI / reach;
        let count = (xi_max / panel).ceil() as usize;
        let h = xi_max / count as f64;
        let rule = gauss_legendre(16);
        let mut nodes = Vec::with_capacity(count * rule.len());
        let mut weights = Vec::with_capacity(count * rule.len());
        for k in 0..count {
            let a = -xi_max + k as f64 * h;
            for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                let s = a + 0.5 * h * (t + 1.0);
                nodes.push(s);
                weights.push(0.5 * h * w * self.ctx.c_lambda * s.abs().powf(2.0 * self.ctx.lambda));
            }
        }
        let values = self.windowed_transform(y, reach, &nodes)?;
        let negative = values.iter().zip(&weights).map(|(v, w)| w * v.norm()).sum();
        let positive = self
            .xi
            .iter()
            .zip(&self.coef)
            .map(|(&eta, a)| a.norm() * (-(y + self.shift) * eta).exp())
            .sum();
        Ok(SpectralSplit { negative, positive, reach })
    }
}

impl FieldEval for AnalyticField {
    fn eval(&self, x: f64, y: f64) -> Result<Complex64> {
        if !(y + self.shift > 0.0) {
            return Err(Error::range(format!("height {y} is not in the upper half plane")));
        }
        Ok(self.value(x, y))
    }

    fn eval_grid(&self, xs: &[f64], ys: &[f64]) -> Result<Vec<Vec<Complex64>>> {
        if let Some(&y) = ys.iter().find(|&&y| !(y + self.shift > 0.0)) {
            return Err(Error::range(format!("height {y} is not in the upper half plane")));
        }
        let kernel: Vec<Vec<Complex64>> = xs
            .par_iter()
            .map(|&x| self.xi.iter().map(|&xi| dunkl_kernel_real(&self.ctx, x * xi)).collect())
            .collect();
        Ok(ys
            .iter()
            .map(|&y| {
                let damped: Vec<Complex64> = self
                    .xi
                    .iter()
                    .zip(&self.coef)
                    .map(|(&xi, &a)| a * (-(y + self.shift) * xi).exp())
                    .collect();
                kernel
                    .iter()
                    .map(|row| row.iter().zip(&damped).map(|(e, d)| e * d).sum())
                    .collect()
            })
            .collect())
    }
}

/// Samples of the field synthesized from φ.
pub fn synthesize_analytic(
    ctx: &LambdaContext,
    phi: &SpectralDensity,
    x_grid: Arc<SymmetricGrid>,
    heights: &[f64],
) -> Result<HalfPlaneField> {
    let field = AnalyticField::new(ctx, phi, x_grid.x_max())?;
    field.sample(x_grid, heights)
}
