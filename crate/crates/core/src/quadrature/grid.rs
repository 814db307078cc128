//! Symmetric sampling grids whose weights realize c_λ|x|^{2λ}dx on [−X, X].

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use super::jacobi::{gauss_legendre, jacobi_rule};
use crate::error::{Error, Result};
use crate::special::LambdaContext;

/// Values that can be sampled, interpolated and integrated.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync + 'static
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Panel layout for [`SymmetricGrid::panels`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_max: f64,
    /// Bulk panel width (rounded so that panels tile [0, x_max]).
    pub panel_width: f64,
    /// Gauss points per panel.
    pub order: usize,
    /// Number of geometrically shrinking panels between the innermost panel and the bulk.
    pub refine_levels: u32,
    /// Ratio between consecutive refined panel widths, in (0, 1).
    pub refine_ratio: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            x_max: 16.0,
            panel_width: 0.5,
            order: 16,
            refine_levels: 0,
            refine_ratio: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
enum Layout {
    /// Interpolation panels: node index range and the barycentric weights.
    Panels { breaks: Vec<f64>, panels: Vec<InterpPanel> },
    Uniform { h: f64 },
}

#[derive(Debug, Clone)]
struct InterpPanel {
    start: usize,
    end: usize,
    bary: Vec<f64>,
}

/// Nodes symmetric about 0 with positive weights for c_λ∫ · |x|^{2λ} dx.
#[derive(Debug, Clone)]
pub struct SymmetricGrid {
    lambda: f64,
    x_max: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    layout: Layout,
}

impl SymmetricGrid {
    /// Composite Gauss panels. The innermost panel [0, w₀] uses a Gauss–Jacobi
    /// rule with weight x^{2λ}; the others Gauss–Legendre with the density folded in.
    pub fn panels(ctx: &LambdaContext, spec: &GridSpec) -> Result<Self> {
        if !(spec.x_max > 0.0) || !(spec.panel_width > 0.0) {
            return Err(Error::domain("grid x_max and panel width must be positive"));
        }
        if spec.order < 2 {
            return Err(Error::domain("panel order must be at least 2"));
        }
        if spec.refine_levels > 0 && !(spec.refine_ratio > 0.0 && spec.refine_ratio < 1.0) {
            return Err(Error::domain("refine ratio must lie in (0, 1)"));
        }
        let n_bulk = (spec.x_max / spec.panel_width).ceil().max(1.0) as usize;
        let pw = spec.x_max / n_bulk as f64;
        // positive breakpoints
        let mut pos = vec![0.0];
        for k in (1..=spec.refine_levels).rev() {
            pos.push(pw * spec.refine_ratio.powi(k as i32));
        }
        for k in 1..=n_bulk {
            pos.push(pw * k as f64);
        }
        let two_l = 2.0 * ctx.lambda;
        let inner = jacobi_rule(0.0, two_l, spec.order)?;
        let gl = gauss_legendre(spec.order);

        let mut pos_nodes = Vec::new();
        let mut pos_weights = Vec::new();
        for (i, pair) in pos.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            let half = 0.5 * (b - a);
            if i == 0 {
                // x = half (1 + s), x^{2λ} = half^{2λ} (1+s)^{2λ}
                let scale = ctx.c_lambda * half.powf(two_l + 1.0);
                for (&s, &w) in inner.nodes.iter().zip(&inner.weights) {
                    pos_nodes.push(half * (1.0 + s));
                    pos_weights.push(scale * w);
                }
            } else {
                let mid = 0.5 * (a + b);
                for (&s, &w) in gl.nodes.iter().zip(&gl.weights) {
                    let x = mid + half * s;
                    pos_nodes.push(x);
                    pos_weights.push(ctx.c_lambda * half * w * x.powf(two_l));
                }
            }
        }
        let m = pos_nodes.len();
        let mut nodes = Vec::with_capacity(2 * m);
        let mut weights = Vec::with_capacity(2 * m);
        for i in (0..m).rev() {
            nodes.push(-pos_nodes[i]);
            weights.push(pos_weights[i]);
        }
        nodes.extend_from_slice(&pos_nodes);
        weights.extend_from_slice(&pos_weights);

        // one interpolation panel per quadrature panel; 0 is a break
        let n = spec.order;
        let mut panels: Vec<InterpPanel> = (0..nodes.len() / n)
            .map(|p| InterpPanel {
                start: p * n,
                end: (p + 1) * n,
                bary: Vec::new(),
            })
            .collect();
        let mut all_breaks: Vec<f64> = pos.iter().rev().map(|&b| -b).collect();
        all_breaks.extend_from_slice(&pos[1..]);
        for panel in panels.iter_mut() {
            panel.bary = barycentric_weights(&nodes[panel.start..panel.end]);
        }
        debug_assert_eq!(all_breaks.len(), panels.len() + 1);

        Ok(SymmetricGrid {
            lambda: ctx.lambda,
            x_max: pos[pos.len() - 1],
            nodes,
            weights,
            layout: Layout::Panels {
                breaks: all_breaks,
                panels,
            },
        })
    }

    /// Uniform grid with spacing h: nodes k·h (`staggered = false`, includes 0)
    /// or (k+½)h. Each weight is the exact measure of the node's cell.
    pub fn uniform(ctx: &LambdaContext, h: f64, x_max: f64, staggered: bool) -> Result<Self> {
        if !(h > 0.0) || !(x_max > h) {
            return Err(Error::domain("uniform grid needs 0 < h < x_max"));
        }
        let mut pos = Vec::new();
        if staggered {
            let mut k = 0usize;
            loop {
                let x = (k as f64 + 0.5) * h;
                if x > x_max + 1e-12 * h {
                    break;
                }
                pos.push(x);
                k += 1;
            }
        } else {
            let mut k = 1usize;
            loop {
                let x = k as f64 * h;
                if x > x_max + 1e-12 * h {
                    break;
                }
                pos.push(x);
                k += 1;
            }
        }
        let two_l = 2.0 * ctx.lambda;
        let antider = |x: f64| x.abs().powf(two_l + 1.0) * x.signum() / (two_l + 1.0);
        let cell = |x: f64| {
            let a = x - 0.5 * h;
            let b = x + 0.5 * h;
            ctx.c_lambda * (antider(b) - antider(a))
        };
        let mut nodes: Vec<f64> = pos.iter().rev().map(|&x| -x).collect();
        if !staggered {
            nodes.push(0.0);
        }
        nodes.extend_from_slice(&pos);
        let weights = nodes.iter().map(|&x| cell(x)).collect();
        let last = *pos.last().expect("x_max > h gives at least one node");
        Ok(SymmetricGrid {
            lambda: ctx.lambda,
            x_max: last + 0.5 * h,
            nodes,
            weights,
            layout: Layout::Uniform { h },
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index of −x for the node at index i.
    #[inline]
    pub fn mirror(&self, i: usize) -> usize {
        self.nodes.len() - 1 - i
    }

    /// Spacing for uniform grids; `None` for panel grids.
    pub fn uniform_spacing(&self) -> Option<f64> {
        match self.layout {
            Layout::Uniform { h } => Some(h),
            Layout::Panels { .. } => None,
        }
    }

    /// Largest gap between consecutive nodes.
    pub fn max_spacing(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|p| p[1] - p[0])
            .fold(0.0, f64::max)
    }

    /// Σ w_k v_k with compensated summation in node order.
    pub fn sum<T: Scalar>(&self, values: &[T]) -> T {
        debug_assert_eq!(values.len(), self.len());
        let mut s = T::zero();
        let mut c = T::zero();
        for (&v, &w) in values.iter().zip(&self.weights) {
            let y = v * w - c;
            let t = s + y;
            c = (t - s) - y;
            s = t;
        }
        s
    }

    /// Interpolated value at x, or `None` outside [−x_max, x_max].
    pub fn interpolate<T: Scalar>(&self, values: &[T], x: f64) -> Option<T> {
        if !(x.abs() <= self.x_max) {
            return None;
        }
        match &self.layout {
            Layout::Uniform { h } => Some(self.cubic(values, x, *h)),
            Layout::Panels { breaks, panels } => {
                let idx = match breaks.binary_search_by(|b| b.partial_cmp(&x).expect("finite")) {
                    Ok(i) => i.min(panels.len() - 1),
                    Err(i) => i.saturating_sub(1).min(panels.len() - 1),
                };
                let p = &panels[idx];
                Some(barycentric(&self.nodes[p.start..p.end], &values[p.start..p.end], &p.bary, x))
            }
        }
    }

    fn cubic<T: Scalar>(&self, values: &[T], x: f64, h: f64) -> T {
        let n = self.nodes.len();
        let x0 = self.nodes[0];
        let pos = (x - x0) / h;
        let k = (pos.floor() as isize).clamp(0, n as isize - 2) as usize;
        let start = k.saturating_sub(1).min(n.saturating_sub(4));
        let end = (start + 4).min(n);
        let xs = &self.nodes[start..end];
        let mut acc = T::zero();
        for (j, &xj) in xs.iter().enumerate() {
            let mut l = 1.0;
            for (m, &xm) in xs.iter().enumerate() {
                if m != j {
                    l *= (x - xm) / (xj - xm);
                }
            }
            acc = acc + values[start + j] * l;
        }
        acc
    }
}

fn barycentric_weights(xs: &[f64]) -> Vec<f64> {
    // scaled to avoid overflow for clustered nodes
    let span = xs[xs.len() - 1] - xs[0];
    let scale = 4.0 / span;
    (0..xs.len())
        .map(|j| {
            let mut p = 1.0;
            for (m, &xm) in xs.iter().enumerate() {
                if m != j {
                    p *= (xs[j] - xm) * scale;
                }
            }
            1.0 / p
        })
        .collect()
}

fn barycentric<T: Scalar>(xs: &[f64], vs: &[T], bary: &[f64], x: f64) -> T {
    let mut num = T::zero();
    let mut den = 0.0;
    for ((&xj, &vj), &bj) in xs.iter().zip(vs).zip(bary) {
        let d = x - xj;
        if d == 0.0 {
            return vj;
        }
        let c = bj / d;
        num = num + vj * c;
        den += c;
    }
    num * (1.0 / den)
}

/// c_λ ∫ f |x|^{2λ} dx over the grid window, for a callable integrand.
pub fn weighted_integral<F: Fn(f64) -> f64>(f: F, grid: &SymmetricGrid) -> f64 {
    let values: Vec<f64> = grid.nodes().iter().map(|&x| f(x)).collect();
    grid.sum(&values)
}

/// (c_λ ∫ |f|^p |x|^{2λ} dx)^{1/p} from samples; `p = ∞` gives the max norm.
pub fn weighted_lp_norm<T: Scalar>(values: &[T], p: f64, grid: &SymmetricGrid) -> Result<f64> {
    if p.is_infinite() && p > 0.0 {
        return Ok(values.iter().map(|v| v.magnitude()).fold(0.0, f64::max));
    }
    if !(p > 0.0) {
        return Err(Error::domain(format!("exponent p must be positive, got {p}")));
    }
    let powered: Vec<f64> = values.iter().map(|v| v.magnitude().powf(p)).collect();
    Ok(grid.sum(&powered).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{constants, gamma};
    use crate::testing::adaptive_simpson;

    fn panel_grid(l: f64, x_max: f64) -> (LambdaContext, SymmetricGrid) {
        let ctx = constants(l).unwrap();
        let spec = GridSpec {
            x_max,
            ..GridSpec::default()
        };
        let g = SymmetricGrid::panels(&ctx, &spec).unwrap();
        (ctx, g)
    }

    #[test]
    fn grid_is_symmetric_with_positive_weights() {
        for &l in &[0.3, 1.0, 2.5] {
            let (_, g) = panel_grid(l, 6.0);
            for i in 0..g.len() {
                let j = g.mirror(i);
                assert_eq!(g.nodes()[i], -g.nodes()[j]);
                assert_eq!(g.weights()[i], g.weights()[j]);
                assert!(g.weights()[i] > 0.0);
            }
            assert!(g.nodes().windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn indicator_of_unit_interval_lambda_half() {
        // |[-1,1]|_λ = 2 c_λ/(2λ+1) = 1/2 at λ = 1/2
        let (_, g) = panel_grid(0.5, 1.0);
        assert!((weighted_integral(|_| 1.0, &g) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn gaussian_integral_identity() {
        for &l in &[0.3, 0.5, 1.0, 2.5] {
            let (ctx, g) = panel_grid(l, 9.0);
            let got = weighted_integral(|x| (-x * x).exp(), &g);
            let want = ctx.c_lambda * gamma(l + 0.5);
            assert!((got - want).abs() < 1e-14, "λ={l}");
            assert!((want - 2f64.powf(-l - 0.5)).abs() < 1e-14);
        }
    }

    #[test]
    fn uniform_grid_self_convergence() {
        // doubling the node count must shrink the error by at least 4x
        let ctx = constants(0.5).unwrap();
        let f = |x: f64| (-x * x).exp() * x.cos();
        let oracle = 2.0
            * ctx.c_lambda
            * adaptive_simpson(&|x: f64| f(x) * x.powf(2.0 * ctx.lambda), 0.0, 10.0, 1e-14);
        let mut prev = f64::INFINITY;
        for &h in &[0.2, 0.1, 0.05] {
            let g = SymmetricGrid::uniform(&ctx, h, 10.0, true).unwrap();
            let err = (weighted_integral(f, &g) - oracle).abs();
            assert!(err * 4.0 <= prev, "h={h}: err {err} prev {prev}");
            prev = err;
        }
    }

    #[test]
    fn lp_norm_of_indicator_and_dilation() {
        let (ctx, g) = panel_grid(0.5, 4.0);
        let ind: Vec<f64> = g.nodes().iter().map(|&x| if x.abs() < 1.0 { 1.0 } else { 0.0 }).collect();
        let n = weighted_lp_norm(&ind, 0.7, &g).unwrap();
        assert!((n.powf(0.7) - 0.5).abs() < 1e-14);

        let (_, g) = panel_grid(0.5, 16.0);
        let f = |x: f64| (-x * x).exp();
        let a = 1.7;
        let base: Vec<f64> = g.nodes().iter().map(|&x| f(x)).collect();
        let dil: Vec<f64> = g.nodes().iter().map(|&x| f(x / a)).collect();
        let p = 1.3;
        let lhs = weighted_lp_norm(&dil, p, &g).unwrap().powf(p);
        let rhs = a.powf(2.0 * ctx.lambda + 1.0) * weighted_lp_norm(&base, p, &g).unwrap().powf(p);
        assert!((lhs - rhs).abs() < 1e-12 * rhs);
    }

    #[test]
    fn lp_norm_against_adaptive_oracle() {
        let (ctx, g) = panel_grid(0.5, 10.0);
        let vals: Vec<f64> = g.nodes().iter().map(|&x| (-x * x).exp()).collect();
        let got = weighted_lp_norm(&vals, 0.8, &g).unwrap();
        let inner = adaptive_simpson(&|x: f64| (-0.8 * x * x).exp() * x, 0.0, 10.0, 1e-15);
        let want = (2.0 * ctx.c_lambda * inner).powf(1.0 / 0.8);
        assert!((got - want).abs() < 1e-12 * want);
        assert!(matches!(weighted_lp_norm(&vals, 0.0, &g), Err(Error::Domain(_))));
        assert!(weighted_lp_norm(&vals, -1.0, &g).is_err());
    }

    #[test]
    fn odd_functions_integrate_to_zero() {
        let (_, g) = panel_grid(0.3, 8.0);
        let v = weighted_integral(|x| x * (-x * x).exp() + x.powi(3).sin(), &g);
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn interpolation_is_spectral_on_panels() {
        let (_, g) = panel_grid(0.3, 8.0);
        let f = |x: f64| (-(x - 0.3).powi(2)).exp() * (3.0 * x).cos();
        let vals: Vec<f64> = g.nodes().iter().map(|&x| f(x)).collect();
        let mut worst: f64 = 0.0;
        let mut x = -8.0;
        while x <= 8.0 {
            worst = worst.max((g.interpolate(&vals, x).unwrap() - f(x)).abs());
            x += 0.0137;
        }
        assert!(worst < 1e-12, "worst {worst}");
        assert!(g.interpolate(&vals, 8.5).is_none());
    }

    #[test]
    fn uniform_interpolation_is_exact_for_cubics() {
        let ctx = constants(1.0).unwrap();
        let g = SymmetricGrid::uniform(&ctx, 0.25, 4.0, false).unwrap();
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let vals: Vec<f64> = g.nodes().iter().map(|&x| f(x)).collect();
        for &x in &[-3.9, -1.01, 0.0, 0.13, 2.5, 3.99] {
            assert!((g.interpolate(&vals, x).unwrap() - f(x)).abs() < 1e-12);
        }
        // node 0 carries the measure of its cell, c_λ ∫_{-h/2}^{h/2}|x|^{2λ}
        let mid = g.len() / 2;
        assert_eq!(g.nodes()[mid], 0.0);
        let want = 2.0 * ctx.c_lambda * 0.125f64.powi(3) / 3.0;
        assert!((g.weights()[mid] - want).abs() < 1e-16);
    }
}
