//! Superlevel sets of a sampled maximal function, the tents over their
//! component intervals, and the sawtooth contour Γ_N.

use crate::dunkl::SampledFunction;
use crate::error::{Error, Result};
use crate::quadrature::SymmetricGrid;
use crate::special::LambdaContext;

/// μ_λ([a, b]) = c_λ ∫_a^b |x|^{2λ} dx in closed form.
pub fn interval_measure(ctx: &LambdaContext, a: f64, b: f64) -> f64 {
    let k = 2.0 * ctx.lambda + 1.0;
    let prim = |x: f64| x.signum() * x.abs().powf(k) / k;
    ctx.c_lambda * (prim(b) - prim(a))
}

/// Cell edges of the nodes: midpoints, with the end cells mirrored outward.
pub fn cell_edges(grid: &SymmetricGrid) -> Vec<f64> {
    let x = grid.nodes();
    let n = x.len();
    let mut e = Vec::with_capacity(n + 1);
    e.push(x[0] - 0.5 * (x[1] - x[0]));
    for i in 1..n {
        e.push(0.5 * (x[i - 1] + x[i]));
    }
    e.push(x[n - 1] + 0.5 * (x[n - 1] - x[n - 2]));
    e
}

/// μ_λ of each node's cell.
pub fn cell_measures(ctx: &LambdaContext, grid: &SymmetricGrid) -> Vec<f64> {
    cell_edges(grid).windows(2).map(|w| interval_measure(ctx, w[0], w[1])).collect()
}

/// Maximal runs of nodes where `pred` holds, as closed cell intervals.
pub fn runs(grid: &SymmetricGrid, pred: impl Fn(usize) -> bool) -> Vec<(f64, f64)> {
    let edges = cell_edges(grid);
    let mut out = Vec::new();
    let mut start = None;
    for i in 0..grid.len() {
        match (pred(i), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((edges[s], edges[i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((edges[s], edges[grid.len()]));
    }
    out
}

/// Tents of unit slope over the components of E_σ = {u* > σ}, erected on
/// the line y = t, and the contour Γ_N running over them from x = −N to N.
#[derive(Debug, Clone, PartialEq)]
pub struct TentContour {
    pub t: f64,
    pub sigma: f64,
    /// (x_j − r_j, x_j + r_j)
    pub intervals: Vec<(f64, f64)>,
    pub n_trunc: f64,
    pub n_cap: f64,
    /// |E_σ|_λ
    pub measure: f64,
    gamma: Vec<(f64, f64)>,
}

impl TentContour {
    /// Vertices of Γ_N, left to right.
    pub fn gamma(&self) -> &[(f64, f64)] {
        &self.gamma
    }

    /// Height of Γ above x: t + (r_j − |x − x_j|) inside a tent, capped at N2.
    pub fn height(&self, x: f64) -> f64 {
        let mut y = self.t;
        for &(a, b) in &self.intervals {
            if x > a && x < b {
                let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
                y = self.t + (r - (x - c).abs());
            }
        }
        y.min(self.n_cap)
    }

    /// Points on the slanted sides ∂T(I_j) ∖ I_j, `per_side` per side,
    /// including the base endpoints and excluding capped parts.
    pub fn side_points(&self, per_side: usize) -> Vec<(f64, f64)> {
        let mut pts = Vec::new();
        for &(a, b) in &self.intervals {
            let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
            for k in 0..per_side {
                let d = r * k as f64 / per_side as f64;
                let y = self.t + d;
                if y <= self.n_cap {
                    pts.push((a + d, y));
                    pts.push((b - d, y));
                }
            }
            if self.t + r <= self.n_cap {
                pts.push((c, self.t + r));
            }
        }
        pts
    }

    /// Same contour truncated at a different N.
    pub fn with_truncation(&self, n_trunc: f64) -> TentContour {
        let mut out = self.clone();
        out.n_trunc = n_trunc;
        out.gamma = build_gamma(&out);
        out
    }
}

fn build_gamma(c: &TentContour) -> Vec<(f64, f64)> {
    let n = c.n_trunc;
    let mut xs = vec![-n, n];
    let rise = c.n_cap - c.t;
    for &(a, b) in &c.intervals {
        let (mid, r) = (0.5 * (a + b), 0.5 * (b - a));
        xs.extend([a, mid, b]);
        if r > rise {
            xs.extend([mid - (r - rise), mid + (r - rise)]);
        }
    }
    xs.retain(|&x| x >= -n && x <= n);
    xs.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    xs.dedup();
    xs.into_iter().map(|x| (x, c.height(x))).collect()
}

/// Builds the tents for σ from u* sampled on the line y = t.
pub fn tent_decomposition(
    ctx: &LambdaContext,
    u_star: &SampledFunction,
    sigma: f64,
    t: f64,
    n_trunc: f64,
    n_cap: f64,
) -> Result<TentContour> {
    if !(sigma > 0.0) {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    if !(t > 0.0 && n_trunc > 0.0 && n_cap > t) {
        return Err(Error::domain("tents need t > 0, N > 0 and N2 > t"));
    }
    let grid = u_star.grid();
    let vals = u_star.values();
    let intervals = runs(grid, |i| vals[i].re > sigma);
    let measure = intervals.iter().map(|&(a, b)| interval_measure(ctx, a, b)).sum();
    let mut c = TentContour {
        t,
        sigma,
        intervals,
        n_trunc,
        n_cap,
        measure,
        gamma: Vec::new(),
    };
    c.gamma = build_gamma(&c);
    Ok(c)
}
