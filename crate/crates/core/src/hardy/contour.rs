//! Line integrals of F²|x|^{2λ} dz along polylines and the matching area
//! integrals from Green's formula.

use num_complex::Complex64;

use super::density::ParityTarget;
use super::synth::AnalyticField;
use super::tent::TentContour;
use crate::error::{Error, Result};
use crate::poisson::FieldEval;
use crate::quadrature::{gauss_legendre, jacobi_rule, JacobiRule};
use crate::special::LambdaContext;

/// Longest parameter panel on a path segment.
pub const CONTOUR_PANEL: f64 = 0.25;

/// |∫_{Γ_N} F_t² |x|^{2λ} dz| for N = N0, 2N0, …, 2^doublings N0.
///
/// Γ is drawn at base t in F's coordinates, which is F_t's base line. Past
/// the tents Γ runs along y = t, so each doubling only adds the two flat
/// pieces N_k < |x| < N_{k+1}.
pub fn gamma_sequence(
    ctx: &LambdaContext,
    field: &AnalyticField,
    tents: &TentContour,
    n0: f64,
    doublings: usize,
) -> Result<GammaSequence> {
    let reach = tents.intervals.iter().map(|&(a, b)| a.abs().max(b.abs())).fold(0.0, f64::max);
    if !(n0 >= reach && n0 > 0.0) {
        return Err(Error::domain(format!("N0 = {n0} does not cover the tents (reach {reach})")));
    }
    // the tents end at `reach`; the flat run out to N0 goes with the doublings
    let n_core = if reach > 0.0 { reach } else { n0.min(1.0) };
    let core = contour_integral_f2(ctx, field, tents.with_truncation(n_core).gamma())?;
    let rule = gauss_legendre(24);
    let two_l = 2.0 * ctx.lambda;
    // ∫ F_t² |x|^{2λ} dx over a < |x| < b and the matching ∫ |F_t|² |x|^{2λ} dx;
    // both pieces run left to right, so dz = dx
    let flat = |a: f64, b: f64| -> (Complex64, f64) {
        if b <= a {
            return (Complex64::new(0.0, 0.0), 0.0);
        }
        let panels = (b - a).ceil() as usize;
        let h = (b - a) / panels as f64;
        let mut xs = Vec::with_capacity(panels * rule.len());
        let mut ws = Vec::with_capacity(panels * rule.len());
        for k in 0..panels {
            let lo = a + k as f64 * h;
            for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
                let x = lo + 0.5 * h * (s + 1.0);
                xs.push(x);
                ws.push(0.5 * h * w * x.powf(two_l));
            }
        }
        field
            .line_pairs(&xs, tents.t)
            .into_iter()
            .zip(&ws)
            .fold((Complex64::new(0.0, 0.0), 0.0), |(v, m), ((p, q), w)| {
                (v + w * (p * p + q * q), m + w * (p.norm_sqr() + q.norm_sqr()))
            })
    };
    let (v0, mut mass) = flat(n_core, n0);
    let mut acc = core.value + v0;
    mass += core.magnitude;
    let mut out = vec![acc.norm()];
    let mut n = n0;
    for _ in 0..doublings {
        let (v, m) = flat(n, 2.0 * n);
        acc += v;
        mass += m;
        out.push(acc.norm());
        n *= 2.0;
    }
    // a sum of terms whose moduli add up to `mass` carries rounding of order ε·mass
    let floor = core.segment_errors.iter().sum::<f64>() + 16.0 * f64::EPSILON * mass;
    Ok(GammaSequence { values: out, floor })
}

/// |∮_{Γ_N} F_t²| for N = N0, 2N0, 4N0, ...
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSequence {
    pub values: Vec<f64>,
    /// resolution of the values: the tent contour's quadrature error estimate
    /// plus rounding on ∫ |F_t|² |x|^{2λ} |dz| over the longest Γ_N
    pub floor: f64,
}

impl GammaSequence {
    /// Largest |I(2N)| / |I(N)| over the doublings, with values below the
    /// floor read as the floor. Below 1 means the sequence decreases until it
    /// is no longer resolved and stays unresolved after that.
    pub fn worst_ratio(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] / w[0].max(self.floor))
            .fold(0.0, f64::max)
    }
}

/// Axis-parallel rectangle [x0, x1] × [y0, y1] in the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && 0.0 < y0 && y0 < y1) {
            return Err(Error::domain("rectangle needs x0 < x1 and 0 < y0 < y1"));
        }
        Ok(Rect { x0, x1, y0, y1 })
    }

    /// [−a, a] × [y0, y1].
    pub fn symmetric(a: f64, y0: f64, y1: f64) -> Result<Self> {
        Self::new(-a, a, y0, y1)
    }

    /// Counterclockwise closed boundary.
    pub fn boundary(&self) -> Vec<(f64, f64)> {
        vec![
            (self.x0, self.y0),
            (self.x1, self.y0),
            (self.x1, self.y1),
            (self.x0, self.y1),
            (self.x0, self.y0),
        ]
    }
}

/// Result of [`contour_integral_f2`].
#[derive(Debug, Clone, PartialEq)]
pub struct ContourIntegral {
    pub value: Complex64,
    /// ∫ |F|² |x|^{2λ} |dz| along the same path
    pub magnitude: f64,
    /// |high − low order| per segment
    pub segment_errors: Vec<f64>,
}

impl ContourIntegral {
    pub fn relative(&self) -> f64 {
        if self.magnitude == 0.0 {
            self.value.norm()
        } else {
            self.value.norm() / self.magnitude
        }
    }
}

struct Rules {
    lo: JacobiRule,
    hi: JacobiRule,
    lo_edge: JacobiRule,
    hi_edge: JacobiRule,
}

impl Rules {
    fn new(lambda: f64) -> Result<Self> {
        Ok(Rules {
            lo: gauss_legendre(16),
            hi: gauss_legendre(24),
            lo_edge: jacobi_rule(0.0, 2.0 * lambda, 16)?,
            hi_edge: jacobi_rule(0.0, 2.0 * lambda, 24)?,
        })
    }
}

/// Nodes on [0, 1] and weights for one panel; `edge` puts the |x|^{2λ}
/// zero at s = 0 into a Jacobi weight s^{2λ}.
fn panel_rule(rule: &JacobiRule, edge: bool, two_l: f64) -> Vec<(f64, f64)> {
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&r, &w)| {
            let s = 0.5 * (1.0 + r);
            // (1 + r)^{2λ} weight mapped to s^{2λ}
            let scale = if edge { 0.5f64.powf(two_l + 1.0) } else { 0.5 };
            (s, w * scale)
        })
        .collect()
}

/// Splits a segment into parameter panels [s0, s1] ⊂ [0, 1], breaking at a
/// crossing of x = 0; returns (s0, s1, zero_at_start, zero_at_end).
fn segment_panels(p: (f64, f64), q: (f64, f64)) -> Vec<(f64, f64, bool, bool)> {
    let len = ((q.0 - p.0).powi(2) + (q.1 - p.1).powi(2)).sqrt();
    // (cut, x vanishes there)
    let mut cuts = vec![(0.0, p.0 == 0.0), (1.0, q.0 == 0.0)];
    if p.0 * q.0 < 0.0 {
        cuts.insert(1, (p.0 / (p.0 - q.0), true));
    }
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let ((a, za), (b, zb)) = (w[0], w[1]);
        let count = ((b - a) * len / CONTOUR_PANEL).ceil().max(1.0) as usize;
        for k in 0..count {
            let s0 = a + (b - a) * k as f64 / count as f64;
            let s1 = if k + 1 == count { b } else { a + (b - a) * (k + 1) as f64 / count as f64 };
            out.push((s0, s1, za && k == 0, zb && k + 1 == count));
        }
    }
    out
}

/// ∮ F² |x|^{2λ} (dx + i dy) along the polyline `path`, with composite
/// Gauss rules of two orders on every segment.
pub fn contour_integral_f2(ctx: &LambdaContext, field: &dyn FieldEval, path: &[(f64, f64)]) -> Result<ContourIntegral> {
    if path.len() < 2 {
        return Err(Error::domain("a path needs at least two vertices"));
    }
    let two_l = 2.0 * ctx.lambda;
    let rules = Rules::new(ctx.lambda)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    let mut segment_errors = Vec::with_capacity(path.len() - 1);
    for w in path.windows(2) {
        let (p, q) = (w[0], w[1]);
        let dz = Complex64::new(q.0 - p.0, q.1 - p.1);
        // |x|^{2λ} vanishes on a vertical segment along x = 0
        if dz.norm() == 0.0 || (p.0 == 0.0 && q.0 == 0.0) {
            segment_errors.push(0.0);
            continue;
        }
        let mut seg = [Complex64::new(0.0, 0.0); 2];
        let mut seg_mag = 0.0;
        for (s0, s1, zs, ze) in segment_panels(p, q) {
            for (order, (plain, edge)) in [(&rules.lo, &rules.lo_edge), (&rules.hi, &rules.hi_edge)].into_iter().enumerate() {
                let (rule, at_zero, flip) = match (zs, ze) {
                    (true, _) => (edge, true, false),
                    (_, true) => (edge, true, true),
                    _ => (plain, false, false),
                };
                let pts: Vec<(f64, f64, f64)> = panel_rule(rule, at_zero, two_l)
                    .into_iter()
                    .map(|(s, wt)| {
                        let s = if flip { 1.0 - s } else { s };
                        let sp = s0 + (s1 - s0) * s;
                        (p.0 + sp * (q.0 - p.0), p.1 + sp * (q.1 - p.1), wt)
                    })
                    .collect();
                let vals = eval_points(field, &pts)?;
                let span = s1 - s0;
                for (&(x, _, wt), f) in pts.iter().zip(&vals) {
                    let weight = if at_zero {
                        // |x|^{2λ} = (|dx| span)^{2λ} s^{2λ} near the zero end
                        ((q.0 - p.0).abs() * span).powf(two_l)
                    } else {
                        x.abs().powf(two_l)
                    };
                    seg[order] += wt * span * weight * f * f * dz;
                    if order == 1 {
                        seg_mag += wt * span * weight * f.norm_sqr() * dz.norm();
                    }
                }
            }
        }
        value += seg[1];
        magnitude += seg_mag;
        segment_errors.push((seg[1] - seg[0]).norm());
    }
    Ok(ContourIntegral {
        value,
        magnitude,
        segment_errors,
    })
}

/// Evaluates on points sharing a y (or an x) through the batched path.
fn eval_points(field: &dyn FieldEval, pts: &[(f64, f64, f64)]) -> Result<Vec<Complex64>> {
    let same_y = pts.windows(2).all(|w| w[0].1 == w[1].1);
    let same_x = pts.windows(2).all(|w| w[0].0 == w[1].0);
    if same_y {
        let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        Ok(field.eval_grid(&xs, &[pts[0].1])?.remove(0))
    } else if same_x {
        let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
        Ok(field.eval_grid(&[pts[0].0], &ys)?.into_iter().map(|r| r[0]).collect())
    } else {
        pts.iter().map(|p| field.eval(p.0, p.1)).collect()
    }
}

/// Tensor Gauss rule over a rectangle: panels of at most [`CONTOUR_PANEL`]
/// in each direction; an x-panel starting at 0 uses Jacobi(0, `x_exp`).
fn area_integral(
    field: &dyn FieldEval,
    rect: &Rect,
    x_exp: f64,
    integrand: impl Fn(f64, Complex64) -> f64,
) -> Result<f64> {
    let gl = gauss_legendre(24);
    let jac = jacobi_rule(0.0, x_exp, 24)?;
    let mut xs = Vec::new();
    let mut wx = Vec::new();
    let nxp = ((rect.x1 - rect.x0) / CONTOUR_PANEL).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = {
        let mut b: Vec<f64> = (0..=nxp).map(|k| rect.x0 + (rect.x1 - rect.x0) * k as f64 / nxp as f64).collect();
        if rect.x0 < 0.0 && rect.x1 > 0.0 {
            b.push(0.0);
            b.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
            b.dedup();
        }
        b
    };
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = 0.5 * (b - a);
        if a == 0.0 || b == 0.0 {
            // weight |x|^{x_exp} folded into the rule; integrand gets it divided out
            let sign = if b == 0.0 { -1.0 } else { 1.0 };
            for (&r, &wt) in jac.nodes.iter().zip(&jac.weights) {
                let x = sign * h * (1.0 + r);
                xs.push(x);
                wx.push(wt * h.powf(x_exp + 1.0) / x.abs().powf(x_exp));
            }
        } else {
            for (&r, &wt) in gl.nodes.iter().zip(&gl.weights) {
                xs.push(a + h * (1.0 + r));
                wx.push(wt * h);
            }
        }
    }
    let nyp = ((rect.y1 - rect.y0) / CONTOUR_PANEL).ceil().max(1.0) as usize;
    let mut ys = Vec::new();
    let mut wy = Vec::new();
    for k in 0..nyp {
        let a = rect.y0 + (rect.y1 - rect.y0) * k as f64 / nyp as f64;
        let h = 0.5 * (rect.y1 - rect.y0) / nyp as f64;
        for (&r, &wt) in gl.nodes.iter().zip(&gl.weights) {
            ys.push(a + h * (1.0 + r));
            wy.push(wt * h);
        }
    }
    let vals = field.eval_grid(&xs, &ys)?;
    let mut total = 0.0;
    for (row, &wyj) in vals.iter().zip(&wy) {
        for ((f, &x), &wxi) in row.iter().zip(&xs).zip(&wx) {
            total += wyj * wxi * integrand(x, *f);
        }
    }
    Ok(total)
}

/// The two sides of the symmetric-domain identity for F² on a rectangle:
/// ∮ F²|x|^{2λ}dz and i∬ (4λ/x) v² |x|^{2λ} (u even) or −i∬ (4λ/x) u² |x|^{2λ}
/// (u odd), plus the scale ∬ (4λ/|x|)|F|²|x|^{2λ}.
#[derive(Debug, Clone, PartialEq)]
pub struct StokesCheck {
    pub contour: ContourIntegral,
    pub area: Complex64,
    pub scale: f64,
}

impl StokesCheck {
    /// |contour − area| relative to the larger of the two scales.
    pub fn relative(&self) -> f64 {
        (self.contour.value - self.area).norm() / self.scale.max(self.contour.magnitude).max(1e-300)
    }
}

pub fn stokes_symmetric(ctx: &LambdaContext, field: &dyn FieldEval, parity: ParityTarget, rect: &Rect) -> Result<StokesCheck> {
    let l = ctx.lambda;
    let contour = contour_integral_f2(ctx, field, &rect.boundary())?;
    let (sign, pick): (f64, fn(Complex64) -> f64) = match parity {
        ParityTarget::UEven => (1.0, |f| f.im * f.im),
        ParityTarget::UOdd => (-1.0, |f| f.re * f.re),
    };
    let x_exp = 2.0 * l - 1.0;
    let area = area_integral(field, rect, x_exp, |x, f| 4.0 * l * x.signum() * x.abs().powf(x_exp) * pick(f))?;
    let scale = area_integral(field, rect, x_exp, |x, f| 4.0 * l * x.abs().powf(x_exp) * f.norm_sqr())?;
    Ok(StokesCheck {
        contour,
        area: Complex64::new(0.0, sign * area),
        scale,
    })
}

/// Half-domain form on a rectangle with x0 ≥ 0:
/// ∮_{∂Ω⁺} F²|x|^{2λ}dz = ±i ∬_{Ω⁺} (2λ/x)|F|²|x|^{2λ}, + for u even.
pub fn stokes_half_domain(ctx: &LambdaContext, field: &dyn FieldEval, parity: ParityTarget, rect: &Rect) -> Result<StokesCheck> {
    if rect.x0 < 0.0 {
        return Err(Error::domain("half-domain rectangles need x0 >= 0"));
    }
    let l = ctx.lambda;
    let contour = contour_integral_f2(ctx, field, &rect.boundary())?;
    let sign = match parity {
        ParityTarget::UEven => 1.0,
        ParityTarget::UOdd => -1.0,
    };
    let x_exp = 2.0 * l - 1.0;
    let area = area_integral(field, rect, x_exp, |x, f| 2.0 * l * x.abs().powf(x_exp) * f.norm_sqr())?;
    Ok(StokesCheck {
        contour,
        area: Complex64::new(0.0, sign * area),
        scale: area,
    })
}
