//! H^p_λ functionals of sampled fields and the inequality checks built on
//! the non-tangential maximal function.

use std::sync::Arc;

use num_complex::Complex64;

use super::tent::cell_measures;
use crate::dunkl::{SampledFunction, TransformPlan};
use crate::error::{Error, Result};
use crate::poisson::{nontangential_max, ConeSpec, FieldParity, FieldPart, HalfPlaneField};
use crate::quadrature::weighted_lp_norm;
use crate::special::LambdaContext;

/// Number of thresholds in [`sigma_grid`].
pub const SIGMA_COUNT: usize = 24;

/// sup over sampled heights of ‖F(·, y)‖_{L^p_λ}.
#[derive(Debug, Clone, PartialEq)]
pub struct HpNorm {
    pub value: f64,
    pub argmax_height: f64,
    pub per_height: Vec<f64>,
}

pub fn hp_norm(field: &HalfPlaneField, p: f64) -> Result<HpNorm> {
    let grid = field.x_grid();
    let mut per_height = Vec::with_capacity(field.heights().len());
    for j in 0..field.heights().len() {
        let row: Vec<Complex64> = (0..grid.len()).map(|i| field.value(i, j)).collect();
        per_height.push(weighted_lp_norm(&row, p, grid)?);
    }
    let (k, value) = per_height
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
    Ok(HpNorm {
        value,
        argmax_height: field.heights()[k],
        per_height,
    })
}

/// F = F_e + F_o with u even in F_e and u odd in F_o.
pub fn parity_split(field: &HalfPlaneField) -> (HalfPlaneField, HalfPlaneField) {
    field.parity_split()
}

/// u*_∇ of F_t(x, y) = F(x, y + t) from samples at heights ≥ t.
pub fn shifted_maximal(field: &HalfPlaneField, part: FieldPart, t: f64) -> Result<SampledFunction> {
    let top = *field.heights().last().expect("field has heights");
    let cone = ConeSpec::above(t, top)?;
    Ok(nontangential_max(field, part, &cone))
}

/// `count` thresholds, logarithmically spaced in (0.02 M, 0.98 M].
pub fn sigma_grid(max: f64, count: usize) -> Vec<f64> {
    let ratio: f64 = 49.0;
    (1..=count)
        .map(|k| 0.02 * max * ratio.powf(k as f64 / count as f64))
        .collect()
}

/// One threshold of the distribution inequality
/// |{|v_t| ≥ σ}|_λ ≤ 3|E_σ|_λ + (2/σ²) ∫_0^σ s |E_s|_λ ds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionRow {
    pub sigma: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// rhs − lhs
    pub margin: f64,
}

impl DistributionRow {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.lhs <= self.rhs * (1.0 + rel_tol)
    }
}

fn height_index(field: &HalfPlaneField, t: f64) -> Result<usize> {
    field
        .heights()
        .iter()
        .position(|&y| (y - t).abs() <= 1e-12 * t.max(1.0))
        .ok_or_else(|| Error::range(format!("height t = {t} is not a sampled row")))
}

/// Evaluates the distribution inequality at each σ. The field must carry a
/// row at height t; E_s is the cell-extended superlevel set of u_t*, so
/// |E_s|_λ is a step function of s and the s-integral is summed exactly as
/// Σ_i μ_i min(σ, u*_i)² / 2.
pub fn distribution_check(
    ctx: &LambdaContext,
    field: &HalfPlaneField,
    t: f64,
    sigmas: &[f64],
) -> Result<Vec<DistributionRow>> {
    let j = height_index(field, t)?;
    let u_star = shifted_maximal(field, FieldPart::U, t)?;
    let mu = cell_measures(ctx, field.x_grid());
    let v_t = field.v_row(j);
    let us: Vec<f64> = u_star.values().iter().map(|c| c.re).collect();
    Ok(sigmas
        .iter()
        .map(|&sigma| {
            let mut lhs = 0.0;
            let mut e = 0.0;
            let mut layer = 0.0;
            for i in 0..mu.len() {
                if v_t[i].abs() >= sigma {
                    lhs += mu[i];
                }
                if us[i] > sigma {
                    e += mu[i];
                }
                layer += mu[i] * 0.5 * us[i].min(sigma).powi(2);
            }
            let rhs = if sigma > 0.0 { 3.0 * e + 2.0 / (sigma * sigma) * layer } else { 0.0 };
            DistributionRow {
                sigma,
                lhs,
                rhs,
                margin: rhs - lhs,
            }
        })
        .collect())
}

/// Quantities around sup_y ∫|v|^p dμ_λ ≤ (8−3p)/(2−p) ‖u*_∇‖^p_{L^p_λ}.
#[derive(Debug, Clone, PartialEq)]
pub struct MainBound {
    pub p: f64,
    /// sup_y ∫ |v(x, y)|^p dμ_λ(x)
    pub sup_v: f64,
    /// ‖u*_∇‖^p_{L^p_λ}
    pub u_star_p: f64,
    /// sup_v / u_star_p; `None` unless the field is parity-pure
    pub ratio: Option<f64>,
    /// (8 − 3p)/(2 − p)
    pub constant: f64,
    /// ‖F‖_{H^p_λ} over the sampled heights
    pub hp_norm: f64,
    pub u_star_norm: f64,
    pub f_star_norm: f64,
    /// ‖F‖_{H^p_λ} / ‖u*_∇‖_{L^p_λ}
    pub equivalence_ratio: f64,
}

impl MainBound {
    pub fn holds(&self, rel_tol: f64) -> Option<bool> {
        self.ratio.map(|r| r <= self.constant * (1.0 + rel_tol))
    }
}

/// (8 − 3p)/(2 − p).
pub fn main_bound_constant(p: f64) -> f64 {
    (8.0 - 3.0 * p) / (2.0 - p)
}

fn check_p(ctx: &LambdaContext, p: f64) -> Result<()> {
    if !(p > ctx.p0 && p <= 1.0) {
        return Err(Error::Exponent(format!(
            "p = {p} must lie in (p0, 1] with p0 = {:.6}",
            ctx.p0
        )));
    }
    Ok(())
}

pub fn main_bound_report(ctx: &LambdaContext, field: &HalfPlaneField, p: f64) -> Result<MainBound> {
    check_p(ctx, p)?;
    let grid = field.x_grid();
    let cone = ConeSpec::covering(field);
    let u_star = nontangential_max(field, FieldPart::U, &cone);
    let f_star = nontangential_max(field, FieldPart::Modulus, &cone);
    let u_star_norm = u_star.lp_norm(p)?;
    let f_star_norm = f_star.lp_norm(p)?;
    let mut sup_v = 0.0f64;
    for j in 0..field.heights().len() {
        sup_v = sup_v.max(weighted_lp_norm(field.v_row(j), p, grid)?.powf(p));
    }
    let u_star_p = u_star_norm.powf(p);
    let hp = hp_norm(field, p)?.value;
    let ratio = match field.parity() {
        FieldParity::None => None,
        _ => Some(if u_star_p > 0.0 { sup_v / u_star_p } else { 0.0 }),
    };
    Ok(MainBound {
        p,
        sup_v,
        u_star_p,
        ratio,
        constant: main_bound_constant(p),
        hp_norm: hp,
        u_star_norm,
        f_star_norm,
        equivalence_ratio: if u_star_norm > 0.0 { hp / u_star_norm } else { 0.0 },
    })
}

/// Functionals reported without pass/fail constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub delta: f64,
    /// (y, y^{δ(1+2λ)} ‖F(·, y)‖_{L^l_λ})
    pub decay: Vec<(f64, f64)>,
    /// (∫ y^{kδ(1+2λ)−1} ‖F(·, y)‖^k_{L^l_λ} dy)^{1/k} over the sampled heights
    pub iterated: f64,
    /// ∫_{ξ<0} |𝓕F(·, y_min)| dμ_λ
    pub negative_mass: f64,
    /// ∫_{ξ>0} |𝓕F(·, y_min)| dμ_λ
    pub positive_mass: f64,
    /// ∫_0^∞ |φ(ξ)|^p ξ^{(2λ+1)(p−2)+2λ} dξ with φ = e^{y_min ξ} 𝓕F(·, y_min)
    pub paley: f64,
}

impl Diagnostics {
    pub fn negative_fraction(&self) -> f64 {
        if self.positive_mass > 0.0 {
            self.negative_mass / self.positive_mass
        } else {
            self.negative_mass
        }
    }
}

pub fn hardy_diagnostics(
    ctx: &LambdaContext,
    field: &HalfPlaneField,
    p: f64,
    l: f64,
    k: f64,
    plan: &TransformPlan,
) -> Result<Diagnostics> {
    if !(p > ctx.p0 && p < l && p <= k && k.is_finite()) {
        return Err(Error::Exponent(format!(
            "need p0 < p < l <= inf and p <= k < inf, got p = {p}, l = {l}, k = {k}"
        )));
    }
    let delta = 1.0 / p - if l.is_infinite() { 0.0 } else { 1.0 / l };
    let grid = field.x_grid();
    let s = delta * (1.0 + 2.0 * ctx.lambda);
    let ys = field.heights();
    let mut decay = Vec::with_capacity(ys.len());
    let mut norms = Vec::with_capacity(ys.len());
    for (j, &y) in ys.iter().enumerate() {
        let row: Vec<Complex64> = (0..grid.len()).map(|i| field.value(i, j)).collect();
        let n = weighted_lp_norm(&row, l, grid)?;
        decay.push((y, y.powf(s) * n));
        norms.push(n);
    }
    let g: Vec<f64> = ys.iter().zip(&norms).map(|(&y, &n)| y.powf(k * s - 1.0) * n.powf(k)).collect();
    let iterated = ys
        .windows(2)
        .zip(g.windows(2))
        .map(|(y, v)| 0.5 * (y[1] - y[0]) * (v[0] + v[1]))
        .sum::<f64>()
        .powf(1.0 / k);

    if !Arc::ptr_eq(plan.x_grid(), grid) && plan.x_grid().nodes() != grid.nodes() {
        return Err(Error::domain("transform plan and field use different x-grids"));
    }
    let xi_grid = plan.xi_grid();
    let spec = plan.forward(&field.row(0))?;
    let mut negative_mass = 0.0;
    let mut positive_mass = 0.0;
    let mut paley = 0.0;
    let expo = (2.0 * ctx.lambda + 1.0) * (p - 2.0) + 2.0 * ctx.lambda;
    let y0 = ys[0];
    for ((&xi, v), &w) in spec.xi_nodes().iter().zip(spec.values()).zip(xi_grid.weights()) {
        if xi < 0.0 {
            negative_mass += w * v.norm();
        } else if xi > 0.0 {
            positive_mass += w * v.norm();
            // undo the grid's c_λ|ξ|^{2λ} weight
            let dxi = w / (ctx.c_lambda * xi.powf(2.0 * ctx.lambda));
            paley += dxi * ((y0 * xi).exp() * v.norm()).powf(p) * xi.powf(expo);
        }
    }
    Ok(Diagnostics {
        delta,
        decay,
        iterated,
        negative_mass,
        positive_mass,
        paley,
    })
}
