//! Verification suites: each returns one record per check.

use std::sync::Arc;

use num_complex::Complex64;

use super::config::RunConfig;
use super::frozen;
use super::report::{Record, Report};
use crate::dunkl::{dunkl_D, DerivativeScheme, SampledFunction, TransformPlan};
use crate::error::{Error, Result};
use crate::hardy::{
    contour_integral_f2, distribution_check, gamma_sequence, tail_truncation, main_bound_report, shifted_maximal, sigma_grid,
    stokes_half_domain, stokes_symmetric, tent_decomposition, AnalyticField, Rect, SpectralDensity,
};
use crate::poisson::{
    extend, kernel_spectral, poisson_kernel, poisson_kernel_transform, poisson_field, ExtensionMethod, FieldPart,
    KernelKind, field_residuals,
};
use crate::quadrature::{GridSpec, SymmetricGrid};
use crate::special::{constants, dunkl_kernel, dunkl_kernel_real, KernelMethod, LambdaContext};
use crate::translation::{kernel_w, translate_point, TranslationMethod};

/// Doublings of N in the Γ_N decay check.
pub const GAMMA_DOUBLINGS: usize = 3;
/// Γ_N starts where the tail of g_t drops below this fraction.
pub const GAMMA_TAIL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Kernel,
    Transform,
    Translate,
    Poisson,
    Contour,
    Hardy,
    All,
}

/// Runs `suite` and collects its records in check-id order.
pub fn run_suite(cfg: &RunConfig, suite: Suite) -> Result<Report> {
    cfg.validate()?;
    let ctx = constants(cfg.lambda)?;
    let mut records = Vec::new();
    let wants = |s: Suite| suite == s || suite == Suite::All;
    if wants(Suite::Kernel) {
        records.extend(kernel_suite(cfg, &ctx)?);
    }
    if wants(Suite::Transform) {
        records.extend(transform_suite(cfg, &ctx)?);
    }
    if wants(Suite::Translate) {
        records.extend(translate_suite(cfg, &ctx)?);
    }
    if wants(Suite::Poisson) {
        records.extend(poisson_suite(cfg, &ctx)?);
    }
    if wants(Suite::Contour) || wants(Suite::Hardy) {
        let fixtures = load_fixtures(cfg)?;
        if wants(Suite::Contour) {
            records.extend(contour_suite(cfg, &ctx, &fixtures)?);
        }
        if wants(Suite::Hardy) {
            records.extend(hardy_suite(cfg, &ctx, &fixtures)?);
        }
    }
    Ok(Report::new(records))
}

fn load_fixtures(cfg: &RunConfig) -> Result<Vec<(String, SpectralDensity)>> {
    cfg.fixtures.iter().map(|f| Ok((f.name(), f.load()?))).collect()
}

fn panel_grid(ctx: &LambdaContext, x_max: f64) -> Result<Arc<SymmetricGrid>> {
    Ok(Arc::new(SymmetricGrid::panels(
        ctx,
        &GridSpec {
            x_max,
            ..GridSpec::default()
        },
    )?))
}

fn kernel_suite(cfg: &RunConfig, ctx: &LambdaContext) -> Result<Vec<Record>> {
    let l = cfg.lambda;
    let tol = &cfg.tolerances;
    let mut worst = 0.0f64;
    for &r in &[0.1, 1.0, 4.0, 9.0, 15.0, 20.0] {
        for &theta in &[0.0, 0.4, 1.2, 2.0, 3.0] {
            let z = Complex64::from_polar(r, theta);
            let a = dunkl_kernel(ctx, z, KernelMethod::Series)?;
            let b = dunkl_kernel(ctx, z, KernelMethod::Laplace)?;
            worst = worst.max((a - b).norm() / a.norm());
        }
    }
    let mut out = vec![Record::at_most("kernel.series_vs_laplace", "kernel series vs Laplace form", l, worst, tol.kernel)];

    // D_x E(ixξ) = iξ E(ixξ) away from the one-sided ends
    let xi = 1.5;
    let residual = |h: f64, scheme: DerivativeScheme| -> Result<f64> {
        let g = Arc::new(SymmetricGrid::uniform(ctx, h, 4.0, true)?);
        let f = SampledFunction::from_fn(g.clone(), |x| dunkl_kernel_real(ctx, x * xi));
        let d = dunkl_D(ctx, &f, scheme)?;
        let bw = scheme.boundary_width();
        Ok((bw..g.len() - bw)
            .map(|i| (d.values()[i] - Complex64::new(0.0, xi) * f.values()[i]).norm())
            .fold(0.0, f64::max))
    };
    let coarse = residual(cfg.x_step * 2.0, DerivativeScheme::Central)?;
    let fine = residual(cfg.x_step * 2.0 * cfg.refine_ratio, DerivativeScheme::Central)?;
    let want = 3.5 * (0.5 / cfg.refine_ratio).powi(2);
    out.push(Record::at_least("kernel.eigen_order", "kernel eigenfunction relation", l, coarse / fine, want));
    let rich = residual(cfg.x_step, DerivativeScheme::Richardson)?;
    out.push(Record::at_most("kernel.eigen_richardson", "kernel eigenfunction relation", l, rich, tol.transform));
    Ok(out)
}

fn transform_suite(cfg: &RunConfig, ctx: &LambdaContext) -> Result<Vec<Record>> {
    let l = cfg.lambda;
    let tol = cfg.tolerances.transform;
    let x_grid = panel_grid(ctx, 10.0)?;
    let xi_grid = panel_grid(ctx, cfg.xi_max.max(10.0))?;
    let plan = TransformPlan::new(ctx, x_grid.clone(), xi_grid);
    let f = SampledFunction::from_real_fn(x_grid, |x| (-x * x).exp() * (1.0 + x - 0.3 * x * x));
    let spec = plan.forward(&f)?;
    let back = plan.inverse(&spec)?;
    let diff = back.combine(Complex64::new(1.0, 0.0), &f, Complex64::new(-1.0, 0.0))?;
    let norm = f.lp_norm(2.0)?;
    let mut out = vec![
        Record::at_most("transform.roundtrip", "transform inversion", l, diff.lp_norm(2.0)? / norm, tol),
        Record::at_most(
            "transform.plancherel",
            "Plancherel identity",
            l,
            (spec.lp_norm(2.0)? - norm).abs() / norm,
            tol,
        ),
    ];
    for (id, kind) in [("transform.poisson_kernel", KernelKind::Poisson), ("transform.conjugate_kernel", KernelKind::Conjugate)] {
        let mut worst = 0.0f64;
        for &y in &[0.1, 1.0] {
            for &xi in &[0.0, 0.3, -1.0, 2.5, -6.0, 10.0] {
                let got = poisson_kernel_transform(ctx, y, xi, kind)?;
                let damp = (-y * f64::abs(xi)).exp();
                let want = match kind {
                    KernelKind::Poisson => Complex64::new(damp, 0.0),
                    KernelKind::Conjugate => Complex64::new(0.0, -crate_sign(xi) * damp),
                };
                worst = worst.max((got - want).norm());
            }
        }
        out.push(Record::at_most(id, "Poisson kernel transforms", l, worst, tol));
    }
    Ok(out)
}

fn crate_sign(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum()
    }
}

fn translate_suite(cfg: &RunConfig, ctx: &LambdaContext) -> Result<Vec<Record>> {
    let l = cfg.lambda;
    let pts = [-1.5, -0.4, 0.7, 2.0];
    let one = |_: f64| Ok(Complex64::new(1.0, 0.0));
    let ident = |z: f64| Ok(Complex64::new(z, 0.0));
    let smooth = |z: f64| Ok(Complex64::new((-z * z).exp() * (1.0 + z), 0.0));
    let (mut c, mut lin, mut agree) = (0.0f64, 0.0f64, 0.0f64);
    for &x in &pts {
        for &t in &pts {
            c = c.max((translate_point(ctx, &one, x, t, TranslationMethod::Theta)? - 1.0).norm());
            lin = lin.max((translate_point(ctx, &ident, x, t, TranslationMethod::Theta)? - (x + t)).norm());
            let a = translate_point(ctx, &smooth, x, t, TranslationMethod::Theta)?;
            let b = translate_point(ctx, &smooth, x, t, TranslationMethod::Kernel)?;
            agree = agree.max((a - b).norm());
        }
    }
    let w = kernel_w(ctx, 1.0, 1.0, -1.0)?.value;
    Ok(vec![
        Record::at_most("translate.constant", "translation of 1", l, c, 1e-10),
        Record::at_most("translate.linear", "translation of x", l, lin, 1e-10),
        Record::at_most("translate.theta_vs_kernel", "translation kernel", l, agree, cfg.tolerances.translate),
        Record::at_most("translate.negative_witness", "W_lambda not positive", l, w, 0.0),
    ])
}

fn poisson_suite(cfg: &RunConfig, ctx: &LambdaContext) -> Result<Vec<Record>> {
    let l = cfg.lambda;
    let tol = cfg.tolerances.poisson;
    let mut worst = 0.0f64;
    for &(x, y, t) in &[(0.5, 0.5, 1.0), (-1.0, 1.0, 0.3), (1.5, 0.3, -0.7)] {
        for kind in [KernelKind::Poisson, KernelKind::Conjugate] {
            let theta = match kind {
                KernelKind::Poisson => poisson_kernel(ctx, x, y, t)?,
                KernelKind::Conjugate => crate::poisson::conjugate_kernel(ctx, x, y, t)?,
            };
            worst = worst.max((theta - kernel_spectral(ctx, x, y, t, kind)?).abs());
        }
    }
    let mut out = vec![Record::at_most("poisson.kernel_vs_spectral", "Poisson kernel forms", l, worst, tol)];

    // the extended slice decays like y/x³, so the window must be wide
    let g = panel_grid(ctx, 20.0)?;
    let f = SampledFunction::from_real_fn(g.clone(), |x| (-(x - 0.5).powi(2)).exp());
    let (y0, y) = (0.4, 0.6);
    let first = extend(ctx, &f, g.clone(), &[y0], ExtensionMethod::Spectral, KernelKind::Poisson, None)?;
    let out_grid = Arc::new(SymmetricGrid::uniform(ctx, 0.5, 2.0, true)?);
    let twice = extend(ctx, &first.slices[0], out_grid.clone(), &[y], ExtensionMethod::Kernel, KernelKind::Poisson, None)?;
    let direct = extend(ctx, &f, out_grid, &[y0 + y], ExtensionMethod::Spectral, KernelKind::Poisson, None)?;
    let semigroup = twice.slices[0]
        .values()
        .iter()
        .zip(direct.slices[0].values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    out.push(Record::at_most("poisson.semigroup", "Poisson semigroup", l, semigroup, tol));

    let ys = [1.0, 0.5, 0.25, 0.125];
    let slices = extend(ctx, &f, g.clone(), &ys, ExtensionMethod::Spectral, KernelKind::Poisson, None)?;
    let errs: Vec<f64> = slices
        .slices
        .iter()
        .map(|s| s.combine(Complex64::new(1.0, 0.0), &f, Complex64::new(-1.0, 0.0))?.lp_norm(1.0))
        .collect::<Result<_>>()?;
    let worst_ratio = errs.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    out.push(Record::at_most("poisson.boundary_l1", "boundary convergence", l, worst_ratio, 1.0));

    let mut res = Vec::new();
    for h in [cfg.x_step, cfg.x_step * cfg.refine_ratio] {
        let grid = Arc::new(SymmetricGrid::uniform(ctx, h, 2.0, true)?);
        let heights: Vec<f64> = (0..5).map(|k| 0.5 + h * k as f64).collect();
        let field = poisson_field(ctx, &f, grid, &heights, ExtensionMethod::Spectral)?;
        res.push(field_residuals(ctx, &field, DerivativeScheme::Central)?);
    }
    let want = 3.5 * (0.5 / cfg.refine_ratio).powi(2);
    let ratio = (res[0].cr() / res[1].cr()).min(res[0].harmonic / res[1].harmonic);
    out.push(Record::at_least("poisson.cr_order", "generalized Cauchy-Riemann system", l, ratio, want));
    Ok(out)
}

fn contour_suite(cfg: &RunConfig, ctx: &LambdaContext, fixtures: &[(String, SpectralDensity)]) -> Result<Vec<Record>> {
    let l = cfg.lambda;
    let tol = cfg.tolerances.contour;
    let mut out = Vec::new();
    for (name, phi) in fixtures {
        let f = AnalyticField::new(ctx, phi, cfg.x_max)?;
        let rect = Rect::symmetric(2.0, cfg.t, 1.5)?;
        let c = contour_integral_f2(ctx, &f, &rect.boundary())?;
        out.push(Record::at_most(format!("contour.rectangle.{name}"), "Cauchy theorem for lambda-analytic F", l, c.relative(), tol));
        let s = stokes_symmetric(ctx, &f, phi.parity(), &rect)?;
        out.push(Record::at_most(format!("contour.stokes_symmetric.{name}"), "weighted Stokes identity, symmetric domain", l, s.relative(), tol));
        let half = Rect::new(0.0, 2.0, cfg.t, 1.5)?;
        let s = stokes_half_domain(ctx, &f, phi.parity(), &half)?;
        out.push(Record::at_most(format!("contour.stokes_half.{name}"), "weighted Stokes identity, half domain", l, s.relative(), tol));
    }
    Ok(out)
}

fn hardy_suite(cfg: &RunConfig, ctx: &LambdaContext, fixtures: &[(String, SpectralDensity)]) -> Result<Vec<Record>> {
    let l = cfg.lambda;
    let tol = cfg.tolerances.hardy;
    let grid = Arc::new(SymmetricGrid::uniform(ctx, cfg.x_step, cfg.x_max, true)?);
    let heights = cfg.heights();
    let mut out = Vec::new();
    for (name, phi) in fixtures {
        let af = AnalyticField::new(ctx, phi, cfg.x_max)?;
        let field = af.sample(grid.clone(), &heights)?;

        let u_star = shifted_maximal(&field, FieldPart::U, cfg.t)?;
        let m = u_star.values().iter().map(|c| c.re).fold(0.0, f64::max);
        let rows = distribution_check(ctx, &field, cfg.t, &sigma_grid(m, cfg.sigma_count))?;
        let excess = rows
            .iter()
            .map(|r| if r.rhs > 0.0 { r.lhs / r.rhs - 1.0 } else if r.lhs > 0.0 { f64::INFINITY } else { -1.0 })
            .fold(f64::NEG_INFINITY, f64::max);
        out.push(Record::at_most(format!("hardy.distribution.{name}"), "distribution inequality", l, excess, 1e-3));

        let tents = tent_decomposition(ctx, &u_star, 0.5 * m, cfg.t, cfg.x_max, cfg.y_max)?;
        let reach = tents.intervals.iter().map(|&(a, b)| a.abs().max(b.abs())).fold(0.0, f64::max);
        let n0 = tail_truncation(&af, cfg.t, GAMMA_TAIL)?.max(reach);
        let seq = gamma_sequence(ctx, &af, &tents, n0, GAMMA_DOUBLINGS)?;
        out.push(Record::at_most(format!("hardy.gamma_decay.{name}"), "contour decay in N", l, seq.worst_ratio(), 1.0));

        for &p in &cfg.p_list {
            let mb = main_bound_report(ctx, &field, p)?;
            let ratio = mb
                .ratio
                .ok_or_else(|| Error::domain(format!("fixture {name} is not parity-pure")))?;
            out.push(
                Record::at_most(
                    format!("hardy.main_bound.{name}.p{p}"),
                    "maximal function bound",
                    l,
                    ratio,
                    mb.constant * (1.0 + tol),
                )
                .with_p(p),
            );
            if let Some(frozen) = frozen::equivalence(l, cfg.t, p, name) {
                out.push(
                    Record::at_most(
                        format!("hardy.equivalence.{name}.p{p}"),
                        "Hardy norm equivalence",
                        l,
                        (mb.equivalence_ratio / frozen - 1.0).abs(),
                        tol,
                    )
                    .with_p(p),
                );
            }
        }
        let split = af.spectral_split(heights[0], cfg.xi_max)?;
        out.push(Record::at_most(
            format!("hardy.negative_frequency.{name}"),
            "one-sided spectrum",
            l,
            split.fraction(),
            1e-8,
        ));
    }
    Ok(out)
}
