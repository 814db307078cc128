//! Recomputes the frozen regression values at 4× the default resolution.
//!
//! cargo run --example calibrate > crates/core/fixtures/regression.txt

use std::sync::Arc;

use dunkl_harmonics::cli::RunConfig;
use dunkl_harmonics::dunkl::TransformPlan;
use dunkl_harmonics::hardy::{
    distribution_check, fixture_family, hardy_diagnostics, main_bound_report, shifted_maximal, AnalyticField,
};
use dunkl_harmonics::poisson::FieldPart;
use dunkl_harmonics::quadrature::{GridSpec, SymmetricGrid};
use dunkl_harmonics::special::constants;

const REFINE: usize = 4;

fn main() -> dunkl_harmonics::Result<()> {
    println!("# regenerated by: cargo run --example calibrate > fixtures/regression.txt");
    println!("# resolution: x_step / {REFINE}, {REFINE}x heights");
    for (lambda, ps) in [(0.5, [0.7, 0.85, 1.0]), (1.0, [0.75, 0.9, 1.0])] {
        let base = RunConfig { lambda, ..RunConfig::default() };
        let cfg = RunConfig {
            x_step: base.x_step / REFINE as f64,
            y_count: (base.y_count - 1) * REFINE + 1,
            ..base.clone()
        };
        let ctx = constants(lambda)?;
        let grid = Arc::new(SymmetricGrid::uniform(&ctx, cfg.x_step, cfg.x_max, true)?);
        let heights = cfg.heights();
        let xi_grid = Arc::new(SymmetricGrid::panels(&ctx, &GridSpec { x_max: cfg.xi_max, ..GridSpec::default() })?);
        let plan = TransformPlan::new(&ctx, grid.clone(), xi_grid);
        for (name, phi) in fixture_family() {
            let field = AnalyticField::new(&ctx, &phi, cfg.x_max)?.sample(grid.clone(), &heights)?;
            for p in ps {
                let mb = main_bound_report(&ctx, &field, p)?;
                println!("equivalence {lambda:?} {:?} {p:?} {name} {:e}", cfg.t, mb.equivalence_ratio);
            }
            if lambda == 0.5 && name == "bump_1_2_even" {
                let u_star = shifted_maximal(&field, FieldPart::U, cfg.t)?;
                let m = u_star.values().iter().map(|c| c.re).fold(0.0, f64::max);
                let row = &distribution_check(&ctx, &field, cfg.t, &[0.5 * m])?[0];
                println!("distribution {lambda:?} {:?} {name} {:e} {:e} {:e}", cfg.t, row.sigma, row.lhs, row.rhs);
                let d = hardy_diagnostics(&ctx, &field, 0.8, 2.0, 2.0, &plan)?;
                println!("iterated {lambda:?} 0.8 2.0 2.0 {name} {:e}", d.iterated);
            }
        }
    }
    Ok(())
}
