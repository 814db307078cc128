//! λ-analytic test fields, H^p_λ functionals, tents and contour checks.

mod contour;
mod density;
mod functionals;
mod synth;
mod tent;

pub use contour::{contour_integral_f2, gamma_sequence, GammaSequence, stokes_half_domain, stokes_symmetric, ContourIntegral, Rect, StokesCheck, CONTOUR_PANEL};
pub use density::{fixture, fixture_family, ParityTarget, SpectralDensity};
pub use functionals::*;
pub use synth::{synthesize_analytic, tail_truncation, AnalyticField, SpectralSplit, SYNTHESIS_TOL};
pub use tent::{cell_edges, cell_measures, interval_measure, runs, tent_decomposition, TentContour};
