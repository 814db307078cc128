//! Regression values frozen from a 4×-resolution calibration run
//! (`cargo run --example calibrate`).
//!
//! One record per line, `#` comments:
//! - `equivalence λ t p fixture ratio`
//! - `distribution λ t fixture σ lhs rhs`
//! - `iterated λ p l k fixture value`

const TEXT: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/regression.txt"));

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

fn rows(kind: &str) -> impl Iterator<Item = Vec<&'static str>> + '_ {
    TEXT.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .filter(move |f| f[0] == kind)
}

fn num(s: &str) -> f64 {
    s.parse().expect("frozen regression values are numbers")
}

/// ‖F‖_{H^p} / ‖u*_∇‖_{L^p} at the calibration resolution.
pub fn equivalence(lambda: f64, t: f64, p: f64, fixture: &str) -> Option<f64> {
    rows("equivalence")
        .find(|f| close(num(f[1]), lambda) && close(num(f[2]), t) && close(num(f[3]), p) && f[4] == fixture)
        .map(|f| num(f[5]))
}

/// (σ, LHS, RHS) of the distribution inequality.
pub fn distribution(lambda: f64, t: f64, fixture: &str) -> Option<(f64, f64, f64)> {
    rows("distribution")
        .find(|f| close(num(f[1]), lambda) && close(num(f[2]), t) && f[3] == fixture)
        .map(|f| (num(f[4]), num(f[5]), num(f[6])))
}

/// The iterated y-integral functional.
pub fn iterated(lambda: f64, p: f64, l: f64, k: f64, fixture: &str) -> Option<f64> {
    rows("iterated")
        .find(|f| {
            close(num(f[1]), lambda) && close(num(f[2]), p) && close(num(f[3]), l) && close(num(f[4]), k) && f[5] == fixture
        })
        .map(|f| num(f[6]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_has_a_band_at_the_default_exponents() {
        for (name, _) in crate::hardy::fixture_family() {
            for p in [0.7, 0.85, 1.0] {
                assert!(equivalence(0.5, 0.1, p, name).is_some(), "{name} p={p}");
            }
            for p in [0.75, 0.9, 1.0] {
                assert!(equivalence(1.0, 0.1, p, name).is_some(), "{name} p={p}");
            }
        }
        assert!(distribution(0.5, 0.1, "bump_1_2_even").is_some());
        assert!(iterated(0.5, 0.8, 2.0, 2.0, "bump_1_2_even").is_some());
        assert!(equivalence(0.5, 0.1, 0.7, "no_such_fixture").is_none());
    }
}
