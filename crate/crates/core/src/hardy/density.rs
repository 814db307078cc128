//! Spectral densities φ supported in (0, ∞) and their fixture files.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::LambdaContext;

/// Parity of u = Re F that a density produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityTarget {
    /// φ real
    UEven,
    /// φ purely imaginary
    UOdd,
}

impl ParityTarget {
    fn token(self) -> &'static str {
        match self {
            ParityTarget::UEven => "u_even",
            ParityTarget::UOdd => "u_odd",
        }
    }
}

/// Samples of φ on a uniform grid over [ξ_lo, ξ_hi], 0 < ξ_lo.
///
/// The synthesis rule is the trapezoid rule on these nodes, so profiles
/// should vanish to high order at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    xi_lo: f64,
    xi_hi: f64,
    parity: ParityTarget,
    values: Vec<Complex64>,
}

impl SpectralDensity {
    pub fn new(xi_lo: f64, xi_hi: f64, parity: ParityTarget, values: Vec<Complex64>) -> Result<Self> {
        if !(xi_lo > 0.0 && xi_hi > xi_lo && xi_hi.is_finite()) {
            return Err(Error::domain(format!("support [{xi_lo}, {xi_hi}] must satisfy 0 < lo < hi")));
        }
        if values.len() < 3 {
            return Err(Error::domain("a density needs at least 3 samples"));
        }
        let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let off = values
            .iter()
            .map(|v| match parity {
                ParityTarget::UEven => v.im.abs(),
                ParityTarget::UOdd => v.re.abs(),
            })
            .fold(0.0, f64::max);
        if off > 1e-14 * scale {
            return Err(Error::domain(format!(
                "profile must be {} for parity {}",
                if parity == ParityTarget::UEven { "real" } else { "imaginary" },
                parity.token()
            )));
        }
        Ok(SpectralDensity {
            xi_lo,
            xi_hi,
            parity,
            values,
        })
    }

    /// Samples `f` at `count` uniform nodes.
    pub fn from_fn<F: Fn(f64) -> Complex64>(xi_lo: f64, xi_hi: f64, parity: ParityTarget, count: usize, f: F) -> Result<Self> {
        let h = (xi_hi - xi_lo) / (count.max(2) - 1) as f64;
        let values = (0..count).map(|k| f(xi_lo + h * k as f64)).collect();
        Self::new(xi_lo, xi_hi, parity, values)
    }

    /// φ ≡ 0 on a nominal support.
    pub fn zero(parity: ParityTarget) -> Self {
        SpectralDensity {
            xi_lo: 1.0,
            xi_hi: 2.0,
            parity,
            values: vec![Complex64::new(0.0, 0.0); 3],
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.xi_lo, self.xi_hi)
    }

    pub fn parity(&self) -> ParityTarget {
        self.parity
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        (self.xi_hi - self.xi_lo) / (self.values.len() - 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.values.len()).map(|k| self.xi_lo + h * k as f64).collect()
    }

    /// Trapezoid weights on the sample nodes.
    pub(crate) fn trapezoid_weights(&self) -> Vec<f64> {
        let n = self.values.len();
        let h = self.spacing();
        (0..n).map(|k| if k == 0 || k == n - 1 { 0.5 * h } else { h }).collect()
    }

    /// c_λ ∫ |φ(ξ)| ξ^{2λ} dξ.
    pub fn mass(&self, ctx: &LambdaContext) -> f64 {
        let w = self.trapezoid_weights();
        self.nodes()
            .iter()
            .zip(&self.values)
            .zip(&w)
            .map(|((&xi, v), &wk)| wk * v.norm() * xi.powf(2.0 * ctx.lambda))
            .sum::<f64>()
            * ctx.c_lambda
    }

    /// Rescaled so that [`mass`](Self::mass) is 1.
    pub fn normalized(&self, ctx: &LambdaContext) -> Result<Self> {
        let m = self.mass(ctx);
        if !(m > 0.0) {
            return Err(Error::domain("cannot normalize a zero density"));
        }
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v /= m);
        Ok(out)
    }

    /// Fixture text: header `xi_lo xi_hi parity count`, then `xi re im` rows.
    pub fn to_fixture_string(&self) -> String {
        let mut s = format!("{:?} {:?} {} {}\n", self.xi_lo, self.xi_hi, self.parity.token(), self.values.len());
        for (xi, v) in self.nodes().iter().zip(&self.values) {
            let _ = writeln!(s, "{xi:?} {:?} {:?}", v.re, v.im);
        }
        s
    }

    pub fn parse_fixture(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty fixture".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!("bad fixture header: {header}")));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s}: {e}")));
        let (lo, hi) = (num(fields[0])?, num(fields[1])?);
        let parity = match fields[2] {
            "u_even" => ParityTarget::UEven,
            "u_odd" => ParityTarget::UOdd,
            other => return Err(Error::Parse(format!("unknown parity {other}"))),
        };
        let count: usize = fields[3].parse().map_err(|e| Error::Parse(format!("count: {e}")))?;
        let mut values = Vec::with_capacity(count);
        let h = (hi - lo) / (count.max(2) - 1) as f64;
        for (k, line) in lines.enumerate() {
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 3 {
                return Err(Error::Parse(format!("bad fixture row: {line}")));
            }
            let xi = num(cols[0])?;
            if (xi - (lo + h * k as f64)).abs() > 1e-12 * hi {
                return Err(Error::Parse(format!("row {k}: node {xi} is not on the uniform grid")));
            }
            values.push(Complex64::new(num(cols[1])?, num(cols[2])?));
        }
        if values.len() != count {
            return Err(Error::Parse(format!("expected {count} rows, found {}", values.len())));
        }
        Self::new(lo, hi, parity, values)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse_fixture(&text)
    }
}

macro_rules! fixture {
    ($name:literal) => {
        ($name, include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/", $name, ".txt")))
    };
}

const FIXTURES: [(&str, &str); 8] = [
    fixture!("bump_1_2_even"),
    fixture!("bump_1_2_odd"),
    fixture!("wide_bump_even"),
    fixture!("narrow_bump_odd"),
    fixture!("two_bump_even"),
    fixture!("two_bump_odd"),
    fixture!("polyexp_even"),
    fixture!("polyexp_odd"),
];

/// The shipped test family, in a fixed order.
pub fn fixture_family() -> Vec<(&'static str, SpectralDensity)> {
    FIXTURES
        .iter()
        .map(|(name, text)| (*name, SpectralDensity::parse_fixture(text).expect("shipped fixture parses")))
        .collect()
}

/// One shipped fixture by name.
pub fn fixture(name: &str) -> Result<SpectralDensity> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| SpectralDensity::parse_fixture(text))
        .unwrap_or_else(|| Err(Error::Io(format!("no fixture named {name}"))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(lo: f64, hi: f64, x: f64) -> f64 {
        let s = (2.0 * x - lo - hi) / (hi - lo);
        if s.abs() < 1.0 {
            (-1.0 / (1.0 - s * s)).exp()
        } else {
            0.0
        }
    }

    #[test]
    fn fixtures_match_their_formulas() {
        let fam = fixture_family();
        assert_eq!(fam.len(), 8);
        let check = |name: &str, f: &dyn Fn(f64) -> Complex64, scale: f64| {
            let d = fixture(name).unwrap();
            for (xi, v) in d.nodes().iter().zip(d.values()) {
                let want = f(*xi) * scale;
                assert!((v - want).norm() < 1e-13 * (1.0 + want.norm()), "{name} at {xi}");
            }
        };
        let re = |a: f64| Complex64::new(a, 0.0);
        let im = |a: f64| Complex64::new(0.0, a);
        check("wide_bump_even", &|x| re(bump(0.5, 3.0, x)), 1.0);
        check("narrow_bump_odd", &|x| im(-bump(2.0, 2.25, x)), 1.0);
        check("two_bump_even", &|x| re(bump(0.5, 1.5, x) - 0.5 * bump(2.0, 3.0, x)), 1.0);
        check("two_bump_odd", &|x| im(0.7 * bump(0.5, 1.5, x) + bump(2.0, 3.0, x)), 1.0);
        check("polyexp_even", &|x| re(((x - 0.2) * (4.0 - x)).powi(4) * (-x).exp() / 10.0), 1.0);
        check("polyexp_odd", &|x| im(((x - 0.3) * (5.0 - x)).powi(4) * x * (-2.0 * x).exp() / 10.0), 1.0);
        // unit dξ-mass bump
        let d = fixture("bump_1_2_even").unwrap();
        let mass: f64 = d.trapezoid_weights().iter().zip(d.values()).map(|(w, v)| w * v.re).sum();
        assert!((mass - 1.0).abs() < 1e-9);
        let odd = fixture("bump_1_2_odd").unwrap();
        for (a, b) in d.values().iter().zip(odd.values()) {
            assert_eq!(a.re, b.im);
        }
    }

    #[test]
    fn fixture_text_roundtrips() {
        for (_, d) in fixture_family() {
            let text = d.to_fixture_string();
            assert_eq!(SpectralDensity::parse_fixture(&text).unwrap(), d);
        }
    }

    #[test]
    fn invalid_densities_are_rejected() {
        let v = vec![Complex64::new(1.0, 0.0); 5];
        assert!(SpectralDensity::new(0.0, 1.0, ParityTarget::UEven, v.clone()).is_err());
        assert!(SpectralDensity::new(1.0, 1.0, ParityTarget::UEven, v.clone()).is_err());
        assert!(SpectralDensity::new(1.0, 2.0, ParityTarget::UOdd, v).is_err());
        assert!(SpectralDensity::parse_fixture("1 2 u_even 3\n1 0 0\n1.5 0 0\n").is_err());
        assert!(SpectralDensity::parse_fixture("1 2 sideways 2\n1 0 0\n2 0 0\n").is_err());
        assert!(matches!(fixture("missing"), Err(Error::Io(_))));
    }
}
