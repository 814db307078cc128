//! Run configuration: flat `key = value` files with command-line overrides.

use std::path::PathBuf;

use super::report::OutputFormat;
use crate::error::{Error, Result};
use crate::hardy::{fixture, SpectralDensity};

/// Tolerance per check family.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub kernel: f64,
    pub transform: f64,
    pub translate: f64,
    pub poisson: f64,
    pub contour: f64,
    pub hardy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            kernel: 1e-10,
            transform: 1e-6,
            translate: 1e-6,
            poisson: 1e-6,
            contour: 1e-5,
            hardy: 1e-2,
        }
    }
}

/// A shipped fixture or a file on disk.
#[derive(Debug, Clone, PartialEq)]
pub enum FixtureSource {
    Builtin(String),
    File(PathBuf),
}

impl FixtureSource {
    pub fn name(&self) -> String {
        match self {
            FixtureSource::Builtin(n) => n.clone(),
            FixtureSource::File(p) => p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        }
    }

    pub fn load(&self) -> Result<SpectralDensity> {
        match self {
            FixtureSource::Builtin(n) => fixture(n),
            FixtureSource::File(p) => SpectralDensity::load(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lambda: f64,
    pub p_list: Vec<f64>,
    /// half-width of the symmetric x-window
    pub x_max: f64,
    /// node spacing of the uniform x-grid
    pub x_step: f64,
    /// spacing ratio between the two grids of O(h²) checks
    pub refine_ratio: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub y_count: usize,
    pub xi_max: f64,
    pub t: f64,
    pub sigma_count: usize,
    pub tolerances: Tolerances,
    pub output: OutputFormat,
    pub fixtures: Vec<FixtureSource>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lambda: 0.5,
            p_list: vec![0.7, 0.85, 1.0],
            x_max: 12.0,
            x_step: 0.05,
            refine_ratio: 0.5,
            y_min: 0.05,
            y_max: 2.0,
            y_count: 40,
            xi_max: 8.0,
            t: 0.1,
            sigma_count: 24,
            tolerances: Tolerances::default(),
            output: OutputFormat::Csv,
            fixtures: crate::hardy::fixture_family()
                .into_iter()
                .map(|(n, _)| FixtureSource::Builtin(n.to_string()))
                .collect(),
        }
    }
}

fn parse_f64(field: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|e| Error::config(field, format!("{v}: {e}")))
}

fn parse_usize(field: &str, v: &str) -> Result<usize> {
    v.trim()
        .parse::<usize>()
        .map_err(|e| Error::config(field, format!("{v}: {e}")))
}

/// Comma-separated reals.
pub fn parse_list(field: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|s| parse_f64(field, s)).collect()
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "lambda" => self.lambda = parse_f64(key, v)?,
            "p_list" => self.p_list = parse_list(key, v)?,
            "x_max" => self.x_max = parse_f64(key, v)?,
            "x_step" => self.x_step = parse_f64(key, v)?,
            "refine_ratio" => self.refine_ratio = parse_f64(key, v)?,
            "y_min" => self.y_min = parse_f64(key, v)?,
            "y_max" => self.y_max = parse_f64(key, v)?,
            "y_count" => self.y_count = parse_usize(key, v)?,
            "xi_max" => self.xi_max = parse_f64(key, v)?,
            "t" => self.t = parse_f64(key, v)?,
            "sigma_count" => self.sigma_count = parse_usize(key, v)?,
            "tol_kernel" => self.tolerances.kernel = parse_f64(key, v)?,
            "tol_transform" => self.tolerances.transform = parse_f64(key, v)?,
            "tol_translate" => self.tolerances.translate = parse_f64(key, v)?,
            "tol_poisson" => self.tolerances.poisson = parse_f64(key, v)?,
            "tol_contour" => self.tolerances.contour = parse_f64(key, v)?,
            "tol_hardy" => self.tolerances.hardy = parse_f64(key, v)?,
            "output" => self.output = v.parse()?,
            "fixtures" => {
                self.fixtures = v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| match s.strip_prefix("builtin:") {
                        Some(n) => FixtureSource::Builtin(n.to_string()),
                        None => FixtureSource::File(PathBuf::from(s)),
                    })
                    .collect()
            }
            other => return Err(Error::config(other, "unknown key")),
        }
        Ok(())
    }

    /// Defaults overridden by the lines of a config file; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}", n + 1), "expected key = value"))?;
            cfg.set(k.trim(), v)?;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::config("lambda", "must be positive"));
        }
        let p0 = 2.0 * self.lambda / (2.0 * self.lambda + 1.0);
        if self.p_list.is_empty() {
            return Err(Error::config("p_list", "must not be empty"));
        }
        if let Some(p) = self.p_list.iter().find(|&&p| !(p > p0 && p <= 1.0)) {
            return Err(Error::config("p_list", format!("p = {p} must lie in (p0, 1] with p0 = {p0:.6}")));
        }
        let positive = [
            ("x_max", self.x_max),
            ("x_step", self.x_step),
            ("y_min", self.y_min),
            ("xi_max", self.xi_max),
            ("t", self.t),
            ("tol_kernel", self.tolerances.kernel),
            ("tol_transform", self.tolerances.transform),
            ("tol_translate", self.tolerances.translate),
            ("tol_poisson", self.tolerances.poisson),
            ("tol_contour", self.tolerances.contour),
            ("tol_hardy", self.tolerances.hardy),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(name, format!("must be positive, got {v}")));
            }
        }
        if self.x_step * 8.0 > self.x_max {
            return Err(Error::config("x_step", "window must hold at least 16 nodes"));
        }
        if !(self.refine_ratio > 0.0 && self.refine_ratio < 1.0) {
            return Err(Error::config("refine_ratio", "must lie in (0, 1)"));
        }
        if !(self.y_max > self.y_min) || self.y_count < 3 {
            return Err(Error::config("y_count", "need y_max > y_min and at least 3 heights"));
        }
        if !(self.t >= self.y_min && self.t < self.y_max) {
            return Err(Error::config("t", "base height must lie in [y_min, y_max)"));
        }
        if self.sigma_count == 0 {
            return Err(Error::config("sigma_count", "must be positive"));
        }
        if self.fixtures.is_empty() {
            return Err(Error::config("fixtures", "need at least one fixture"));
        }
        Ok(())
    }

    /// Uniformly spaced heights y_min, …, y_max, with t inserted if absent.
    pub fn heights(&self) -> Vec<f64> {
        let n = self.y_count;
        let mut y: Vec<f64> = (0..n)
            .map(|k| self.y_min + (self.y_max - self.y_min) * k as f64 / (n - 1) as f64)
            .collect();
        if !y.iter().any(|&h| (h - self.t).abs() <= 1e-12 * self.t.max(1.0)) {
            y.push(self.t);
            y.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        }
        y
    }
}
