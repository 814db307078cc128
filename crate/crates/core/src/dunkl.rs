//! The Dunkl operator, its inverse, and the Dunkl transform on sampled functions.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, jacobi_rule, weighted_lp_norm, SymmetricGrid};
use crate::special::{dunkl_kernel_real, LambdaContext};

/// Parity tolerance for declared even/odd samples.
pub const PARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// Behaviour of [`SampledFunction::eval`] outside the grid window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    /// Out-of-window evaluation is a range error.
    Strict,
    /// The function is taken to vanish outside the window.
    Zero,
}

/// Complex samples of a function on a [`SymmetricGrid`].
#[derive(Debug, Clone)]
pub struct SampledFunction {
    grid: Arc<SymmetricGrid>,
    values: Vec<Complex64>,
    parity: Parity,
}

/// Samples of a transform on a ξ-grid, with the truncation estimate of the
/// transform that produced them (zero for directly sampled spectra).
#[derive(Debug, Clone)]
pub struct SpectrumSamples {
    grid: Arc<SymmetricGrid>,
    values: Vec<Complex64>,
    tail_bound: f64,
}

fn check_parity(grid: &SymmetricGrid, values: &[Complex64], parity: Parity) -> Result<()> {
    let sign = match parity {
        Parity::None => return Ok(()),
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    for i in 0..values.len() / 2 {
        let j = grid.mirror(i);
        if (values[i] - sign * values[j]).norm() > PARITY_TOL * scale {
            return Err(Error::domain(format!(
                "declared {parity:?} parity fails at x = {}",
                grid.nodes()[i]
            )));
        }
    }
    if parity == Parity::Odd && values.len() % 2 == 1 {
        let mid = values.len() / 2;
        if values[mid].norm() > PARITY_TOL * scale {
            return Err(Error::domain("odd function must vanish at 0"));
        }
    }
    Ok(())
}

impl SampledFunction {
    pub fn new(grid: Arc<SymmetricGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(SampledFunction {
            grid,
            values,
            parity: Parity::None,
        })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Arc<SymmetricGrid>, f: F) -> Self {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        SampledFunction {
            grid,
            values,
            parity: Parity::None,
        }
    }

    pub fn from_real_fn<F: Fn(f64) -> f64>(grid: Arc<SymmetricGrid>, f: F) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    /// Declares a parity, checked at every node pair.
    pub fn with_parity(mut self, parity: Parity) -> Result<Self> {
        check_parity(&self.grid, &self.values, parity)?;
        self.parity = parity;
        Ok(self)
    }

    pub fn grid(&self) -> &Arc<SymmetricGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Interpolated value at x.
    pub fn eval(&self, x: f64, ext: Extension) -> Result<Complex64> {
        match self.grid.interpolate(&self.values, x) {
            Some(v) => Ok(v),
            None => match ext {
                Extension::Zero => Ok(Complex64::new(0.0, 0.0)),
                Extension::Strict => Err(Error::range(format!(
                    "x = {x} outside the window [-{0}, {0}]",
                    self.grid.x_max()
                ))),
            },
        }
    }

    /// Weighted L^p functional; p may be infinite.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        weighted_lp_norm(&self.values, p, &self.grid)
    }

    /// Pointwise map keeping the grid.
    pub fn map<F: Fn(f64, Complex64) -> Complex64>(&self, f: F) -> Self {
        let values = self
            .grid
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| f(x, v))
            .collect();
        SampledFunction {
            grid: self.grid.clone(),
            values,
            parity: Parity::None,
        }
    }

    /// a·self + b·other on a shared grid.
    pub fn combine(&self, a: Complex64, other: &SampledFunction, b: Complex64) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &v)| a * u + b * v)
            .collect();
        Ok(SampledFunction {
            grid: self.grid.clone(),
            values,
            parity: Parity::None,
        })
    }
}

impl SpectrumSamples {
    pub fn new(grid: Arc<SymmetricGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(SpectrumSamples {
            grid,
            values,
            tail_bound: 0.0,
        })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Arc<SymmetricGrid>, f: F) -> Self {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        SpectrumSamples {
            grid,
            values,
            tail_bound: 0.0,
        }
    }

    pub fn grid(&self) -> &Arc<SymmetricGrid> {
        &self.grid
    }

    pub fn xi_nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Estimated truncation error of the producing transform.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        weighted_lp_norm(&self.values, p, &self.grid)
    }

    /// Reinterprets the spectrum as a function of ξ.
    pub fn as_function(&self) -> SampledFunction {
        SampledFunction {
            grid: self.grid.clone(),
            values: self.values.clone(),
            parity: Parity::None,
        }
    }
}

fn same_grid(a: &Arc<SymmetricGrid>, b: &Arc<SymmetricGrid>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a.nodes() == b.nodes() {
        Ok(())
    } else {
        Err(Error::domain("functions live on different grids"))
    }
}

/// ⟨f, g⟩_λ = c_λ ∫ f g |x|^{2λ} dx (bilinear).
pub fn inner_product(f: &SampledFunction, g: &SampledFunction) -> Result<Complex64> {
    same_grid(&f.grid, &g.grid)?;
    let prod: Vec<Complex64> = f.values.iter().zip(&g.values).map(|(&a, &b)| a * b).collect();
    Ok(f.grid.sum(&prod))
}

/// Finite-difference scheme for the derivative part of D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeScheme {
    /// Three-point stencils, second order.
    Central,
    /// Five-point stencils: the Richardson extrapolation of two central
    /// differences, fourth order.
    Richardson,
}

impl DerivativeScheme {
    pub fn points(self) -> usize {
        match self {
            DerivativeScheme::Central => 3,
            DerivativeScheme::Richardson => 5,
        }
    }

    /// Nodes at each end of the grid whose stencil is one-sided.
    pub fn boundary_width(self) -> usize {
        self.points() / 2
    }
}

/// Fornberg weights for the first derivative at x0 on the nodes xs.
fn first_derivative_weights(x0: f64, xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    // c[j][k]: weight of node j for derivative order k ∈ {0, 1}
    let mut c = vec![[0.0f64; 2]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                c[i][1] = c1 * (c[i - 1][0] - c5 * c[i - 1][1]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            c[j][1] = (c4 * c[j][1] - c[j][0]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|w| w[1]).collect()
}

/// Finite-difference derivative of samples on the grid nodes.
pub fn derivative(grid: &SymmetricGrid, values: &[Complex64], scheme: DerivativeScheme) -> Result<Vec<Complex64>> {
    let n = grid.len();
    let k = scheme.points();
    if n < k {
        return Err(Error::domain(format!("derivative needs at least {k} nodes, grid has {n}")));
    }
    let xs = grid.nodes();
    let out = (0..n)
        .map(|i| {
            let start = i.saturating_sub(k / 2).min(n - k);
            let w = first_derivative_weights(xs[i], &xs[start..start + k]);
            w.iter()
                .zip(&values[start..start + k])
                .fold(Complex64::new(0.0, 0.0), |acc, (&wj, &vj)| acc + wj * vj)
        })
        .collect();
    Ok(out)
}

/// D f = f′ + (λ/x)(f(x) − f(−x)); the reflection uses the mirrored node and
/// a node at 0 gets (1+2λ)f′(0).
#[allow(non_snake_case)]
pub fn dunkl_D(ctx: &LambdaContext, f: &SampledFunction, scheme: DerivativeScheme) -> Result<SampledFunction> {
    let grid = &f.grid;
    if grid.len() < 3 {
        return Err(Error::domain("the Dunkl operator needs at least 3 nodes"));
    }
    let dv = derivative(grid, &f.values, scheme)?;
    let xs = grid.nodes();
    let lam = ctx.lambda;
    let values = (0..grid.len())
        .map(|i| {
            let x = xs[i];
            if x == 0.0 {
                (1.0 + 2.0 * lam) * dv[i]
            } else {
                dv[i] + lam / x * (f.values[i] - f.values[grid.mirror(i)])
            }
        })
        .collect();
    Ok(SampledFunction {
        grid: grid.clone(),
        values,
        parity: match f.parity {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            Parity::None => Parity::None,
        },
    })
}

const INVERSE_RULE_SIZE: usize = 32;

/// Reconstructs f with D f = g and f(0) = f0:
/// f(x) = f0 + (x/2)(∫_{−1}^{1} sgn(s) g(sx) ds + ∫_{−1}^{1} g(sx)|s|^{2λ} ds).
#[allow(non_snake_case)]
pub fn dunkl_D_inverse(ctx: &LambdaContext, g: &SampledFunction, f0: Complex64) -> Result<SampledFunction> {
    let gl = gauss_legendre(INVERSE_RULE_SIZE);
    // s^{2λ} on (0, 1): (1+r)^{2λ} on (−1, 1) with s = (1+r)/2
    let jac = jacobi_rule(0.0, 2.0 * ctx.lambda, INVERSE_RULE_SIZE)?;
    let jac_scale = 0.5f64.powf(2.0 * ctx.lambda + 1.0);
    let xs = g.grid.nodes();
    let mut values = Vec::with_capacity(xs.len());
    for &x in xs {
        if x == 0.0 {
            values.push(f0);
            continue;
        }
        let mut odd = Complex64::new(0.0, 0.0);
        for (&r, &w) in gl.nodes.iter().zip(&gl.weights) {
            let s = 0.5 * (1.0 + r);
            odd += 0.5 * w * (g.eval(s * x, Extension::Strict)? - g.eval(-s * x, Extension::Strict)?);
        }
        let mut even = Complex64::new(0.0, 0.0);
        for (&r, &w) in jac.nodes.iter().zip(&jac.weights) {
            let s = 0.5 * (1.0 + r);
            even += jac_scale * w * (g.eval(s * x, Extension::Strict)? + g.eval(-s * x, Extension::Strict)?);
        }
        values.push(f0 + 0.5 * x * (odd + even));
    }
    SampledFunction::new(g.grid.clone(), values)
}

/// Precomputed kernel values E_λ(i x_k ξ_j) for repeated transforms between
/// a fixed pair of grids.
#[derive(Debug, Clone)]
pub struct TransformPlan {
    x_grid: Arc<SymmetricGrid>,
    xi_grid: Arc<SymmetricGrid>,
    // row j holds E_λ(i x_k ξ_j) over k
    kernel: Vec<Vec<Complex64>>,
}

impl TransformPlan {
    pub fn new(ctx: &LambdaContext, x_grid: Arc<SymmetricGrid>, xi_grid: Arc<SymmetricGrid>) -> Self {
        let kernel = xi_grid
            .nodes()
            .par_iter()
            .map(|&xi| {
                x_grid
                    .nodes()
                    .iter()
                    .map(|&x| dunkl_kernel_real(ctx, x * xi))
                    .collect()
            })
            .collect();
        TransformPlan {
            x_grid,
            xi_grid,
            kernel,
        }
    }

    pub fn x_grid(&self) -> &Arc<SymmetricGrid> {
        &self.x_grid
    }

    pub fn xi_grid(&self) -> &Arc<SymmetricGrid> {
        &self.xi_grid
    }

    fn apply(&self, values: &[Complex64], conj: bool) -> Vec<Complex64> {
        self.kernel
            .par_iter()
            .map(|row| {
                let prod: Vec<Complex64> = row
                    .iter()
                    .zip(values)
                    .map(|(&e, &v)| if conj { e.conj() * v } else { e * v })
                    .collect();
                self.x_grid.sum(&prod)
            })
            .collect()
    }

    /// 𝓕_λ f on the ξ-grid.
    pub fn forward(&self, f: &SampledFunction) -> Result<SpectrumSamples> {
        same_grid(&self.x_grid, &f.grid)?;
        Ok(SpectrumSamples {
            grid: self.xi_grid.clone(),
            values: self.apply(&f.values, true),
            tail_bound: tail_bound(&f.grid, &f.values),
        })
    }

    /// 𝓕_λ⁻¹ g(x) = (𝓕_λ g)(−x), with the roles of the grids swapped:
    /// samples on the ξ-grid, output on the x-grid.
    pub fn inverse(&self, g: &SpectrumSamples) -> Result<SampledFunction> {
        same_grid(&self.xi_grid, &g.grid)?;
        // Σ_j w_j g(ξ_j) E(i x_k ξ_j), computed per output node in fixed order
        let n = self.x_grid.len();
        let values = (0..n)
            .into_par_iter()
            .map(|k| {
                let prod: Vec<Complex64> = self
                    .kernel
                    .iter()
                    .zip(&g.values)
                    .map(|(row, &v)| row[k] * v)
                    .collect();
                self.xi_grid.sum(&prod)
            })
            .collect();
        SampledFunction::new(self.x_grid.clone(), values)
    }
}

/// Largest sample magnitude at the window edge times the mass of
/// [X, 2X] on both sides; a heuristic for the truncated tail.
fn tail_bound(grid: &SymmetricGrid, values: &[Complex64]) -> f64 {
    let edge = values[0].norm().max(values[values.len() - 1].norm());
    let n = grid.len();
    let ratio = 2f64.powf(1.0 + 2.0 * grid.lambda()) - 1.0;
    let mass: f64 = grid.weights()[n / 2..].iter().sum::<f64>() * 2.0;
    edge * mass * ratio
}

/// 𝓕_λ f(ξ) = c_λ ∫ f(x) E_λ(−ixξ) |x|^{2λ} dx on the ξ-grid.
pub fn dunkl_transform(ctx: &LambdaContext, f: &SampledFunction, xi_grid: Arc<SymmetricGrid>) -> Result<SpectrumSamples> {
    TransformPlan::new(ctx, f.grid.clone(), xi_grid).forward(f)
}

/// 𝓕_λ⁻¹ g on the x-grid.
pub fn dunkl_inverse_transform(
    ctx: &LambdaContext,
    g: &SpectrumSamples,
    x_grid: Arc<SymmetricGrid>,
) -> Result<SampledFunction> {
    TransformPlan::new(ctx, x_grid, g.grid.clone()).inverse(g)
}
