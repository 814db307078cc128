//! Gauss–Jacobi rules by Golub–Welsch, with Newton-polished nodes and
//! Christoffel-number weights.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::special::beta;

/// An n-point Gauss rule for the weight (1−t)^alpha_exp (1+t)^beta_exp on (−1, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRule {
    pub alpha_exp: f64,
    pub beta_exp: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl JacobiRule {
    /// Σ w_k f(t_k) ≈ ∫ f(t)(1−t)^α(1+t)^β dt.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Three-term recurrence coefficients (a_j, b_j) of the monic Jacobi polynomials:
/// p_{j+1} = (t − a_j) p_j − b_j p_{j−1}. `b[0]` holds the total mass μ₀.
fn recurrence(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let ab = a + b;
    let mut diag = Vec::with_capacity(n + 1);
    let mut off = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let jf = j as f64;
        let d = if j == 0 {
            (b - a) / (ab + 2.0)
        } else {
            let s = 2.0 * jf + ab;
            (b * b - a * a) / (s * (s + 2.0))
        };
        diag.push(d);
        let o = match j {
            0 => 2f64.powf(ab + 1.0) * beta(a + 1.0, b + 1.0),
            1 => 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab)),
            _ => {
                let s = 2.0 * jf + ab;
                4.0 * jf * (jf + a) * (jf + b) * (jf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            }
        };
        off.push(o);
    }
    (diag, off)
}

/// Orthonormal polynomial values p̃_0..p̃_n at t and the derivative of p̃_n.
fn orthonormal_eval(t: f64, n: usize, diag: &[f64], off: &[f64], acc: &mut f64) -> (f64, f64) {
    let mut p_prev = 0.0;
    let mut p = 1.0 / off[0].sqrt();
    let mut dp_prev = 0.0;
    let mut dp = 0.0;
    *acc = p * p;
    for j in 0..n {
        let sb_next = off[j + 1].sqrt();
        let sb = if j == 0 { 0.0 } else { off[j].sqrt() };
        let p_next = ((t - diag[j]) * p - sb * p_prev) / sb_next;
        let dp_next = (p + (t - diag[j]) * dp - sb * dp_prev) / sb_next;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
        if j + 1 < n {
            *acc += p * p;
        }
    }
    (p, dp)
}

/// Builds the n-point Gauss–Jacobi rule for (1−t)^alpha_exp (1+t)^beta_exp.
pub fn jacobi_rule(alpha_exp: f64, beta_exp: f64, n: usize) -> Result<JacobiRule> {
    if !(alpha_exp > -1.0) || !(beta_exp > -1.0) {
        return Err(Error::domain(format!(
            "Jacobi exponents must exceed -1, got ({alpha_exp}, {beta_exp})"
        )));
    }
    if n == 0 {
        return Err(Error::domain("rule size must be at least 1"));
    }
    let (diag, off) = recurrence(alpha_exp, beta_exp, n);
    let (nodes, weights) = golub_welsch(&diag, &off, n, -1.0, 1.0);
    Ok(JacobiRule {
        alpha_exp,
        beta_exp,
        nodes,
        weights,
    })
}

/// Nodes and weights from orthonormal recurrence data on the interval (lo, hi).
fn golub_welsch(diag: &[f64], off: &[f64], n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jm[(i, i)] = diag[i];
        if i + 1 < n {
            let s = off[i + 1].sqrt();
            jm[(i, i + 1)] = s;
            jm[(i + 1, i)] = s;
        }
    }
    let mut nodes: Vec<f64> = jm.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

    let mut weights = Vec::with_capacity(n);
    for t in nodes.iter_mut() {
        let mut sumsq = 0.0;
        for _ in 0..3 {
            let (p, dp) = orthonormal_eval(*t, n, diag, off, &mut sumsq);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            let cand = *t - step;
            if cand > lo && cand < hi {
                *t = cand;
            }
            if step.abs() < 1e-16 * t.abs().max(1.0) {
                break;
            }
        }
        orthonormal_eval(*t, n, diag, off, &mut sumsq);
        weights.push(1.0 / sumsq);
    }
    // Christoffel numbers carry O(n ε) relative error; pin the total mass
    let mass: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w *= off[0] / mass;
    }
    (nodes, weights)
}

/// n-point Gauss–Laguerre rule: Σ w_k f(s_k) ≈ ∫_0^∞ f(s) e^{−s} ds.
pub fn gauss_laguerre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::domain("rule size must be at least 1"));
    }
    let diag: Vec<f64> = (0..=n).map(|k| 2.0 * k as f64 + 1.0).collect();
    let off: Vec<f64> = (0..=n).map(|k| if k == 0 { 1.0 } else { (k * k) as f64 }).collect();
    Ok(golub_welsch(&diag, &off, n, 0.0, f64::INFINITY))
}

/// Gauss–Legendre rule on (−1, 1).
pub fn gauss_legendre(n: usize) -> JacobiRule {
    jacobi_rule(0.0, 0.0, n).expect("Legendre exponents are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{beta, constants};
    use crate::testing::adaptive_simpson;
    use approx::assert_relative_eq;

    /// ∫ t^k (1−t)^a (1+t)^b dt by the binomial expansion of t = (1+t) − 1,
    /// with the sum of absolute terms as a rounding scale.
    fn moment(k: u32, a: f64, b: f64) -> (f64, f64) {
        // t^k = Σ_j C(k,j) (1+t)^j (−1)^{k−j}
        let mut acc = 0.0;
        let mut scale = 0.0;
        let mut binom = 1.0;
        for j in 0..=k {
            if j > 0 {
                binom *= (k - j + 1) as f64 / j as f64;
            }
            let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
            let term = binom * 2f64.powf(a + b + j as f64 + 1.0) * beta(a + 1.0, b + j as f64 + 1.0);
            acc += sign * term;
            scale += term;
        }
        (acc, scale)
    }

    #[test]
    fn legendre_integrates_constant() {
        let r = gauss_legendre(7);
        assert_relative_eq!(r.integrate(|_| 1.0), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        for &(a, b) in &[(0.0, 0.0), (-0.7, 0.3), (-0.5, -0.5), (0.0, 5.0), (1.5, -0.2)] {
            let n = 12;
            let r = jacobi_rule(a, b, n).unwrap();
            for k in 0..(2 * n as u32) {
                let got = r.integrate(|t| t.powi(k as i32));
                let (want, scale) = moment(k, a, b);
                assert!(
                    (got - want).abs() <= 1e-13 * scale,
                    "(a,b)=({a},{b}) k={k}: {got} vs {want}"
                );
            }
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!(r.nodes.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn laplace_weight_mass_is_inverse_c_prime() {
        for &l in &[0.3, 0.5, 1.0, 2.5] {
            let ctx = constants(l).unwrap();
            let r = jacobi_rule(l - 1.0, l, 40).unwrap();
            assert_relative_eq!(r.integrate(|_| 1.0), 1.0 / ctx.c_prime, max_relative = 1e-13);
        }
    }

    #[test]
    fn gegenbauer_rule_matches_sine_power_integral() {
        // ∫_0^π sin^{2λ−1}θ dθ, the θ-form of ∫(1−u²)^{λ−1}du, by adaptive Simpson
        for &l in &[0.75, 1.0, 2.5] {
            let r = jacobi_rule(l - 1.0, l - 1.0, 30).unwrap();
            let quad = r.integrate(|_| 1.0);
            let oracle = adaptive_simpson(
                &|th: f64| th.sin().powf(2.0 * l - 1.0),
                0.0,
                std::f64::consts::PI,
                1e-12,
            );
            assert!((quad - oracle).abs() < 1e-9, "λ={l}: {quad} vs {oracle}");
        }
    }

    #[test]
    fn laguerre_rule_integrates_factorial_moments() {
        let (s, w) = gauss_laguerre(20).unwrap();
        let mut fact = 1.0;
        for k in 0..30 {
            if k > 0 {
                fact *= k as f64;
            }
            let got: f64 = s.iter().zip(&w).map(|(&x, &wk)| wk * x.powi(k)).sum();
            assert!((got - fact).abs() <= 1e-12 * fact, "k={k}: {got} vs {fact}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(jacobi_rule(-1.0, 0.0, 4), Err(Error::Domain(_))));
        assert!(jacobi_rule(0.0, -1.5, 4).is_err());
        assert!(jacobi_rule(0.0, 0.0, 0).is_err());
    }
}
