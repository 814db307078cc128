//! Composite rule for ∫_{−1}^{1} g(u)(1−u²)^a du, geometrically graded toward
//! either endpoint. Integrands with a sharp feature at distance ε from u = ±1
//! (Poisson kernels at small heights, translated narrow functions) need
//! grading depth ≈ log₂(1/ε) on that side.

use super::grid::Scalar;
use super::jacobi::{gauss_legendre, jacobi_rule, JacobiRule};
use crate::error::Result;

/// Deepest grading level accepted.
pub const MAX_GRADING_DEPTH: u32 = 52;

#[derive(Debug, Clone)]
pub struct GradedJacobi {
    exponent: f64,
    legendre: JacobiRule,
    // weight (1−s)^a on (−1, 1); mirrored for the left end
    end_rule: JacobiRule,
}

impl GradedJacobi {
    pub fn new(exponent: f64, order: usize) -> Result<Self> {
        Ok(GradedJacobi {
            exponent,
            legendre: gauss_legendre(order),
            end_rule: jacobi_rule(exponent, 0.0, order)?,
        })
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Number of integrand evaluations for the given depths.
    pub fn evaluations(&self, depth_left: u32, depth_right: u32) -> usize {
        let n = self.legendre.len();
        n * (depth_left + depth_right) as usize + 2 * self.end_rule.len()
    }

    /// Integrates g(u)(1−u²)^a over (−1, 1); depth k on a side places panel
    /// breaks at distances 2^{-1}, …, 2^{-k} from that endpoint.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, depth_left: u32, depth_right: u32, mut g: F) -> f64 {
        self.integrate_gaps(depth_left, depth_right, |u, _, _| g(u))
    }

    /// Same as [`integrate`](Self::integrate), but g also receives 1+u and 1−u
    /// computed without cancellation near the endpoints.
    pub fn integrate_gaps<T: Scalar, F: FnMut(f64, f64, f64) -> T>(
        &self,
        depth_left: u32,
        depth_right: u32,
        mut g: F,
    ) -> T {
        let a = self.exponent;
        let dl = depth_left.min(MAX_GRADING_DEPTH);
        let dr = depth_right.min(MAX_GRADING_DEPTH);
        let mut total = T::zero();

        // end panels: gap = h (1 − s)/2 from the endpoint
        let h = 0.5f64.powi(dl as i32);
        let mut acc = T::zero();
        for (&s, &w) in self.end_rule.nodes.iter().zip(&self.end_rule.weights) {
            let gap = 0.5 * h * (1.0 - s);
            acc = acc + g(-1.0 + gap, gap, 2.0 - gap) * (w * (2.0 - gap).powf(a));
        }
        total = total + acc * (0.5 * h).powf(a + 1.0);

        let h = 0.5f64.powi(dr as i32);
        let mut acc = T::zero();
        for (&s, &w) in self.end_rule.nodes.iter().zip(&self.end_rule.weights) {
            let gap = 0.5 * h * (1.0 - s);
            acc = acc + g(1.0 - gap, 2.0 - gap, gap) * (w * (2.0 - gap).powf(a));
        }
        total = total + acc * (0.5 * h).powf(a + 1.0);

        // graded panels, gap ∈ [2^{-k}, 2^{-k+1}] from the nearer endpoint
        for (depth, left) in [(dl, true), (dr, false)] {
            for k in 1..=depth {
                let lo = 0.5f64.powi(k as i32);
                let half = 0.5 * lo;
                let mid = 1.5 * lo;
                let mut acc = T::zero();
                for (&s, &w) in self.legendre.nodes.iter().zip(&self.legendre.weights) {
                    let gap = mid + half * s;
                    let far = 2.0 - gap;
                    let val = if left {
                        g(-1.0 + gap, gap, far)
                    } else {
                        g(1.0 - gap, far, gap)
                    };
                    acc = acc + val * (w * (gap * far).powf(a));
                }
                total = total + acc * half;
            }
        }
        total
    }
}

/// Grading depth that resolves a feature at distance `eps` from an endpoint.
pub fn depth_for_distance(eps: f64) -> u32 {
    if !(eps > 0.0) {
        return MAX_GRADING_DEPTH;
    }
    if eps >= 0.5 {
        return 0;
    }
    ((1.0 / eps).log2().ceil() as u32).min(MAX_GRADING_DEPTH)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta;

    #[test]
    fn mass_matches_beta_function_for_all_depths() {
        for &a in &[-0.7, -0.5, 0.0, 1.5] {
            let rule = GradedJacobi::new(a, 16).unwrap();
            let want = 2f64.powf(2.0 * a + 1.0) * beta(a + 1.0, a + 1.0);
            for (dl, dr) in [(0, 0), (0, 7), (5, 0), (12, 12)] {
                let got = rule.integrate(dl, dr, |_| 1.0);
                assert!((got - want).abs() < 1e-13 * want, "a={a} ({dl},{dr}) {got} vs {want}");
            }
        }
    }

    #[test]
    fn resolves_near_endpoint_peak() {
        // ∫ (1−u²)^{-1/2} ε/((1−u)+ε)² du = επ(1+ε)/(ε²+2ε)^{3/2}, from
        // differentiating ∫ dg/((g+c)√(g(2−g))) = π/√(c(c+2)) in c.
        let a = -0.5;
        let eps = 1e-6;
        let rule = GradedJacobi::new(a, 16).unwrap();
        let f = |_: f64, _: f64, gap: f64| eps / (gap + eps).powi(2);
        let deep = rule.integrate_gaps(0, depth_for_distance(eps) + 2, f);
        let deeper = rule.integrate_gaps(0, 40, f);
        let exact = eps * std::f64::consts::PI * (1.0 + eps) / (eps * eps + 2.0 * eps).powf(1.5);
        assert!((deep - exact).abs() < 1e-12 * exact, "{deep} {exact}");
        assert!((deeper - exact).abs() < 1e-12 * exact, "{deeper} {exact}");
        let shallow = rule.integrate_gaps(0, 0, f);
        assert!((shallow - deeper).abs() > 1e-3 * deeper.abs());
    }

    #[test]
    fn depth_rule() {
        assert_eq!(depth_for_distance(1.0), 0);
        assert_eq!(depth_for_distance(0.25), 2);
        assert_eq!(depth_for_distance(0.0), MAX_GRADING_DEPTH);
    }
}
