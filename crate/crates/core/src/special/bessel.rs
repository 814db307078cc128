//! Normalized Bessel functions j_α(z) = 2^α Γ(α+1) J_α(z) / z^α.
//!
//! Below |z| = [`SERIES_CROSSOVER`] the power series
//! `Σ (-1)^n (z/2)^{2n} Γ(α+1) / (n! Γ(n+α+1))` is summed in double-double
//! arithmetic; above it the Hankel large-argument expansion is used. Real
//! arguments switch earlier and sum small |z| in plain f64.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::dd::{CDd, Dd};
use super::gamma::ln_gamma;
use crate::error::{Error, Result};

/// |z| at which evaluation switches from the power series to the asymptotic expansion.
pub const SERIES_CROSSOVER: f64 = 25.0;

/// Largest |Im z| accepted for complex arguments.
pub const MAX_IMAG: f64 = 700.0;

const MAX_SERIES_TERMS: usize = 400;

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha >= -0.5) {
        return Err(Error::domain(format!(
            "normalized Bessel order must be >= -1/2, got {alpha}"
        )));
    }
    Ok(())
}

/// Normalized Bessel function j_α(z) for real z.
pub fn bessel_j_norm(alpha: f64, z: f64) -> Result<f64> {
    check_order(alpha)?;
    if !z.is_finite() {
        return Err(Error::domain("argument must be finite"));
    }
    Ok(j_norm(alpha, z))
}

/// Unchecked real evaluation; `alpha >= -1/2` is the caller's responsibility.
#[inline]
pub(crate) fn j_norm(alpha: f64, z: f64) -> f64 {
    let z = z.abs();
    if z < PLAIN_SERIES_BELOW {
        series_plain(alpha, z)
    } else if z < REAL_CROSSOVER {
        series_real(alpha, z)
    } else {
        asymptotic_real(alpha, z)
    }
}

// On the real line the series cancels by about e^z, so plain f64 keeps
// ~1e−13 up to 6; the Hankel remainder at optimal truncation is ~e^{−2z}.
const PLAIN_SERIES_BELOW: f64 = 6.0;
const REAL_CROSSOVER: f64 = 17.0;

fn series_plain(alpha: f64, z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..MAX_SERIES_TERMS {
        let nf = n as f64;
        term *= -q / (nf * (nf + alpha));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn series_real(alpha: f64, z: f64) -> f64 {
    if z == 0.0 {
        return 1.0;
    }
    let q = Dd::prod_f64(z, z).scale(0.25);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let peak = 0.5 * z;
    for n in 1..MAX_SERIES_TERMS {
        let nf = n as f64;
        let denom = Dd::sum_f64(nf, alpha) * Dd::from_f64(nf);
        term = (-(term * q)).div(denom);
        sum = sum + term;
        if nf > peak && term.abs_f64() < 1e-32 {
            break;
        }
    }
    sum.to_f64()
}

/// Hankel expansion coefficients: returns (P, Q) such that
/// J_α(z) = sqrt(2/(πz)) (P cos ω − Q sin ω), ω = z − (α/2 + 1/4)π.
fn hankel_pq_real(alpha: f64, z: f64) -> (f64, f64) {
    let mu = 4.0 * alpha * alpha;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut t = 1.0_f64;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        t *= (mu - odd * odd) / (8.0 * kf * z);
        if t.abs() > prev && k > 2 {
            break;
        }
        prev = t.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
        if t.abs() < 1e-18 {
            break;
        }
    }
    (p, q)
}

fn asymptotic_real(alpha: f64, z: f64) -> f64 {
    let (p, q) = hankel_pq_real(alpha, z);
    let phase = (0.5 * alpha + 0.25) * PI;
    let (sz, cz) = z.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_w = cz * cp + sz * sp;
    let sin_w = sz * cp - cz * sp;
    let bessel_j = (2.0 / (PI * z)).sqrt() * (p * cos_w - q * sin_w);
    let prefactor = (log_norm(alpha) - alpha * z.ln()).exp();
    prefactor * bessel_j
}

// α ln 2 + ln Γ(α+1); callers alternate between two orders per λ
fn log_norm(alpha: f64) -> f64 {
    thread_local! {
        static LAST: std::cell::Cell<[(f64, f64); 2]> = const { std::cell::Cell::new([(f64::NAN, 0.0); 2]) };
    }
    LAST.with(|c| {
        let mut slots = c.get();
        if let Some(&(_, v)) = slots.iter().find(|(a, _)| *a == alpha) {
            return v;
        }
        let v = alpha * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0);
        slots = [(alpha, v), slots[0]];
        c.set(slots);
        v
    })
}

/// Normalized Bessel function for complex z with |Im z| ≤ [`MAX_IMAG`].
pub fn bessel_j_norm_complex(alpha: f64, z: Complex64) -> Result<Complex64> {
    check_order(alpha)?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("argument must be finite"));
    }
    if z.im.abs() > MAX_IMAG {
        return Err(Error::Overflow(format!(
            "|Im z| = {} exceeds {MAX_IMAG}",
            z.im.abs()
        )));
    }
    if z.im == 0.0 {
        return Ok(Complex64::new(j_norm(alpha, z.re), 0.0));
    }
    // j_α is even in z
    let z = if z.re < 0.0 { -z } else { z };
    if z.norm() < SERIES_CROSSOVER {
        Ok(series_complex(alpha, z))
    } else {
        Ok(asymptotic_complex(alpha, z))
    }
}

fn series_complex(alpha: f64, z: Complex64) -> Complex64 {
    let re = Dd::prod_f64(z.re, z.re) - Dd::prod_f64(z.im, z.im);
    let im = Dd::prod_f64(z.re, z.im).scale(2.0);
    let q = CDd {
        re: (-re).scale(0.25),
        im: (-im).scale(0.25),
    };
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let peak = 0.5 * z.norm();
    let mut max_term = 1.0_f64;
    for n in 1..MAX_SERIES_TERMS {
        let nf = n as f64;
        let denom = Dd::sum_f64(nf, alpha) * Dd::from_f64(nf);
        term = term.mul(q).div_real(denom);
        sum = sum.add(term);
        let size = term.norm1_f64();
        max_term = max_term.max(size);
        if nf > peak && size < 1e-32 * max_term {
            break;
        }
    }
    Complex64::new(sum.re.to_f64(), sum.im.to_f64())
}

/// Complex Hankel expansion sums (P, Q), as in [`hankel_pq_real`].
fn hankel_pq_complex(alpha: f64, z: Complex64) -> (Complex64, Complex64) {
    let mu = 4.0 * alpha * alpha;
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut t = Complex64::new(1.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        t = t * (mu - odd * odd) / (8.0 * kf * z);
        let size = t.norm();
        if size > prev && k > 2 {
            break;
        }
        prev = size;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
        if size < 1e-18 {
            break;
        }
    }
    (p, q)
}

/// 2^α Γ(α+1) z^{−α}, the normalization turning J_α into j_α.
fn norm_prefactor(alpha: f64, z: Complex64) -> Complex64 {
    let log_pref = alpha * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0);
    (Complex64::new(log_pref, 0.0) - alpha * z.ln()).exp()
}

fn asymptotic_complex(alpha: f64, z: Complex64) -> Complex64 {
    let (p, q) = hankel_pq_complex(alpha, z);
    let omega = z - (0.5 * alpha + 0.25) * PI;
    let bessel_j = (2.0 / (PI * z)).sqrt() * (p * omega.cos() - q * omega.sin());
    bessel_j * norm_prefactor(alpha, z)
}

/// Normalized Hankel functions h^±_α(z) = 2^α Γ(α+1) z^{−α} H^{(1,2)}_α(z) by
/// the large-argument expansion, so that j_α = (h⁺ + h⁻)/2. Valid for
/// Re z > 0 and |z| ≥ [`SERIES_CROSSOVER`]; h⁺ decays in the upper half plane.
pub(crate) fn hankel_norm(alpha: f64, z: Complex64, upper: bool) -> Complex64 {
    let (p, q) = hankel_pq_complex(alpha, z);
    let omega = z - (0.5 * alpha + 0.25) * PI;
    let i = Complex64::i();
    let h = if upper {
        (i * omega).exp() * (p + i * q)
    } else {
        (-i * omega).exp() * (p - i * q)
    };
    (2.0 / (PI * z)).sqrt() * h * norm_prefactor(alpha, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// j_{3/2}(z) = 3 (sin z − z cos z) / z³
    fn j_three_halves(z: f64) -> f64 {
        3.0 * (z.sin() - z * z.cos()) / (z * z * z)
    }

    #[test]
    fn value_at_origin_is_one() {
        for &a in &[-0.5, 0.0, 0.3, 1.0, 4.5] {
            assert_eq!(bessel_j_norm(a, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn half_integer_closed_forms_on_both_branches() {
        let mut z: f64 = -50.0;
        while z <= 50.0 {
            let envelope = 1.0_f64.min(1.0 / z.abs().max(1e-300));
            let c = bessel_j_norm(-0.5, z).unwrap();
            assert!((c - z.cos()).abs() <= 1e-12, "cos at {z}: {c}");
            if z != 0.0 {
                let s = bessel_j_norm(0.5, z).unwrap();
                assert!((s - z.sin() / z).abs() <= 1e-12 * envelope.max(1e-2), "sinc at {z}");
            }
            if z.abs() > 1.0 {
                let j = bessel_j_norm(1.5, z).unwrap();
                let env = (3.0 / (z * z)).min(1.0);
                assert!((j - j_three_halves(z)).abs() <= 1e-12 * env, "j_3/2 at {z}");
            }
            z += 0.37;
        }
    }

    #[test]
    fn crossover_is_continuous() {
        for &a in &[-0.2, 0.0, 0.8, 2.0, 3.0, 5.0] {
            let below = series_real(a, SERIES_CROSSOVER);
            let above = asymptotic_real(a, SERIES_CROSSOVER);
            let scale = SERIES_CROSSOVER.powf(-a - 0.5);
            assert!(
                (below - above).abs() <= 1e-13 * scale.max(1e-3),
                "alpha {a}: {below} vs {above}"
            );
        }
    }

    #[test]
    fn tiered_real_path_matches_double_double_series() {
        for &a in &[-0.5, -0.2, 0.0, 0.8, 2.0, 3.0, 5.0] {
            let mut z = 0.0;
            while z < SERIES_CROSSOVER {
                let want = series_real(a, z);
                // envelope of the normalized function
                let scale = (log_norm(a) - (a + 0.5) * z.ln()).exp().min(1.0);
                assert!((j_norm(a, z) - want).abs() <= 2e-13 * scale, "alpha {a} at {z}");
                z += 0.0731;
            }
        }
    }

    #[test]
    fn three_term_recurrence_holds() {
        // j_{α-1}(z) = j_α(z) − z²/(4α(α+1)) j_{α+1}(z)
        for &a in &[0.5, 0.7, 1.0, 2.5] {
            for &z in &[0.3, 4.0, 13.0, 24.9, 25.1, 37.0] {
                let lhs = j_norm(a - 1.0, z);
                let rhs = j_norm(a, z) - z * z / (4.0 * a * (a + 1.0)) * j_norm(a + 1.0, z);
                let scale = z.powf(-(a - 1.0) - 0.5).min(1.0);
                assert!((lhs - rhs).abs() <= 2e-12 * scale.max(1e-3), "a={a} z={z}");
            }
        }
    }

    #[test]
    fn order_below_minus_half_is_rejected() {
        assert!(matches!(bessel_j_norm(-0.6, 1.0), Err(Error::Domain(_))));
        assert!(bessel_j_norm_complex(-1.0, Complex64::new(1.0, 1.0)).is_err());
    }

    #[test]
    fn complex_argument_matches_closed_form() {
        // j_{-1/2}(z) = cos z for complex z too
        for &(re, im) in &[(1.0, 0.5), (-3.0, 2.0), (10.0, -4.0), (30.0, 3.0), (0.2, 40.0)] {
            let z = Complex64::new(re, im);
            let v = bessel_j_norm_complex(-0.5, z).unwrap();
            let want = z.cos();
            assert_relative_eq!(v.re, want.re, max_relative = 1e-11, epsilon = 1e-11 * want.norm());
            assert_relative_eq!(v.im, want.im, max_relative = 1e-11, epsilon = 1e-11 * want.norm());
        }
        let too_big = Complex64::new(0.0, 800.0);
        assert!(matches!(
            bessel_j_norm_complex(0.5, too_big),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn order_one_matches_truncated_series_with_remainder_bound() {
        // j_1(2) = Σ_k (−1)^k / (k!(k+1)!); terms alternate and decrease,
        // so the truncation error is below the first omitted term
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 0..30 {
            sum += term;
            term *= -1.0 / ((k + 1) as f64 * (k + 2) as f64);
        }
        let bound = term.abs() + 30.0 * f64::EPSILON;
        let got = bessel_j_norm(1.0, 2.0).unwrap();
        assert!((got - sum).abs() <= bound + 1e-12 * sum.abs(), "{got} vs {sum}");
    }

    #[test]
    fn hankel_pair_averages_to_j() {
        for &a in &[-0.2, 0.0, 0.5, 1.5, 3.0] {
            for &z in &[26.0, 40.0, 90.0] {
                let zc = Complex64::new(z, 0.0);
                let avg = 0.5 * (hankel_norm(a, zc, true) + hankel_norm(a, zc, false));
                let j = j_norm(a, z);
                let scale = z.powf(-a - 0.5);
                assert!((avg.re - j).abs() < 1e-13 * scale && avg.im.abs() < 1e-13 * scale);
            }
            // λ-free closed form at α = −1/2: h± = e^{±iz}
            let z = Complex64::new(30.0, 4.0);
            let h = hankel_norm(-0.5, z, true);
            assert!((h - (Complex64::i() * z).exp()).norm() < 1e-14);
        }
    }
}
