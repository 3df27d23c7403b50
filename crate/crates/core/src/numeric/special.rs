//! Special functions over the complex plane: Γ, 1/Γ, Barnes G and E₁.

use crate::error::{invalid, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ζ'(−1), the constant term in the asymptotic expansion of log G.
const ZETA_PRIME_MINUS_ONE: f64 = -0.165_421_143_700_450_93;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Bernoulli numbers B_2, B_4, ..., B_26.
pub const BERNOULLI_EVEN: [f64; 13] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// log Γ(z) on the principal branch (cut along the negative real axis),
/// satisfying log Γ(z+1) = log z + log Γ(z).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    if w.re < 8.0 && w.im.abs() < 12.0 {
        let n = (8.0 - w.re).ceil() as usize;
        for _ in 0..n {
            shift += w.ln();
            w += 1.0;
        }
    }
    stirling_ln_gamma(w) - shift
}

fn stirling_ln_gamma(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut term = inv;
    let mut corr = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI_EVEN.iter().take(10).enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        corr += term * (b / (two_k * (two_k - 1.0)));
        term *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + corr
}

/// Γ(z). Poles at non-positive integers give infinity.
pub fn gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return PI / (s * ln_gamma(1.0 - z).exp());
    }
    ln_gamma(z).exp()
}

/// 1/Γ(z), an entire function; exactly zero at the poles of Γ.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        return (z * PI).sin() * ln_gamma(1.0 - z).exp() / PI;
    }
    (-ln_gamma(z)).exp()
}

/// Barnes G-function. Exact zeros at non-positive integers and
/// G(n) = 1!·2!···(n−2)! at positive integers.
pub fn barnes_g(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.im == 0.0 && z.re.fract() == 0.0 && z.re <= 40.0 {
        let n = z.re as u32;
        let mut g = 1.0;
        let mut fact = 1.0;
        for j in 1..n.saturating_sub(1) {
            fact *= j as f64;
            g *= fact;
        }
        return Complex64::new(g, 0.0);
    }
    ln_barnes_g(z).exp()
}

/// A logarithm of G(z), continuous along the shift recurrence.
pub fn ln_barnes_g(z: Complex64) -> Complex64 {
    // G(z) = G(w + 1) / ∏_{j=0}^{n-1} Γ(z + j) with w = z + n − 1 large.
    let mut w = z - 1.0;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut arg = z;
    while w.re < 20.0 && w.im.abs() < 20.0 {
        acc += ln_gamma(arg);
        arg += 1.0;
        w += 1.0;
    }
    let lw = w.ln();
    let w2 = w * w;
    let inv2 = w2.inv();
    let mut term = inv2;
    let mut series = Complex64::new(0.0, 0.0);
    for k in 1..=11usize {
        let b = BERNOULLI_EVEN[k];
        series += term * (b / (4.0 * (k * (k + 1)) as f64));
        term *= inv2;
    }
    let asym = w2 * 0.5 * lw - w2 * 0.75 + w * LN_SQRT_2PI - lw / 12.0
        + ZETA_PRIME_MINUS_ONE
        + series;
    asym - acc
}

/// Ein(z) = Σ_{m≥1} (−1)^{m+1} z^m / (m·m!), the entire part of E₁:
/// E₁(z) = −log z − γ + Ein(z).
pub fn ein(z: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let scale = z.norm().max(1.0);
    for m in 1..500usize {
        term *= -z / m as f64;
        let t = term / m as f64;
        sum -= t;
        if t.norm() < 1e-17 * sum.norm().max(1e-300) && m as f64 > scale {
            break;
        }
    }
    sum
}

/// Principal-branch exponential integral E₁(z).
pub fn exp_integral_e1(z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(invalid("E1 has a logarithmic singularity at z = 0"));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(invalid("E1 is evaluated on its branch cut (arg z = π)"));
    }
    Ok(e1_unchecked(z))
}

/// E₁ without argument checks; callers guarantee z is off the cut.
pub(crate) fn e1_unchecked(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r <= 4.0 || (z.re < 0.0 && z.im.abs() <= 10.0) {
        -z.ln() - EULER_GAMMA + ein(z)
    } else {
        e1_continued_fraction(z)
    }
}

// Modified Lentz evaluation of e^z E₁(z) = 1/(z+1− 1/(z+3− 4/(z+5− ...))).
fn e1_continued_fraction(z: Complex64) -> Complex64 {
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..20_000usize {
        let an = -((i * i) as f64);
        b += 2.0;
        d = (d * an + b).inv();
        c = b + c.inv() * an;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            return h * (-z).exp();
        }
    }
    log::warn!("E1 continued fraction did not converge at z = {z}");
    h * (-z).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_at_integers_and_half() {
        assert_relative_eq!(gamma(c(5.0, 0.0)).re, 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(c(0.5, 0.0)).re, PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(c(-0.5, 0.0)).re, -2.0 * PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn recip_gamma_vanishes_at_poles() {
        for n in 0..6 {
            assert_eq!(recip_gamma(c(-(n as f64), 0.0)), c(0.0, 0.0));
        }
        let near = recip_gamma(c(-2.0 + 1e-9, 0.0));
        assert!(near.norm() < 1e-8);
    }

    #[test]
    fn ln_gamma_recurrence() {
        for z in [c(0.3, 2.0), c(-3.7, 0.4), c(12.0, -30.0), c(0.25, 50000.0)] {
            let lhs = ln_gamma(z + 1.0);
            let rhs = ln_gamma(z) + z.ln();
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0), "{z}");
        }
    }

    #[test]
    fn barnes_g_reference_values() {
        assert_eq!(barnes_g(c(1.0, 0.0)).re, 1.0);
        assert_eq!(barnes_g(c(2.0, 0.0)).re, 1.0);
        assert_eq!(barnes_g(c(5.0, 0.0)).re, 12.0);
        assert_eq!(barnes_g(c(0.0, 0.0)).re, 0.0);
        assert_eq!(barnes_g(c(-3.0, 0.0)).re, 0.0);
        // Value at 1/2 from 2^{1/24} e^{3ζ'(−1)/2} π^{−1/4}.
        let half = 2f64.powf(1.0 / 24.0) * (1.5 * ZETA_PRIME_MINUS_ONE).exp() * PI.powf(-0.25);
        assert_relative_eq!(barnes_g(c(0.5, 0.0)).re, half, max_relative = 1e-12);
        assert_relative_eq!(barnes_g(c(0.5, 0.0)).re, 0.603_244_281_209_446_2, max_relative = 1e-12);
        // ζ'(−1) = 1/12 − log A with Glaisher's constant A.
        let a = 1.282_427_129_100_622_6_f64;
        assert_relative_eq!(1.0 / 12.0 - a.ln(), ZETA_PRIME_MINUS_ONE, max_relative = 1e-14);
    }

    #[test]
    fn barnes_g_functional_equation() {
        for z in [c(0.3, 0.2), c(2.5, -1.0), c(-0.7, 0.4), c(3.5, 0.0), c(1.5, 7.0)] {
            let lhs = barnes_g(z + 1.0);
            let rhs = gamma(z) * barnes_g(z);
            assert!((lhs - rhs).norm() < 1e-11 * lhs.norm(), "{z}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn e1_reference_values() {
        assert_relative_eq!(
            exp_integral_e1(c(1.0, 0.0)).unwrap().re,
            0.219_383_934_395_520_27,
            max_relative = 1e-14
        );
        // Reference values from an arbitrary-precision implementation.
        let z = exp_integral_e1(c(0.0, 10.0)).unwrap();
        assert!((z - c(0.045_456_433_004_455_37, 0.087_551_267_423_977_43)).norm() < 1e-13);
        let z = exp_integral_e1(c(10.0, 0.0)).unwrap();
        assert_relative_eq!(z.re, 4.156_968_929_685_324e-6, max_relative = 1e-12);
    }

    #[test]
    fn e1_rejects_singular_points() {
        assert!(exp_integral_e1(c(0.0, 0.0)).is_err());
        assert!(exp_integral_e1(c(-1.0, 0.0)).is_err());
    }

    #[test]
    fn e1_small_argument_limit() {
        for x in [1e-2, 1e-4, 1e-8] {
            let v = exp_integral_e1(c(x, 0.0)).unwrap().re + x.ln() + EULER_GAMMA;
            assert!(v.abs() < 2.0 * x);
        }
    }

    #[test]
    fn e1_large_argument_asymptotic() {
        for x in [20.0, 50.0, 200.0] {
            let v = exp_integral_e1(c(x, 0.0)).unwrap().re * f64::exp(x);
            assert!((v - 1.0 / x).abs() <= 2.0 / (x * x));
        }
    }

    #[test]
    fn e1_continuous_across_method_switch() {
        for z in [c(4.0, 0.0), c(0.0, 4.0), c(-3.0, 2.65), c(2.0, 3.464)] {
            let dz = c(1e-9, 1e-9);
            let a = e1_unchecked(z * (1.0 - 1e-12));
            let b = e1_unchecked(z * (1.0 + 1e-12) + dz);
            assert!((a - b).norm() < 1e-8, "{z}");
        }
    }
}
