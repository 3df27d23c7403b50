//! ζ(s) by Euler–Maclaurin summation, its derivatives by Cauchy contours or
//! by differentiating the summation formula, and Hardy's Z function.

use crate::error::{invalid, Error, Result};
use crate::numeric::special::{ln_gamma, BERNOULLI_EVEN};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Highest derivative order served by the contour route at double precision.
pub const MAX_DERIVATIVE_ORDER: u32 = 8;

/// Above this height Hardy's Z is evaluated by the Riemann–Siegel formula.
pub const RIEMANN_SIEGEL_SWITCH: f64 = 5000.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaEvalConfig {
    /// Lower bound on the Euler–Maclaurin truncation index N₀.
    pub min_terms: usize,
    /// N₀ = max(min_terms, ⌈terms_per_height·|Im s|⌉).
    pub terms_per_height: f64,
    /// Number of Bernoulli corrections B_2 .. B_{2m}.
    pub bernoulli_terms: usize,
    /// Radius of the derivative contour.
    pub radius: f64,
    pub contour_nodes: usize,
    /// Decimal digits; only double precision is available.
    pub precision_digits: u32,
}

impl Default for ZetaEvalConfig {
    fn default() -> Self {
        Self {
            min_terms: 50,
            terms_per_height: 2.0,
            bernoulli_terms: 12,
            radius: 0.25,
            contour_nodes: 256,
            precision_digits: 16,
        }
    }
}

impl ZetaEvalConfig {
    /// Configuration for sums over many zeros: N₀ = max(50, |t|/2). With 12
    /// corrections the neglected term is below 10⁻¹² relative.
    pub fn bulk() -> Self {
        Self { terms_per_height: 0.5, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius < 0.5) {
            return Err(invalid(format!("contour radius must lie in (0, 0.5), got {}", self.radius)));
        }
        if !(15..=16).contains(&self.precision_digits) {
            return Err(invalid(format!(
                "precision of {} digits unsupported; double precision gives 15 to 16",
                self.precision_digits
            )));
        }
        if self.bernoulli_terms == 0 || self.bernoulli_terms > BERNOULLI_EVEN.len() {
            return Err(invalid(format!("bernoulli_terms must lie in 1..={}", BERNOULLI_EVEN.len())));
        }
        if self.min_terms < 2 || !(self.terms_per_height > 0.0) {
            return Err(invalid("truncation parameters must be positive"));
        }
        if self.contour_nodes < 16 {
            return Err(invalid("at least 16 contour nodes are required"));
        }
        Ok(())
    }

    pub fn truncation(&self, s: Complex64) -> usize {
        let by_height = (self.terms_per_height * s.im.abs()).ceil() as usize;
        self.min_terms.max(by_height)
    }
}

/// Truncated product of two Taylor jets.
fn jet_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let d = a.len().min(b.len());
    (0..d)
        .map(|j| (0..=j).map(|i| a[i] * b[j - i]).sum())
        .collect()
}

/// Jet of e^{−h·l}: (−l)^j / j!.
fn exp_jet(l: f64, order: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(order + 1);
    let mut w = 1.0;
    for j in 0..=order {
        out.push(Complex64::new(w, 0.0));
        w *= -l / (j + 1) as f64;
    }
    out
}

/// Euler–Maclaurin remainder beyond the head Σ_{n<N₀} n^{−s}, as a jet in h
/// for ζ(s + h).
pub(crate) fn em_tail(s: Complex64, order: usize, n0: usize, bernoulli: usize) -> Vec<Complex64> {
    let big_n = n0 as f64;
    let ln_n = big_n.ln();
    let base = (-s * ln_n).exp();
    let e = exp_jet(ln_n, order);

    let shifted = s - 1.0;
    let mut inv = Vec::with_capacity(order + 1);
    let mut p = shifted.inv();
    for _ in 0..=order {
        inv.push(p);
        p = -p / shifted;
    }

    let mut out: Vec<Complex64> = jet_mul(&e, &inv).iter().map(|c| c * base * big_n).collect();
    for (o, ej) in out.iter_mut().zip(&e) {
        *o += ej * base * 0.5;
    }

    let mut poly = vec![Complex64::new(0.0, 0.0); order + 1];
    poly[0] = s;
    if order >= 1 {
        poly[1] = Complex64::new(1.0, 0.0);
    }
    let mut factorial = 2.0;
    let mut power = 1.0 / big_n;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate().take(bernoulli) {
        let kk = k + 1;
        if kk > 1 {
            for a in [2 * kk - 3, 2 * kk - 2] {
                let mut lin = vec![Complex64::new(0.0, 0.0); order + 1];
                lin[0] = s + a as f64;
                if order >= 1 {
                    lin[1] = Complex64::new(1.0, 0.0);
                }
                poly = jet_mul(&poly, &lin);
            }
            factorial *= ((2 * kk - 1) * (2 * kk)) as f64;
            power /= big_n * big_n;
        }
        let coef = b / factorial * power;
        for (o, t) in out.iter_mut().zip(jet_mul(&poly, &e)) {
            *o += t * base * coef;
        }
    }
    out
}

/// Taylor coefficients of ζ(s + h) up to h^order, from a generic Euler–Maclaurin sum.
pub(crate) fn em_jet(s: Complex64, order: usize, n0: usize, bernoulli: usize) -> Vec<Complex64> {
    let mut head = vec![Complex64::new(0.0, 0.0); order + 1];
    for n in 1..n0 {
        let l = (n as f64).ln();
        let mut w = (-s * l).exp();
        for (j, hj) in head.iter_mut().enumerate() {
            *hj += w;
            w *= -l / (j + 1) as f64;
        }
    }
    for (h, t) in head.iter_mut().zip(em_tail(s, order, n0, bernoulli)) {
        *h += t;
    }
    head
}

fn check_pole(s: Complex64) -> Result<()> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole);
    }
    Ok(())
}

/// ζ(s) for s ≠ 1.
pub fn zeta_eval(s: Complex64, config: &ZetaEvalConfig) -> Result<Complex64> {
    config.validate()?;
    check_pole(s)?;
    Ok(em_jet(s, 0, config.truncation(s), config.bernoulli_terms)[0])
}

/// ζ(s), ζ'(s), ..., ζ^{(max_order)}(s) by differentiating the Euler–Maclaurin
/// formula term by term.
pub fn zeta_derivatives_direct(s: Complex64, max_order: u32, config: &ZetaEvalConfig) -> Result<Vec<Complex64>> {
    config.validate()?;
    check_pole(s)?;
    let jet = em_jet(s, max_order as usize, config.truncation(s), config.bernoulli_terms);
    Ok(jet_to_derivatives(jet))
}

pub(crate) fn jet_to_derivatives(mut jet: Vec<Complex64>) -> Vec<Complex64> {
    let mut fact = 1.0;
    for (j, c) in jet.iter_mut().enumerate() {
        if j > 0 {
            fact *= j as f64;
        }
        *c *= fact;
    }
    jet
}

/// ζ^{(n)}(s) = n!/(2πi) ∮ ζ(w)/(w − s)^{n+1} dw, trapezoid rule on a circle.
pub fn zeta_derivative(s: Complex64, n: u32, config: &ZetaEvalConfig) -> Result<Complex64> {
    config.validate()?;
    if n > MAX_DERIVATIVE_ORDER {
        return Err(invalid(format!(
            "derivative order {n} exceeds the double-precision budget of {MAX_DERIVATIVE_ORDER}"
        )));
    }
    let r = config.radius;
    if (s - 1.0).norm() <= r {
        return Err(Error::Pole);
    }
    let m = config.contour_nodes;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let phi = TAU * j as f64 / m as f64;
        let w = s + Complex64::from_polar(r, phi);
        let z = em_jet(w, 0, config.truncation(w), config.bernoulli_terms)[0];
        acc += z * Complex64::from_polar(1.0, -(n as f64) * phi);
    }
    let fact: f64 = (1..=n).map(f64::from).product();
    Ok(acc * (fact / (m as f64 * r.powi(n as i32))))
}

/// Riemann–Siegel θ(t) = arg Γ(1/4 + it/2) − (t/2) log π, continuous with θ(0) = 0.
pub fn theta(t: f64) -> f64 {
    if t < 0.0 {
        return -theta(-t);
    }
    if t < 50.0 {
        return ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln();
    }
    let inv = 1.0 / t;
    let inv2 = inv * inv;
    0.5 * t * (t / TAU).ln() - 0.5 * t - PI / 8.0
        + inv
            * (1.0 / 48.0
                + inv2 * (7.0 / 5760.0 + inv2 * (31.0 / 80640.0 + inv2 * (127.0 / 430080.0 + inv2 * 511.0 / 1216512.0))))
}

/// Hardy's Z(t) = e^{iθ(t)} ζ(1/2 + it), real for real t.
pub fn hardy_z(t: f64) -> f64 {
    if t.abs() >= RIEMANN_SIEGEL_SWITCH {
        return riemann_siegel_z(t.abs());
    }
    let cfg = ZetaEvalConfig::bulk();
    let s = Complex64::new(0.5, t);
    let z = em_jet(s, 0, cfg.truncation(s), cfg.bernoulli_terms)[0];
    (Complex64::from_polar(1.0, theta(t)) * z).re
}

/// Ψ(p) = cos(2π(p² − p − 1/16)) / cos(2πp), entire in p.
fn psi(p: Complex64) -> Complex64 {
    (TAU * (p * p - p - 1.0 / 16.0)).cos() / (TAU * p).cos()
}

const PSI_NODES: usize = 64;
const PSI_RADIUS: f64 = 0.25;

/// Ψ^{(n)}(p) for n = 0..=12 by a Cauchy integral; nodes avoid the real axis
/// so the removable singularities at p = 1/4, 3/4 are never hit.
fn psi_derivatives(p: f64) -> [f64; 13] {
    let mut vals = Vec::with_capacity(PSI_NODES);
    for j in 0..PSI_NODES {
        let phi = TAU * (j as f64 + 0.5) / PSI_NODES as f64;
        vals.push((phi, psi(Complex64::new(p, 0.0) + Complex64::from_polar(PSI_RADIUS, phi))));
    }
    let mut out = [0.0; 13];
    let mut scale = 1.0 / PSI_NODES as f64;
    for (n, o) in out.iter_mut().enumerate() {
        if n > 0 {
            scale *= n as f64 / PSI_RADIUS;
        }
        let acc: Complex64 = vals.iter().map(|&(phi, v)| v * Complex64::from_polar(1.0, -(n as f64) * phi)).sum();
        *o = acc.re * scale;
    }
    out
}

/// Z(t) by the Riemann–Siegel formula with the corrections C_0 .. C_4.
pub fn riemann_siegel_z(t: f64) -> f64 {
    let a = (t / TAU).sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;
    let th = theta(t);
    let mut main = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        main += (th - t * kf.ln()).cos() / kf.sqrt();
    }
    let d = psi_derivatives(p);
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    let pi6 = pi4 * pi2;
    let pi8 = pi4 * pi4;
    let c = [
        d[0],
        -d[3] / (96.0 * pi2),
        d[2] / (64.0 * pi2) + d[6] / (18432.0 * pi4),
        -d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi4) - d[9] / (5_308_416.0 * pi6),
        d[0] / (128.0 * pi2)
            + 19.0 * d[4] / (24576.0 * pi4)
            + 11.0 * d[8] / (5_898_240.0 * pi6)
            + d[12] / (2_038_431_744.0 * pi8),
    ];
    let inv_a = 1.0 / a;
    let mut corr = 0.0;
    let mut w = 1.0;
    for ck in c {
        corr += ck * w;
        w *= inv_a;
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * main + sign * corr / a.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_values() {
        let cfg = ZetaEvalConfig::default();
        assert!((zeta_eval(c(2.0, 0.0), &cfg).unwrap().re - PI * PI / 6.0).abs() < 1e-12);
        assert!((zeta_eval(c(0.0, 0.0), &cfg).unwrap() - c(-0.5, 0.0)).norm() < 1e-12);
        assert!((zeta_eval(c(-1.0, 0.0), &cfg).unwrap() - c(-1.0 / 12.0, 0.0)).norm() < 1e-12);
        assert!(matches!(zeta_eval(c(1.0, 0.0), &cfg), Err(Error::Pole)));
    }

    #[test]
    fn value_on_critical_line() {
        // mpmath: zeta(0.5 + 10j)
        let z = zeta_eval(c(0.5, 10.0), &ZetaEvalConfig::default()).unwrap();
        assert!((z - c(1.544_895_220_296_752_8, -0.115_336_465_271_273_38)).norm() < 1e-12);
    }

    #[test]
    fn contour_and_direct_derivatives_agree() {
        let cfg = ZetaEvalConfig::default();
        let s = c(0.5, 30.0);
        let direct = zeta_derivatives_direct(s, 4, &cfg).unwrap();
        for n in 0..=4u32 {
            let cauchy = zeta_derivative(s, n, &cfg).unwrap();
            let d = direct[n as usize];
            assert!((cauchy - d).norm() <= 1e-9 * d.norm().max(1.0), "n = {n}");
        }
    }

    #[test]
    fn zeta_prime_at_two() {
        // −ζ'(2) = 0.9375482543158437
        let d = zeta_derivative(c(2.0, 0.0), 1, &ZetaEvalConfig::default()).unwrap();
        assert!((d.re + 0.937_548_254_315_843_7).abs() < 1e-12);
        assert!(zeta_derivative(c(2.0, 0.0), 9, &ZetaEvalConfig::default()).is_err());
        assert!(matches!(zeta_derivative(c(1.1, 0.0), 1, &ZetaEvalConfig::default()), Err(Error::Pole)));
    }

    #[test]
    fn theta_branches_meet() {
        let exact = ln_gamma(c(0.25, 25.0)).im - 25.0 * PI.ln();
        assert!((exact - theta(50.0)).abs() < 1e-12);
        assert!(theta(0.0).abs() < 1e-15);
    }

    #[test]
    fn hardy_z_is_real_rotation() {
        let t = 40.0;
        let z = zeta_eval(c(0.5, t), &ZetaEvalConfig::default()).unwrap();
        let rotated = Complex64::from_polar(1.0, theta(t)) * z;
        assert!(rotated.im.abs() < 1e-12);
        assert!((rotated.re - hardy_z(t)).abs() < 1e-12);
    }

    #[test]
    fn riemann_siegel_matches_euler_maclaurin() {
        let cfg = ZetaEvalConfig::bulk();
        for t in [1000.0, 2345.6, 5000.0, 7777.7] {
            let s = c(0.5, t);
            let em = (Complex64::from_polar(1.0, theta(t)) * zeta_eval(s, &cfg).unwrap()).re;
            let rs = riemann_siegel_z(t);
            assert!((em - rs).abs() < 1e-8, "t = {t}: {em} vs {rs}");
        }
    }

    #[test]
    fn config_validation() {
        let bad = ZetaEvalConfig { radius: 0.6, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = ZetaEvalConfig { precision_digits: 30, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
