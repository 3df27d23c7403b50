//! Haar-distributed CUE sampling and the characteristic polynomial
//! Z(θ) = det(I − U e^{−iθ}) = ∏_m (1 − e^{i(θ_m − θ)}).

mod ginibre;
mod verblunsky;

pub use verblunsky::{opuc_monic_coefficients, VerblunskyCoefficients};

use crate::error::{invalid, Result};
use crate::exact::MixedMomentSpec;
use crate::stats::{monte_carlo, Estimate};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Master seed plus stream index; one stream per Monte Carlo sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub master: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(master: u64, stream: u64) -> Self {
        Self { master, stream }
    }
}

/// How Haar unitaries are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sampler {
    /// QR of a complex Gaussian matrix with the diagonal phase fix, then a
    /// dense eigenvalue solve. O(N³).
    #[default]
    Ginibre,
    /// Random Verblunsky coefficients with the CUE law and the roots of the
    /// paraorthogonal polynomial they generate. O(N²).
    Verblunsky,
}

/// Eigenangles of one CUE matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CueSample {
    pub dimension: usize,
    /// Angles in [0, 2π).
    pub eigenangles: Vec<f64>,
}

impl CueSample {
    /// Builds a sample from arbitrary angles, reducing them into [0, 2π).
    pub fn from_angles(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(invalid("a sample needs at least one eigenangle"));
        }
        let eigenangles = angles.into_iter().map(reduce_angle).collect::<Vec<_>>();
        Ok(Self { dimension: eigenangles.len(), eigenangles })
    }

    /// Adds δ to every angle.
    pub fn rotated(&self, delta: f64) -> Self {
        Self {
            dimension: self.dimension,
            eigenangles: self.eigenangles.iter().map(|t| reduce_angle(t + delta)).collect(),
        }
    }
}

/// Reduces an angle into [0, 2π), mapping values that round to 2π to 0.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Draws a Haar unitary by the Gaussian-QR route and returns its eigenangles.
pub fn sample_cue(n: usize, seed: RngSeed) -> Result<CueSample> {
    sample_cue_with(n, seed, Sampler::Ginibre)
}

pub fn sample_cue_with(n: usize, seed: RngSeed, sampler: Sampler) -> Result<CueSample> {
    if n == 0 {
        return Err(invalid("matrix size N must be at least 1"));
    }
    let mut rng = crate::stats::sample_rng(seed);
    Ok(draw(n, sampler, &mut rng))
}

pub(crate) fn draw<R: rand::Rng>(n: usize, sampler: Sampler, rng: &mut R) -> CueSample {
    let angles = match sampler {
        Sampler::Ginibre => ginibre::eigenangles(n, rng),
        Sampler::Verblunsky => VerblunskyCoefficients::sample(n, rng).eigenangles(),
    };
    CueSample {
        dimension: n,
        eigenangles: angles.into_iter().map(reduce_angle).collect(),
    }
}

/// Coefficients c_j with Z(θ) = Σ_j c_j e^{−ijθ}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharPolyCoefficients {
    pub coefficients: Vec<Complex64>,
}

/// c_j = (−1)^j e_j(e^{iθ_1}, ..., e^{iθ_N}) by multiplying out ∏(1 − e^{iθ_m} x).
pub fn char_poly_coefficients(sample: &CueSample) -> CharPolyCoefficients {
    let mut c = vec![Complex64::new(0.0, 0.0); sample.dimension + 1];
    c[0] = Complex64::new(1.0, 0.0);
    for (m, &theta) in sample.eigenangles.iter().enumerate() {
        let e = Complex64::from_polar(1.0, theta);
        for j in (1..=m + 1).rev() {
            let prev = c[j - 1];
            c[j] -= e * prev;
        }
    }
    CharPolyCoefficients { coefficients: c }
}

/// Z^{(n)}(θ) = Σ_j c_j (−ij)^n e^{−ijθ}, by Horner in e^{−iθ}.
pub fn char_poly_derivative(coeffs: &CharPolyCoefficients, theta: f64, n: u32) -> Complex64 {
    let x = Complex64::from_polar(1.0, -theta);
    let c = &coeffs.coefficients;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in (0..c.len()).rev() {
        acc = acc * x + c[j] * minus_i_j_pow(j, n);
    }
    acc
}

fn minus_i_j_pow(j: usize, n: u32) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mag = (j as f64).powi(n as i32);
    match n % 4 {
        0 => Complex64::new(mag, 0.0),
        1 => Complex64::new(0.0, -mag),
        2 => Complex64::new(-mag, 0.0),
        _ => Complex64::new(0.0, mag),
    }
}

/// Z(θ) from the product form ∏_m (1 − e^{i(θ_m − θ)}).
pub fn char_poly_product(sample: &CueSample, theta: f64) -> Complex64 {
    sample
        .eigenangles
        .iter()
        .map(|&t| Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, t - theta))
        .product()
}

/// Taylor jet of Z(θ + h) in h at θ = θ_index, from the product form, up to
/// h^order. Returned as (coefficients scaled by e^{−scale}, scale) so that
/// Z^{(n)}(θ) = n!·e^{scale}·jet[n]; the power basis is useless here because
/// its coefficients reach 10⁹ by N = 100 and Horner loses every digit.
pub fn char_poly_jet_at(sample: &CueSample, index: usize, order: usize) -> (Vec<Complex64>, f64) {
    let theta = sample.eigenangles[index];
    // e^{−ih} to the requested order.
    let mut exp_minus = vec![Complex64::new(1.0, 0.0); order + 1];
    for r in 1..=order {
        exp_minus[r] = exp_minus[r - 1] * Complex64::new(0.0, -1.0) / r as f64;
    }
    let mut jet = vec![Complex64::new(0.0, 0.0); order + 1];
    jet[0] = Complex64::new(1.0, 0.0);
    let mut scale = 0.0;
    let mut factor = vec![Complex64::new(0.0, 0.0); order + 1];
    for (m, &tm) in sample.eigenangles.iter().enumerate() {
        let a = if m == index { Complex64::new(1.0, 0.0) } else { Complex64::from_polar(1.0, tm - theta) };
        // 1 − a e^{−ih}; the own factor has a = 1 exactly, so its constant term is 0.
        factor[0] = if m == index { Complex64::new(0.0, 0.0) } else { Complex64::new(1.0, 0.0) - a };
        for r in 1..=order {
            factor[r] = -a * exp_minus[r];
        }
        for i in (0..=order).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=i {
                acc += jet[j] * factor[i - j];
            }
            jet[i] = acc;
        }
        let big = jet.iter().fold(0.0_f64, |acc, c| acc.max(c.norm()));
        if big > 0.0 {
            scale += big.ln();
            for c in jet.iter_mut() {
                *c /= big;
            }
        }
    }
    (jet, scale)
}

/// (1/N) Σ_m ∏_r Z^{(n_r)}(θ_m) for one sample.
pub fn eigenvalue_average(sample: &CueSample, orders: &[u32]) -> Complex64 {
    let n = sample.dimension;
    let top = orders.iter().copied().max().unwrap_or(0) as usize;
    let mut factorial = vec![1.0; top + 1];
    for r in 1..=top {
        factorial[r] = factorial[r - 1] * r as f64;
    }
    let mut sum = crate::numeric::ComplexSum::new();
    for index in 0..n {
        let (jet, scale) = char_poly_jet_at(sample, index, top);
        let mut log = Complex64::new(0.0, 0.0);
        let mut zero = false;
        for &o in orders {
            let v = jet[o as usize] * factorial[o as usize];
            if v.norm() == 0.0 {
                zero = true;
                break;
            }
            log += v.ln() + scale;
        }
        if !zero {
            sum.add(log.exp());
        }
    }
    sum.value() / n as f64
}

/// Monte Carlo estimate of E_N[(1/N) Σ_m ∏_r Z^{(n_r)}(θ_m)].
pub fn mixed_moment_mc(spec: &MixedMomentSpec, samples: usize, seed: RngSeed) -> Result<Estimate> {
    mixed_moment_mc_with(spec, samples, seed, Sampler::Ginibre)
}

pub fn mixed_moment_mc_with(
    spec: &MixedMomentSpec,
    samples: usize,
    seed: RngSeed,
    sampler: Sampler,
) -> Result<Estimate> {
    if samples == 0 {
        return Err(invalid("at least one sample is required"));
    }
    let n = spec.n;
    let orders = spec.orders.clone();
    Ok(monte_carlo(samples, seed.master, move |_, rng| {
        let s = draw(n, sampler, rng);
        eigenvalue_average(&s, &orders)
    }))
}
