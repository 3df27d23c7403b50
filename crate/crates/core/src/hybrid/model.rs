use super::phase::{FourierSeries, FxTable, HybridParams, TrigPolynomial};
use crate::error::{invalid, Error, Result};
use crate::numeric::special::{barnes_g, recip_gamma};
use crate::rmt::{draw, CueSample, RngSeed, Sampler};
use crate::stats::{monte_carlo, Estimate};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Anything that evaluates F_X at an angle.
pub trait PhaseFunction: Sync {
    fn value(&self, theta: f64) -> Complex64;
}

impl PhaseFunction for HybridParams {
    fn value(&self, theta: f64) -> Complex64 {
        self.f_x(theta)
    }
}

impl PhaseFunction for TrigPolynomial {
    fn value(&self, theta: f64) -> Complex64 {
        self.eval(theta)
    }
}

/// log Z'_{N,X}(θ_j) = iπ/2 + F_X(0) + Σ_{m≠j} [Log(1 − e^{−i(θ_j−θ_m)}) + F_X(θ_j − θ_m)],
/// with the principal logarithm of each factor (the branch reached from the
/// regularized factors 1 − e^{−ε}e^{−iϑ}).
pub fn log_z_nx_prime(sample: &CueSample, phase: &impl PhaseFunction, index: usize) -> Result<Complex64> {
    let angles = &sample.eigenangles;
    if index >= angles.len() {
        return Err(invalid("eigenvalue index out of range"));
    }
    let one = Complex64::new(1.0, 0.0);
    let tj = angles[index];
    let mut acc = Complex64::new(0.0, FRAC_PI_2) + phase.value(0.0);
    for (m, &tm) in angles.iter().enumerate() {
        if m == index {
            continue;
        }
        let d = (tj - tm).rem_euclid(TAU);
        if d < 1e-12 || d > TAU - 1e-12 {
            return Err(Error::DegenerateAngles(index, m));
        }
        acc += (one - Complex64::from_polar(1.0, -d)).ln() + phase.value(d);
    }
    Ok(acc)
}

/// Z'_{N,X} at the last eigenangle θ_N.
pub fn z_nx_prime_at_eigenvalue(sample: &CueSample, phase: &impl PhaseFunction) -> Result<Complex64> {
    Ok(log_z_nx_prime(sample, phase, sample.dimension - 1)?.exp())
}

/// log Z'_{N,X}(θ_j) for every j at O(N·(N + #terms)) cost, using power
/// sums for the F_X part.
pub fn log_z_nx_prime_all(sample: &CueSample, phase: &TrigPolynomial) -> Vec<Complex64> {
    let n = sample.dimension;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sample.eigenangles[a].total_cmp(&sample.eigenangles[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| sample.eigenangles[i]).collect();
    let total: f64 = sorted.iter().sum();
    let f0 = phase.eval(0.0);
    let power_sums: Vec<(Complex64, Complex64)> = phase
        .terms
        .iter()
        .map(|&(m, c)| {
            let p: Complex64 = sorted.iter().map(|&t| Complex64::from_polar(1.0, -(m as f64) * t)).sum();
            (c, p)
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (rank, &t) in sorted.iter().enumerate() {
        // Σ_{m≠j} arg(1 − e^{−iΔ}) with Δ ∈ (0, 2π) is Σ (π − Δ)/2.
        let sum_delta = (n as f64 - 1.0) * t - (total - t) + TAU * (n - 1 - rank) as f64;
        let arg = 0.5 * (PI * (n as f64 - 1.0) - sum_delta);
        // |Z'(θ_j)| = ∏_{m≠j} |2 sin(Δ/2)|, summed in logs.
        let modulus: f64 = sorted
            .iter()
            .enumerate()
            .filter(|&(r, _)| r != rank)
            .map(|(_, &s)| (2.0 * (0.5 * (t - s)).sin().abs()).ln())
            .sum();
        let mut fsum = Complex64::new(0.0, 0.0);
        for (&(m, _), &(c, p)) in phase.terms.iter().zip(&power_sums) {
            fsum += c * Complex64::from_polar(1.0, m as f64 * t) * p;
        }
        fsum -= f0;
        out[order[rank]] = Complex64::new(modulus, FRAC_PI_2 + arg) + f0 + fsum;
    }
    out
}

/// Options for the hybrid Monte Carlo.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HybridMcOptions {
    pub sampler: Sampler,
    /// Nodes of the F_X table whose interpolant is used inside the loop.
    pub table_nodes: usize,
}

impl Default for HybridMcOptions {
    fn default() -> Self {
        Self { sampler: Sampler::Verblunsky, table_nodes: 256 }
    }
}

/// Monte Carlo estimate of E_N[(1/N) Σ_j Z'_{N,X}(θ_j)^k].
pub fn hybrid_moment_mc(params: &HybridParams, k: Complex64, samples: usize, seed: RngSeed) -> Result<Estimate> {
    hybrid_moment_mc_with(params, k, samples, seed, HybridMcOptions::default())
}

pub fn hybrid_moment_mc_with(
    params: &HybridParams,
    k: Complex64,
    samples: usize,
    seed: RngSeed,
    opts: HybridMcOptions,
) -> Result<Estimate> {
    if samples == 0 {
        return Err(invalid("at least one sample is required"));
    }
    let phase = FxTable::build(params, opts.table_nodes)?.interpolant(1e-14);
    let n = params.n;
    let mut e = monte_carlo(samples, seed.master, |_, rng| {
        if k == Complex64::new(0.0, 0.0) {
            return Complex64::new(1.0, 0.0);
        }
        let s = draw(n, opts.sampler, rng);
        let logs = log_z_nx_prime_all(&s, &phase);
        logs.iter().map(|l| (k * l).exp()).sum::<Complex64>() / n as f64
    });
    if k.re >= 0.0 {
        e.unstable_variance = false;
    } else if e.unstable_variance {
        log::warn!("heavy-tailed hybrid moment at k = {k}: batch variances disagree");
    }
    Ok(e)
}

fn check_k(k: Complex64) -> Result<()> {
    if k.im == 0.0 && k.re <= -3.0 && k.re.fract() == 0.0 {
        return Err(invalid(format!("k = {} is excluded (k ∉ {{−3, −4, ...}})", k.re)));
    }
    Ok(())
}

/// e^{ikπ/2} N^k / Γ(k + 2).
pub fn theorem13_prediction(k: Complex64, n: usize) -> Result<Complex64> {
    check_k(k)?;
    let n = n as f64;
    Ok((Complex64::new(0.0, FRAC_PI_2) * k).exp() * (k * n.ln()).exp() * recip_gamma(k + 2.0))
}

/// Singularity exponents γ, δ and the log-Fourier coefficients of the smooth
/// part of a Fisher–Hartwig symbol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FisherHartwigExponents {
    pub gamma: Complex64,
    pub delta: Complex64,
    pub smooth: FourierSeries,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EsAsymptotic {
    pub c1: Complex64,
    pub c2: Complex64,
    /// C_1 N^{γδ} C_2^{N−1}.
    pub value: Complex64,
}

/// D_{N−1}[f] ~ C_1 N^{γδ} C_2^{N−1} with
/// C_1 = G(1+γ)G(1+δ)/G(1+γ+δ) · e^{Σ m s_m s_{−m}} e^{−δ Σ s_m} e^{−γ Σ s_{−m}}
/// and C_2 = e^{s_0}.
pub fn ehrhardt_silbermann_asymptotic(ex: &FisherHartwigExponents, n: usize) -> Result<EsAsymptotic> {
    let gd = ex.gamma + ex.delta;
    if gd.im == 0.0 && gd.re <= -1.0 && gd.re.fract() == 0.0 {
        return Err(invalid("γ + δ must not be a negative integer"));
    }
    let s = &ex.smooth;
    let mut cross = Complex64::new(0.0, 0.0);
    let mut pos = Complex64::new(0.0, 0.0);
    let mut neg = Complex64::new(0.0, 0.0);
    for (&m, &v) in &s.coefficients {
        if m >= 1 {
            pos += v;
            cross += v * s.get(-m) * m as f64;
        } else if m <= -1 {
            neg += v;
        }
    }
    let g_ratio = barnes_g(1.0 + ex.gamma) * barnes_g(1.0 + ex.delta) / barnes_g(1.0 + gd);
    let c1 = g_ratio * (cross - ex.delta * pos - ex.gamma * neg).exp();
    let c2 = s.get(0).exp();
    let nf = n as f64;
    let value = c1 * (ex.gamma * ex.delta * nf.ln()).exp() * (c2.ln() * (nf - 1.0)).exp();
    Ok(EsAsymptotic { c1, c2, value })
}

/// The Theorem-13 leading term assembled from its ingredients:
/// e^{ikπ/2} e^{kF_X(0)} (1/N) D_{N−1} with γ = k + 1, δ = 1 and the
/// closed-form s_m. F_X(0) is evaluated directly, so agreement with
/// [`theorem13_prediction`] checks e^{kF_X(0)} = exp(Σ s_m) numerically.
pub fn assembled_prediction(params: &HybridParams, k: Complex64) -> Result<Complex64> {
    check_k(k)?;
    let ex = FisherHartwigExponents {
        gamma: k + 1.0,
        delta: Complex64::new(1.0, 0.0),
        smooth: FourierSeries::closed_form(params, k, 2)?,
    };
    let d = ehrhardt_silbermann_asymptotic(&ex, params.n)?;
    let f0 = params.f_x(0.0);
    Ok((Complex64::new(0.0, FRAC_PI_2) * k + k * f0).exp() * d.value / params.n as f64)
}
