use super::primes::{von_mangoldt, PrimeTable};
use super::DerivativeSpec;
use crate::error::{invalid, Result};
use crate::numeric::NeumaierSum;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, TAU};

/// Main term of the zero-counting function, (T/2π) log(T/2πe).
pub fn n_of_t_formula(t: f64) -> f64 {
    t / TAU * (t / (TAU * E)).ln()
}

/// −(T/2π) Λ(m)/m, the main term of Σ_{0<γ≤T} m^{−ρ}.
pub fn landau_main_term(m: u64, t: f64) -> Result<f64> {
    if m < 2 {
        return Err(invalid("the Landau main term does not apply for m = 1"));
    }
    if !(t > 1.0) {
        return Err(invalid("height T must exceed 1"));
    }
    Ok(-t / TAU * von_mangoldt(m) / m as f64)
}

/// Second term of Σ_{0<γ≤T} P_X(ρ)^k obtained by applying Landau's formula
/// to every prime power in the Dirichlet series of P_X^k:
/// −(T/2π) Σ_{p≤X} log p Σ_{e≥1} a_k(p^e)/p^e.
///
/// It is of exact order T, so it is what the O(T log log T) error absorbs.
pub fn power_sum_secondary_term(x: f64, k: f64, t: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return Err(invalid("cutoff X must be at least 2"));
    }
    if !(t > 1.0) {
        return Err(invalid("height T must exceed 1"));
    }
    let table = PrimeTable::new(x.floor() as u64);
    let mut total = NeumaierSum::new();
    for &p in &table.primes {
        let pf = p as f64;
        let jmax = (x.ln() / pf.ln()).floor() as usize;
        let mut e_coef = vec![1.0];
        let mut local = 0.0;
        let mut weight = 1.0;
        for e in 1..=4000usize {
            let acc: f64 = (1..=jmax.min(e)).map(|j| e_coef[e - j]).sum();
            let c = k * acc / e as f64;
            e_coef.push(c);
            weight /= pf;
            let term = c * weight;
            local += term;
            if e > jmax && term.abs() < 1e-17 * local.abs().max(1e-300) {
                break;
            }
        }
        total.add(pf.ln() * local);
    }
    Ok(-t / TAU * total.value())
}

/// Size class of the error term in Σ_γ ∏ P_X^{(n_r)}(ρ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorClass {
    /// All orders zero: N(T) + O(T log log T).
    AllZero,
    /// Exactly one nonzero order n_1: O(T (log log T)^{1+n_1}).
    OneNonzero { exponent: u32 },
    /// Two or more nonzero orders: O(T).
    ManyNonzero,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem8Prediction {
    pub main: f64,
    pub class: ErrorClass,
}

/// Main term and error class for Σ_{0<γ≤T} P_X^{(n_1)}(ρ)···P_X^{(n_k)}(ρ).
pub fn theorem8_prediction(x: f64, spec: &DerivativeSpec, t: f64) -> Result<Theorem8Prediction> {
    if !(x > 2.0) {
        return Err(invalid("cutoff X must exceed 2"));
    }
    if !(t > 1.0) {
        return Err(invalid("height T must exceed 1"));
    }
    if x > 4.0 * t.ln() {
        log::warn!("X = {x} is well outside the X = O(log T) regime at T = {t}");
    }
    let nonzero: Vec<u32> = spec.orders.iter().copied().filter(|&n| n > 0).collect();
    Ok(match nonzero.len() {
        0 => Theorem8Prediction { main: n_of_t_formula(t), class: ErrorClass::AllZero },
        1 => Theorem8Prediction { main: 0.0, class: ErrorClass::OneNonzero { exponent: 1 + nonzero[0] } },
        _ => Theorem8Prediction { main: 0.0, class: ErrorClass::ManyNonzero },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArithmeticFactor {
    pub value: f64,
    /// Largest prime included.
    pub prime_bound: u64,
    /// Bound on |log| of the omitted tail of the product.
    pub tail_bound: f64,
}

const MAX_PRIME_BOUND: u64 = 10_000_000;

/// a(k) = ∏_p (1 − 1/p)^{k²} Σ_{m≥0} (Γ(m+k)/(m! Γ(k)))² p^{−m}.
///
/// The log of each factor is −k²(k−1)²/(4p²) + O(p^{−3}), so the primes
/// beyond P contribute at most about k²(k−1)²/4 · 1.3/(P log P).
pub fn arithmetic_factor_a(k: f64, target: f64) -> Result<ArithmeticFactor> {
    if !(k > -0.5) {
        return Err(invalid("the Euler product converges only for k > −1/2"));
    }
    if !(target > 0.0) {
        return Err(invalid("precision target must be positive"));
    }
    let c = 1.3 * (k * k * (k - 1.0) * (k - 1.0) / 4.0 + 1e-3 * k.abs().powi(3).max(1e-300));
    let mut p_bound = 100u64;
    while c / (p_bound as f64 * (p_bound as f64).ln()) > target && p_bound < MAX_PRIME_BOUND {
        p_bound = (p_bound * 2).min(MAX_PRIME_BOUND);
    }
    let table = PrimeTable::new(p_bound);
    let mut log_sum = NeumaierSum::new();
    for &p in &table.primes {
        log_sum.add(log_euler_factor(k, p as f64));
    }
    let tail_bound = c / (p_bound as f64 * (p_bound as f64).ln());
    if tail_bound > target {
        log::warn!("a({k}): tail bound {tail_bound:e} above target {target:e} at the prime cap");
    }
    Ok(ArithmeticFactor { value: log_sum.value().exp(), prime_bound: p_bound, tail_bound })
}

fn log_euler_factor(k: f64, p: f64) -> f64 {
    let x = 1.0 / p;
    let mut d = 1.0;
    let mut xm = 1.0;
    let mut rest = 0.0;
    for m in 0..10_000 {
        d *= (m as f64 + k) / (m as f64 + 1.0);
        xm *= x;
        let term = d * d * xm;
        rest += term;
        if term.abs() < 1e-17 * (1.0 + rest.abs()) {
            break;
        }
    }
    k * k * (-x).ln_1p() + rest.ln_1p()
}
