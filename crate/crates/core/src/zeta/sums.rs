//! Sums over zeros: discrete moments of ζ^{(n)}, P_X sums and the Landau sum,
//! each reduced in index order so results do not depend on the thread count.

use super::dataset::ZeroDataset;
use super::eval::{em_tail, jet_to_derivatives, ZetaEvalConfig, MAX_DERIVATIVE_ORDER};
use crate::error::{invalid, Result};
use crate::euler::{landau_main_term, n_of_t_formula, p_x_derivative_eval, p_x_power_eval, DerivativeSpec};
use crate::numeric::special::recip_gamma;
use crate::numeric::ComplexSum;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

const CHUNK: usize = 1024;

/// Σ_{i<len} f(i) with compensated chunk sums merged in index order.
pub(crate) fn ordered_sum<F>(len: usize, f: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    let chunks: Vec<ComplexSum> = (0..len.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = ComplexSum::new();
            for i in c * CHUNK..((c + 1) * CHUNK).min(len) {
                acc.add(f(i));
            }
            acc
        })
        .collect();
    let mut total = ComplexSum::new();
    for c in &chunks {
        total.merge(c);
    }
    total.value()
}

/// ln n and n^{−1/2}, shared by all critical-line evaluations.
struct LogTable {
    ln: Vec<f64>,
    rsqrt: Vec<f64>,
}

impl LogTable {
    fn new(max_n: usize) -> Self {
        let ln = (0..max_n).map(|n| if n == 0 { 0.0 } else { (n as f64).ln() }).collect();
        let rsqrt = (0..max_n).map(|n| if n == 0 { 0.0 } else { 1.0 / (n as f64).sqrt() }).collect();
        Self { ln, rsqrt }
    }
}

/// Taylor jet of ζ(1/2 + iγ + h) from the differentiated Euler–Maclaurin sum.
fn critical_line_jet(gamma: f64, order: usize, config: &ZetaEvalConfig, table: &LogTable) -> Vec<Complex64> {
    let s = Complex64::new(0.5, gamma);
    let n0 = config.truncation(s);
    let mut power_sums = vec![Complex64::new(0.0, 0.0); order + 1];
    for n in 1..n0 {
        let l = table.ln[n];
        let (sin, cos) = (gamma * l).sin_cos();
        let mut w = Complex64::new(cos, -sin) * table.rsqrt[n];
        for p in power_sums.iter_mut() {
            *p += w;
            w *= l;
        }
    }
    let mut jet = Vec::with_capacity(order + 1);
    let mut scale = 1.0;
    for (j, p) in power_sums.into_iter().enumerate() {
        if j > 0 {
            scale *= -1.0 / j as f64;
        }
        jet.push(p * scale);
    }
    for (h, t) in jet.iter_mut().zip(em_tail(s, order, n0, config.bernoulli_terms)) {
        *h += t;
    }
    jet
}

/// ζ^{(n)}(1/2 + iγ) for n = 0..=max_order at each of the first zeros.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZetaDerivativeTable {
    pub ordinates: Vec<f64>,
    pub max_order: u32,
    /// values[i][n] = ζ^{(n)}(1/2 + iγ_i).
    pub values: Vec<Vec<Complex64>>,
}

impl ZetaDerivativeTable {
    pub fn new(dataset: &ZeroDataset, count: usize, max_order: u32, config: &ZetaEvalConfig) -> Result<Self> {
        config.validate()?;
        if max_order > MAX_DERIVATIVE_ORDER {
            return Err(invalid(format!("derivative order {max_order} exceeds {MAX_DERIVATIVE_ORDER}")));
        }
        let ordinates: Vec<f64> = dataset.ordinates.iter().copied().take(count).collect();
        let top = ordinates.last().copied().unwrap_or(0.0);
        let table = LogTable::new(config.truncation(Complex64::new(0.5, top)) + 1);
        let values = ordinates
            .par_iter()
            .map(|&g| jet_to_derivatives(critical_line_jet(g, max_order as usize, config, &table)))
            .collect();
        Ok(Self { ordinates, max_order, values })
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Σ_{i<count} ∏_r ζ^{(n_r)}(ρ_i).
    pub fn moment_sum(&self, orders: &[u32], count: usize) -> Result<Complex64> {
        if count > self.len() {
            return Err(invalid(format!("table holds {} zeros, {count} requested", self.len())));
        }
        if let Some(&n) = orders.iter().find(|&&n| n > self.max_order) {
            return Err(invalid(format!("order {n} exceeds the tabulated {}", self.max_order)));
        }
        Ok(ordered_sum(count, |i| {
            orders.iter().fold(Complex64::new(1.0, 0.0), |acc, &n| acc * self.values[i][n as usize])
        }))
    }

    /// Report for the first `count` zeros, taking T at the count-th ordinate.
    pub fn report(&self, orders: &[u32], count: usize) -> Result<DiscreteMomentReport> {
        if count == 0 {
            return Err(invalid("empty range: no zeros below T"));
        }
        let t = self.ordinates[count - 1];
        let sum = self.moment_sum(orders, count)?;
        DiscreteMomentReport::assemble(orders, t, count, sum)
    }
}

/// (1/N(T)) Σ_{0<γ≤T} ∏ ζ^{(n_r)}(ρ) with predictions under both log(T/2π)
/// and log T normalizations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMomentReport {
    pub orders: Vec<u32>,
    pub t: f64,
    /// Empirical N(T).
    pub count: usize,
    /// (T/2π) log(T/2πe) for comparison.
    pub count_formula: f64,
    pub sum: Complex64,
    pub normalized: Complex64,
    /// Leading-order prediction with log(T/2π).
    pub prediction: Complex64,
    pub ratio: Complex64,
    /// The same prediction with log T in place of log(T/2π).
    pub prediction_log_t: Complex64,
    pub ratio_log_t: Complex64,
}

impl DiscreteMomentReport {
    fn assemble(orders: &[u32], t: f64, count: usize, sum: Complex64) -> Result<Self> {
        let normalized = sum / count as f64;
        let prediction = conjecture_prediction(orders, t)?;
        let prediction_log_t = conjecture_prediction_with_log(orders, t.ln())?;
        Ok(Self {
            orders: orders.to_vec(),
            t,
            count,
            count_formula: n_of_t_formula(t),
            sum,
            normalized,
            prediction,
            ratio: normalized / prediction,
            prediction_log_t,
            ratio_log_t: normalized / prediction_log_t,
        })
    }

    /// |normalized/prediction − 1| under the log(T/2π) normalization.
    pub fn deviation(&self) -> f64 {
        (self.ratio - 1.0).norm()
    }
}

/// Discrete moment over all zeros with γ ≤ T.
pub fn discrete_moment(
    dataset: &ZeroDataset,
    orders: &[u32],
    t: f64,
    config: &ZetaEvalConfig,
) -> Result<DiscreteMomentReport> {
    match dataset.max_ordinate() {
        Some(top) if t <= top => {}
        _ => return Err(invalid(format!("T = {t} lies beyond the dataset"))),
    }
    let count = dataset.n_of_t(t);
    if count == 0 {
        return Err(invalid("empty range: no zeros below T"));
    }
    let max_order = orders.iter().copied().max().unwrap_or(0);
    let table = ZetaDerivativeTable::new(dataset, count, max_order, config)?;
    let sum = table.moment_sum(orders, count)?;
    DiscreteMomentReport::assemble(orders, t, count, sum)
}

/// Leading-order mixed moment of ζ derivatives at zeros, normalized by log(T/2π):
/// (−1)^{Σn+k} ∏n_r!/(Σn+1)! · log(T/2π)^{Σn}. Empty orders give 1.
pub fn conjecture_prediction(orders: &[u32], t: f64) -> Result<Complex64> {
    if !(t > TAU) {
        return Err(invalid("height T must exceed 2π"));
    }
    conjecture_prediction_with_log(orders, (t / TAU).ln())
}

/// As [`conjecture_prediction`] with an arbitrary log-height L.
pub fn conjecture_prediction_with_log(orders: &[u32], log_height: f64) -> Result<Complex64> {
    if orders.contains(&0) {
        return Err(invalid("orders must be positive integers"));
    }
    let total: u32 = orders.iter().sum();
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    let sign = if (total as usize + orders.len()) % 2 == 0 { 1.0 } else { -1.0 };
    let num: f64 = orders.iter().map(|&n| fact(n)).product();
    let value = sign * num / fact(total + 1) * log_height.powi(total as i32);
    Ok(Complex64::new(value, 0.0))
}

/// Complex-k prediction for the first derivative: log(T/2π)^k / Γ(k+2), Re k > −3.
pub fn complex_power_prediction(k: Complex64, t: f64) -> Result<Complex64> {
    if !(k.re > -3.0) {
        return Err(invalid(format!("Re k must exceed −3, got {}", k.re)));
    }
    if !(t > TAU) {
        return Err(invalid("height T must exceed 2π"));
    }
    let l = Complex64::new((t / TAU).ln(), 0.0);
    Ok(l.powc(k) * recip_gamma(k + 2.0))
}

fn zero_count(dataset: &ZeroDataset, t: f64) -> Result<usize> {
    let count = dataset.n_of_t(t);
    if count == 0 {
        return Err(invalid("empty range: no zeros below T"));
    }
    Ok(count)
}

/// Σ_{0<γ≤T} P_X^{(n_1)}(ρ)···P_X^{(n_k)}(ρ).
pub fn p_x_sum_over_zeros(dataset: &ZeroDataset, x: f64, spec: &DerivativeSpec, t: f64) -> Result<Complex64> {
    let count = zero_count(dataset, t)?;
    let max_order = spec.orders.iter().copied().max().unwrap_or(0);
    p_x_derivative_eval(x, max_order, Complex64::new(0.5, 1.0))?;
    Ok(ordered_sum(count, |i| {
        let rho = Complex64::new(0.5, dataset.ordinates[i]);
        let d = p_x_derivative_eval(x, max_order, rho).expect("validated cutoff");
        spec.orders.iter().fold(Complex64::new(1.0, 0.0), |acc, &n| acc * d[n as usize])
    }))
}

/// Σ_{0<γ≤T} P_X(ρ)^k for complex k.
pub fn p_x_power_sum_over_zeros(dataset: &ZeroDataset, x: f64, k: Complex64, t: f64) -> Result<Complex64> {
    let count = zero_count(dataset, t)?;
    p_x_power_eval(x, k, Complex64::new(0.5, 1.0))?;
    Ok(ordered_sum(count, |i| {
        p_x_power_eval(x, k, Complex64::new(0.5, dataset.ordinates[i])).expect("validated cutoff")
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandauReport {
    pub m: u64,
    pub t: f64,
    pub count: usize,
    /// Σ_{0<γ≤T} m^{−1/2−iγ}.
    pub empirical: Complex64,
    /// −(T/2π) Λ(m)/m.
    pub predicted: f64,
}

impl LandauReport {
    pub fn relative_deviation(&self) -> f64 {
        (self.empirical / self.predicted - 1.0).norm()
    }
}

/// Σ_{0<γ≤T} m^{−ρ} against its main term.
pub fn landau_empirical(dataset: &ZeroDataset, m: u64, t: f64) -> Result<LandauReport> {
    let predicted = landau_main_term(m, t)?;
    let count = zero_count(dataset, t)?;
    let l = (m as f64).ln();
    let scale = 1.0 / (m as f64).sqrt();
    let empirical = ordered_sum(count, |i| Complex64::from_polar(scale, -dataset.ordinates[i] * l));
    Ok(LandauReport { m, t, count, empirical, predicted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::eval::zeta_derivatives_direct;

    #[test]
    fn ordered_sum_matches_serial() {
        let f = |i: usize| Complex64::new(1.0 / (i as f64 + 1.0), (i as f64).sin());
        let serial: Complex64 = (0..5000).map(f).sum();
        assert!((ordered_sum(5000, f) - serial).norm() < 1e-12);
        assert_eq!(ordered_sum(0, f), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn fast_jet_matches_generic() {
        let cfg = ZetaEvalConfig::bulk();
        let g = 1234.5;
        let table = LogTable::new(cfg.truncation(Complex64::new(0.5, g)) + 1);
        let fast = jet_to_derivatives(critical_line_jet(g, 3, &cfg, &table));
        let generic = zeta_derivatives_direct(Complex64::new(0.5, g), 3, &cfg).unwrap();
        for (a, b) in fast.iter().zip(&generic) {
            assert!((a - b).norm() < 1e-10 * b.norm().max(1.0));
        }
    }

    #[test]
    fn predictions() {
        let t = 1000.0;
        let l = (t / TAU).ln();
        assert!((conjecture_prediction(&[1], t).unwrap().re - 0.5 * l).abs() < 1e-12);
        assert!((conjecture_prediction(&[2], t).unwrap().re + l * l / 3.0).abs() < 1e-12);
        assert!((conjecture_prediction(&[1, 1], t).unwrap().re - l * l / 6.0).abs() < 1e-12);
        assert_eq!(conjecture_prediction(&[], t).unwrap(), Complex64::new(1.0, 0.0));
        assert!(conjecture_prediction(&[0], t).is_err());
        let m1 = complex_power_prediction(Complex64::new(-1.0, 0.0), t).unwrap();
        assert!((m1.re - 1.0 / l).abs() < 1e-12);
        assert_eq!(complex_power_prediction(Complex64::new(-2.0, 0.0), t).unwrap().norm(), 0.0);
        assert!(complex_power_prediction(Complex64::new(-3.0, 0.0), t).is_err());
        let c1 = complex_power_prediction(Complex64::new(1.0, 0.0), t).unwrap();
        assert!((c1 - conjecture_prediction(&[1], t).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn landau_rejects_m_one() {
        let d = ZeroDataset::parse("14.134725141734694\n", "t", None).unwrap();
        assert!(landau_empirical(&d, 1, 20.0).is_err());
        assert!(landau_empirical(&d, 2, 10.0).is_err());
    }
}
