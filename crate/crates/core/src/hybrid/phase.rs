use super::kernel::SmoothingKernel;
use crate::error::{invalid, Result};
use crate::numeric::special::EULER_GAMMA;
use crate::numeric::ComplexSum;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

/// Terms of the periodized U-sum below this size end the j-loop.
const J_TAIL: f64 = 1e-13;
const J_MIN: i64 = 3;
const J_MAX: i64 = 20_000;

/// Cutoff X, matrix size N and smoothing kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HybridParams {
    pub x: f64,
    pub n: usize,
    pub kernel: SmoothingKernel,
}

impl HybridParams {
    pub fn new(x: f64, n: usize, kernel: SmoothingKernel) -> Result<Self> {
        if !(x >= 2.0) || !x.is_finite() {
            return Err(invalid(format!("cutoff X must be at least 2, got {x}")));
        }
        if n == 0 {
            return Err(invalid("matrix size N must be at least 1"));
        }
        Ok(Self { x, n, kernel })
    }

    /// Convenience constructor from log X and Y.
    pub fn from_log_x(log_x: f64, y: f64, n: usize) -> Result<Self> {
        Self::new(log_x.exp(), n, SmoothingKernel::new(y)?)
    }

    pub fn log_x(&self) -> f64 {
        self.x.ln()
    }

    /// Σ_{j≠0} g(j), summing ±j pairs until two consecutive pairs are
    /// negligible.
    fn j_sum<G: Fn(i64) -> Complex64>(&self, g: G) -> Complex64 {
        let mut sum = ComplexSum::new();
        let mut small = 0;
        for j in 1..=J_MAX {
            let pair = g(j) + g(-j);
            sum.add(pair);
            if pair.norm() < J_TAIL {
                small += 1;
                if small >= 2 && j >= J_MIN {
                    return sum.value();
                }
            } else {
                small = 0;
            }
        }
        log::warn!("periodized sum truncated at |j| = {J_MAX}");
        sum.value()
    }

    /// F_X(ϑ) = −log(1 − e^{−iϑ}) − Σ_j U(i(ϑ + 2πj) log X), a 2π-periodic
    /// C¹ function.
    pub fn f_x(&self, theta: f64) -> Complex64 {
        self.f_x_centered(reduce_symmetric(theta))
    }

    /// Evaluation with the j-window centred on the given ϑ, without reducing
    /// it into (−π, π] first.
    pub(crate) fn f_x_centered(&self, t: f64) -> Complex64 {
        let l = self.log_x();
        let k = &self.kernel;
        let tail = self.j_sum(|j| k.big_u_unchecked(Complex64::new(0.0, (t + TAU * j as f64) * l)));
        if t.abs() < 1e-3 {
            // −log(1 − e^{−iϑ}) − U(iϑL) with both logarithms cancelled.
            let half = 0.5 * t;
            let ln_sinc = if half == 0.0 { 0.0 } else { (half.sin() / half).ln() };
            l.ln() + EULER_GAMMA + k.mean_log_v() - k.ein_average(Complex64::new(0.0, t * l))
                + Complex64::new(-ln_sinc, 0.5 * t)
                - tail
        } else {
            let one = Complex64::new(1.0, 0.0);
            -(one - Complex64::from_polar(1.0, -t)).ln()
                - k.big_u_unchecked(Complex64::new(0.0, t * l))
                - tail
        }
    }

    /// dF_X/dϑ = −i/(e^{iϑ} − 1) + Σ_j (ϑ + 2πj)^{−1} ∫ f(w) e^{−i(ϑ+2πj)L v(w)} dw.
    pub fn f_x_derivative(&self, theta: f64) -> Complex64 {
        let t = reduce_symmetric(theta);
        let l = self.log_x();
        let k = &self.kernel;
        let tail = self.j_sum(|j| {
            let s = t + TAU * j as f64;
            k.laplace(Complex64::new(0.0, s * l)) / s
        });
        if t.abs() < 1e-3 {
            // −i/(e^{iϑ} − 1) + 1/ϑ = i/2 + ϑ/12 + ϑ³/720 + ...
            let bracket = Complex64::new(t / 12.0 + t.powi(3) / 720.0, 0.5);
            bracket + k.laplace_difference_quotient(t, l) + tail
        } else {
            let i = Complex64::i();
            -i / (Complex64::from_polar(1.0, t) - 1.0) + k.laplace(Complex64::new(0.0, t * l)) / t + tail
        }
    }
}

/// Maps an angle into (−π, π].
pub fn reduce_symmetric(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Log-Fourier coefficients s_m of the smooth factor.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FourierSeries {
    pub coefficients: BTreeMap<i64, Complex64>,
}

impl FourierSeries {
    pub fn get(&self, m: i64) -> Complex64 {
        self.coefficients.get(&m).copied().unwrap_or_default()
    }

    /// Closed-form coefficients for m in [−margin, ⌈log X⌉ + margin].
    pub fn closed_form(params: &HybridParams, k: Complex64, margin: i64) -> Result<Self> {
        let top = params.log_x().ceil() as i64 + margin;
        let mut coefficients = BTreeMap::new();
        for m in -margin..=top {
            coefficients.insert(m, s_m_closed_form(params, k, m)?);
        }
        Ok(Self { coefficients })
    }
}

/// s_m = (k/m)(1 − ∫_1^{e^{m/log X}} u) for 1 ≤ m < log X, and 0 otherwise.
pub fn s_m_closed_form(params: &HybridParams, k: Complex64, m: i64) -> Result<Complex64> {
    let l = params.log_x();
    if m <= 0 || m as f64 >= l {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mass = params.kernel.mass(1.0, (m as f64 / l).exp())?;
    Ok(k * ((1.0 - mass) / m as f64))
}

/// F_X sampled at ϑ_ℓ = 2πℓ/M.
#[derive(Clone, Debug, PartialEq)]
pub struct FxTable {
    pub values: Vec<Complex64>,
}

impl FxTable {
    /// Uses F_X(−ϑ) = conj F_X(ϑ) (the kernel is real) to evaluate only half
    /// the nodes.
    pub fn build(params: &HybridParams, nodes: usize) -> Result<Self> {
        if nodes < 2 {
            return Err(invalid("at least two nodes are required"));
        }
        let half = nodes / 2;
        let first: Vec<Complex64> = (0..=half)
            .into_par_iter()
            .map(|l| params.f_x(TAU * l as f64 / nodes as f64))
            .collect();
        let mut values = vec![Complex64::new(0.0, 0.0); nodes];
        for (l, v) in first.iter().enumerate() {
            values[l] = *v;
            if l > 0 && l < nodes {
                values[nodes - l] = v.conj();
            }
        }
        // For even M the node at π is its own mirror; keep the computed value.
        if nodes % 2 == 0 {
            values[half] = first[half];
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// (k/M) Σ_ℓ F_X(−ϑ_ℓ) e^{−imϑ_ℓ}: the periodic trapezoid rule for
    /// (1/2π) ∫ k F_X(−ϑ) e^{−imϑ} dϑ.
    pub fn s_m(&self, k: Complex64, m: i64) -> Complex64 {
        let n = self.values.len();
        let mut sum = ComplexSum::new();
        for l in 0..n {
            let v = self.values[(n - l) % n];
            let phase = -TAU * ((m * l as i64).rem_euclid(n as i64)) as f64 / n as f64;
            sum.add(v * Complex64::from_polar(1.0, phase));
        }
        k * (sum.value() / n as f64)
    }

    /// Trigonometric interpolant Σ_m c_m e^{imϑ}, keeping |c_m| > `drop_below`.
    pub fn interpolant(&self, drop_below: f64) -> TrigPolynomial {
        let n = self.values.len() as i64;
        let mut terms = Vec::new();
        for m in -(n / 2) + 1..=n / 2 {
            // c_m = (1/M) Σ F(ϑ_ℓ) e^{−imϑ_ℓ} = s_{−m}(k = 1).
            let c = self.s_m(Complex64::new(1.0, 0.0), -m);
            if c.norm() > drop_below {
                terms.push((m, c));
            }
        }
        TrigPolynomial { terms }
    }
}

/// Σ_m c_m e^{imϑ} over a sparse set of frequencies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPolynomial {
    pub terms: Vec<(i64, Complex64)>,
}

impl TrigPolynomial {
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(m, c)| c * Complex64::from_polar(1.0, m as f64 * theta))
            .sum()
    }
}

/// s_m by trapezoid quadrature of F_X on 2¹² nodes.
pub fn s_m_numeric(params: &HybridParams, k: Complex64, m: i64) -> Result<Complex64> {
    Ok(FxTable::build(params, 1 << 12)?.s_m(k, m))
}
