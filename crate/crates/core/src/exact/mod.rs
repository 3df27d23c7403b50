//! Exact finite-N shifted expectations E_N[(1/N) Σ_m ∏_r Z(θ_m + α_r)] and
//! the mixed derivative moments obtained from their Taylor coefficients.

mod extract;
mod moment;
mod shifted;

pub use extract::{coefficient_extract, ExtractionConfig};
pub use moment::{
    exact_moment, simplex_integral, simplex_integral_mc, theorem3_prediction, ExactMoment,
};
pub use shifted::{
    basor_forrester, basor_forrester_expectation, relative_difference, shifted_expectation_sum,
    symbol_coefficients, toeplitz_determinant, toeplitz_expectation, LaurentSymbol,
    RICHARDSON_OFFSETS,
};

use crate::error::{invalid, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which formula evaluates the shifted expectation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftedRoute {
    /// The nested sum over j_1 + ... + j_k ≤ N − 1.
    NestedSum,
    /// Heine identity with an N × N Toeplitz determinant.
    Toeplitz,
    /// (k+2)-point Basor–Forrester determinant, Richardson-extrapolated.
    BasorForrester,
}

/// E_N[(1/N) Σ_m ∏_r Z(θ_m + α_r)] by the chosen route.
pub fn shifted_expectation(n: usize, shifts: &ShiftVector, route: ShiftedRoute) -> Result<Complex64> {
    match route {
        ShiftedRoute::NestedSum => shifted_expectation_sum(n, shifts),
        ShiftedRoute::Toeplitz => toeplitz_expectation(n, shifts),
        ShiftedRoute::BasorForrester => basor_forrester_expectation(n, shifts),
    }
}

/// E_N[(1/N) Σ_m ∏_r Z^{(n_r)}(θ_m)] as the mixed α-derivative of the shifted
/// expectation at α = 0.
pub fn extracted_moment(spec: &MixedMomentSpec, route: ShiftedRoute) -> Result<Complex64> {
    let n = spec.n;
    coefficient_extract(
        |alpha: &[Complex64]| shifted_expectation(n, &ShiftVector::new(alpha.to_vec()), route),
        &spec.orders,
        ExtractionConfig::for_size(n),
    )
}

/// Matrix size N and derivative orders (n_1, ..., n_k), all positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MixedMomentSpec {
    pub n: usize,
    pub orders: Vec<u32>,
}

impl MixedMomentSpec {
    pub fn new(n: usize, orders: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("matrix size N must be at least 1"));
        }
        if orders.is_empty() {
            return Err(invalid("at least one derivative order is required"));
        }
        if orders.contains(&0) {
            return Err(invalid("derivative orders must be positive"));
        }
        Ok(Self { n, orders })
    }

    pub fn k(&self) -> usize {
        self.orders.len()
    }

    pub fn total_order(&self) -> u32 {
        self.orders.iter().sum()
    }
}

/// Shifts α_r and the derived points A_r = e^{iα_r}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftVector {
    pub shifts: Vec<Complex64>,
}

impl ShiftVector {
    pub fn new(shifts: Vec<Complex64>) -> Self {
        Self { shifts }
    }

    pub fn real(shifts: &[f64]) -> Self {
        Self::new(shifts.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn points(&self) -> Vec<Complex64> {
        self.shifts.iter().map(|a| (Complex64::i() * a).exp()).collect()
    }
}
