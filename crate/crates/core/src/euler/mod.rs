//! Dirichlet-series algebra for the prime product
//! P_X(s) = exp(Σ_{n≤X} Λ(n)/log n · n^{−s}), its powers and derivatives.

mod arith;
mod dirichlet;
mod primes;

pub use arith::{
    arithmetic_factor_a, landau_main_term, n_of_t_formula, theorem8_prediction, power_sum_secondary_term, ArithmeticFactor,
    ErrorClass, Theorem8Prediction,
};
pub use dirichlet::{
    b_coefficients, default_cutoff, derivative_series, dirichlet_exp, exact_power_coefficients,
    log_p_x_series, p_x_derivative_eval, p_x_eval, p_x_power_eval, DirichletPolynomial,
};
pub use primes::{prime_powers_up_to, von_mangoldt, PrimeTable};

use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// Derivative orders (n_1, ..., n_k); zeros allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivativeSpec {
    pub orders: Vec<u32>,
}

impl DerivativeSpec {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.is_empty() {
            return Err(invalid("at least one order is required"));
        }
        Ok(Self { orders })
    }

    pub fn k(&self) -> usize {
        self.orders.len()
    }

    pub fn total_order(&self) -> u32 {
        self.orders.iter().sum()
    }
}
