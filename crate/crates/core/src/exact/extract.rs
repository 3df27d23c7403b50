use crate::error::{invalid, Error, Result};
use crate::numeric::ComplexSum;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Circle radius and node count for Cauchy-style Taylor coefficient
/// extraction. Variable r uses n_r + 1 + `extra_nodes` roots of unity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtractionConfig {
    pub radius: f64,
    pub extra_nodes: usize,
    /// Relative disagreement tolerated between the primary extraction and a
    /// second one on a circle of half the radius.
    pub tolerance: f64,
}

impl ExtractionConfig {
    /// The shifted expectation has exponential type about N in each shift,
    /// so the radius shrinks like 1/N to keep aliasing negligible.
    pub fn for_size(n: usize) -> Self {
        Self {
            radius: (1.0 / n.max(1) as f64).min(0.1),
            extra_nodes: 16,
            tolerance: 1e-8,
        }
    }
}

/// ∏ n_r! · [α_1^{n_1} ... α_k^{n_k}] f(α), i.e. the mixed partial derivative
/// of f at the origin.
pub fn coefficient_extract<F>(f: F, orders: &[u32], config: ExtractionConfig) -> Result<Complex64>
where
    F: Fn(&[Complex64]) -> Result<Complex64> + Sync,
{
    if orders.is_empty() {
        return Err(invalid("at least one order is required"));
    }
    let primary = extract_once(&f, orders, config.radius, config.extra_nodes)?;
    let check = extract_once(&f, orders, 0.5 * config.radius, config.extra_nodes)?;
    let scale = primary.norm().max(check.norm());
    let residual = if scale == 0.0 { 0.0 } else { (primary - check).norm() / scale };
    if residual > config.tolerance {
        return Err(Error::Accuracy {
            what: "coefficient extraction",
            residual,
            tolerance: config.tolerance,
        });
    }
    Ok(primary)
}

fn extract_once<F>(f: &F, orders: &[u32], radius: f64, extra: usize) -> Result<Complex64>
where
    F: Fn(&[Complex64]) -> Result<Complex64> + Sync,
{
    let sizes: Vec<usize> = orders.iter().map(|&n| n as usize + 1 + extra).collect();
    let total: usize = sizes.iter().product();
    let terms: Vec<Complex64> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rem = flat;
            let mut point = Vec::with_capacity(sizes.len());
            let mut weight = Complex64::new(1.0, 0.0);
            for (&m, &n) in sizes.iter().zip(orders) {
                let l = rem % m;
                rem /= m;
                let phase = TAU * l as f64 / m as f64;
                point.push(Complex64::from_polar(radius, phase));
                weight *= Complex64::from_polar(1.0, -phase * n as f64);
            }
            f(&point).map(|v| v * weight)
        })
        .collect::<Result<Vec<_>>>()?;
    let sum: ComplexSum = terms.into_iter().collect();
    let mut scale = 1.0 / total as f64;
    for &n in orders {
        scale *= factorial(n) / radius.powi(n as i32);
    }
    Ok(sum.value() * scale)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|j| j as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_polynomial_coefficients() {
        // f = 3 + 2a − 5ab² + a³b; ∂_a∂_b² f = −10.
        let f = |x: &[Complex64]| Ok(3.0 + 2.0 * x[0] - 5.0 * x[0] * x[1] * x[1] + x[0].powi(3) * x[1]);
        let cfg = ExtractionConfig { radius: 0.1, extra_nodes: 4, tolerance: 1e-8 };
        let v = coefficient_extract(f, &[1, 2], cfg).unwrap();
        assert!((v - Complex64::new(-10.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn entire_function_derivatives() {
        let f = |x: &[Complex64]| Ok((x[0] * 3.0).exp());
        let v = coefficient_extract(f, &[4], ExtractionConfig::for_size(3)).unwrap();
        assert!((v.re - 81.0).abs() < 1e-9 && v.im.abs() < 1e-9);
    }

    #[test]
    fn reports_aliasing_as_accuracy_failure() {
        let f = |x: &[Complex64]| Ok((x[0] * 400.0).exp());
        let cfg = ExtractionConfig { radius: 0.1, extra_nodes: 2, tolerance: 1e-8 };
        assert!(matches!(coefficient_extract(f, &[1], cfg), Err(Error::Accuracy { .. })));
    }
}
