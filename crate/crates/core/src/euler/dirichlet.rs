use super::primes::prime_powers_up_to;
use super::DerivativeSpec;
use crate::error::{invalid, Result};
use crate::numeric::ComplexSum;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Σ_{m=1}^{M} c_m m^{−s}. `coefficients[m − 1]` holds c_m.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletPolynomial {
    pub coefficients: Vec<Complex64>,
}

impl DirichletPolynomial {
    pub fn zeros(cutoff: usize) -> Self {
        Self { coefficients: vec![Complex64::new(0.0, 0.0); cutoff] }
    }

    pub fn cutoff(&self) -> usize {
        self.coefficients.len()
    }

    /// c_m, zero beyond the cutoff.
    pub fn get(&self, m: usize) -> Complex64 {
        if m == 0 || m > self.coefficients.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[m - 1]
        }
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = ComplexSum::new();
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.norm() != 0.0 {
                acc.add(c * (-s * ((i + 1) as f64).ln()).exp());
            }
        }
        acc.value()
    }

    /// Dirichlet convolution truncated at `cutoff`.
    pub fn convolve(&self, other: &Self, cutoff: usize) -> Self {
        let coefficients = (1..=cutoff)
            .into_par_iter()
            .map(|m| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut d = 1;
                while d * d <= m {
                    if m % d == 0 {
                        let e = m / d;
                        acc += self.get(d) * other.get(e);
                        if e != d {
                            acc += self.get(e) * other.get(d);
                        }
                    }
                    d += 1;
                }
                acc
            })
            .collect();
        Self { coefficients }
    }
}

/// Λ(n)/log n for n ≤ X: 1/j at n = p^j.
pub fn log_p_x_series(x: f64) -> Result<DirichletPolynomial> {
    if !(x >= 2.0) {
        return Err(invalid(format!("cutoff X must be at least 2, got {x}")));
    }
    let xi = x.floor() as u64;
    let mut out = DirichletPolynomial::zeros(xi as usize);
    for (q, _, j) in prime_powers_up_to(xi) {
        out.coefficients[q as usize - 1] = Complex64::new(1.0 / j as f64, 0.0);
    }
    Ok(out)
}

/// Coefficients of exp(k·S) for a series S with c_1 = 0, from
/// a(m) log m = Σ_{d|m, d>1} k c(d) log d · a(m/d).
pub fn dirichlet_exp(series: &DirichletPolynomial, k: Complex64, cutoff: usize) -> Result<DirichletPolynomial> {
    if series.get(1).norm() != 0.0 {
        return Err(invalid("series must vanish at m = 1"));
    }
    if cutoff < series.cutoff() {
        return Err(invalid(format!(
            "cutoff {cutoff} is below the series length {}; terms would be dropped",
            series.cutoff()
        )));
    }
    let support: Vec<(usize, Complex64)> = (2..=series.cutoff())
        .filter(|&d| series.get(d).norm() != 0.0)
        .map(|d| (d, k * series.get(d) * (d as f64).ln()))
        .collect();
    let mut a = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    a[1] = Complex64::new(1.0, 0.0);
    for m in 2..=cutoff {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(d, w) in &support {
            if d > m {
                break;
            }
            if m % d == 0 {
                acc += w * a[m / d];
            }
        }
        a[m] = acc / (m as f64).ln();
    }
    a.remove(0);
    Ok(DirichletPolynomial { coefficients: a })
}

/// a_k(m) for m ≤ cutoff in exact rational arithmetic, from the Euler
/// factors exp(k Σ_{j≤J_p} x^j/j) with p^{J_p} ≤ X < p^{J_p+1}.
pub fn exact_power_coefficients(x: u64, k: &BigRational, cutoff: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); cutoff + 1];
    out[1] = BigRational::one();
    for m in 2..=cutoff {
        let mut rest = m as u64;
        let mut value = BigRational::one();
        let mut p = 2u64;
        while rest > 1 {
            if p * p > rest {
                p = rest;
            }
            if rest % p == 0 {
                let mut e = 0u32;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                if p > x {
                    value = BigRational::zero();
                    break;
                }
                let mut jmax = 0u32;
                let mut q = p;
                while q <= x {
                    jmax += 1;
                    q *= p;
                }
                value *= local_exp_coefficient(k, jmax, e);
            }
            p += 1;
        }
        out[m] = value;
    }
    out.remove(0);
    out
}

/// [x^e] exp(k Σ_{j=1}^{J} x^j/j), from e·E_e = k Σ_{j=1}^{min(e,J)} E_{e−j}.
fn local_exp_coefficient(k: &BigRational, jmax: u32, e: u32) -> BigRational {
    let mut c = vec![BigRational::one()];
    for n in 1..=e as usize {
        let mut acc = BigRational::zero();
        for j in 1..=(jmax as usize).min(n) {
            acc += &c[n - j];
        }
        c.push(acc * k / BigRational::from(BigInt::from(n)));
    }
    c[e as usize].clone()
}

/// min(X^{Σn+1}, 10⁶).
pub fn default_cutoff(x: f64, spec: &DerivativeSpec) -> usize {
    let e = spec.total_order() as f64 + 1.0;
    x.powf(e).min(1e6).max(x).floor() as usize
}

/// Σ a_1(m)(−log m)^j m^{−s}, the coefficients of P_X^{(j)}(s).
pub fn derivative_series(x: f64, j: u32, cutoff: usize) -> Result<DirichletPolynomial> {
    let base = dirichlet_exp(&log_p_x_series(x)?, Complex64::new(1.0, 0.0), cutoff)?;
    let coefficients = base
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, c)| c * (-((i + 1) as f64).ln()).powi(j as i32))
        .collect();
    Ok(DirichletPolynomial { coefficients })
}

/// Dirichlet convolution of the derivative series for each order.
pub fn b_coefficients(x: f64, spec: &DerivativeSpec, cutoff: usize) -> Result<DirichletPolynomial> {
    let mut acc = derivative_series(x, spec.orders[0], cutoff)?;
    for &n in &spec.orders[1..] {
        acc = acc.convolve(&derivative_series(x, n, cutoff)?, cutoff);
    }
    Ok(acc)
}

fn log_sum_terms(x: f64) -> Vec<(f64, f64)> {
    prime_powers_up_to(x.floor() as u64)
        .into_iter()
        .map(|(q, _, j)| ((q as f64).ln(), 1.0 / j as f64))
        .collect()
}

/// P_X(s) = exp(Σ_{n≤X} Λ(n)/log n · n^{−s}).
pub fn p_x_eval(x: f64, s: Complex64) -> Result<Complex64> {
    p_x_power_eval(x, Complex64::new(1.0, 0.0), s)
}

/// P_X(s)^k = exp(k Σ_{n≤X} Λ(n)/log n · n^{−s}).
pub fn p_x_power_eval(x: f64, k: Complex64, s: Complex64) -> Result<Complex64> {
    if !(x >= 2.0) {
        return Err(invalid(format!("cutoff X must be at least 2, got {x}")));
    }
    let g: Complex64 = log_sum_terms(x).iter().map(|&(lq, c)| c * (-s * lq).exp()).sum();
    Ok((k * g).exp())
}

/// P_X^{(n)}(s) for n = 0..=max_order, from h = e^g and
/// h^{(n)} = Σ_{j<n} C(n−1, j) g^{(j+1)} h^{(n−1−j)}.
pub fn p_x_derivative_eval(x: f64, max_order: u32, s: Complex64) -> Result<Vec<Complex64>> {
    if !(x >= 2.0) {
        return Err(invalid(format!("cutoff X must be at least 2, got {x}")));
    }
    let terms = log_sum_terms(x);
    let n = max_order as usize;
    let mut g = vec![Complex64::new(0.0, 0.0); n + 1];
    for &(lq, c) in &terms {
        let base = c * (-s * lq).exp();
        let mut w = 1.0;
        for gj in g.iter_mut() {
            *gj += base * w;
            w *= -lq;
        }
    }
    let mut h = vec![g[0].exp()];
    for order in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut binom = 1.0;
        for j in 0..order {
            acc += g[j + 1] * h[order - 1 - j] * binom;
            binom = binom * (order - 1 - j) as f64 / (j + 1) as f64;
        }
        h.push(acc);
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn log_series_values() {
        let s = log_p_x_series(10.0).unwrap();
        assert_eq!(s.get(2), c(1.0));
        assert_eq!(s.get(4), c(0.5));
        assert_eq!(s.get(6), c(0.0));
        assert_eq!(s.get(8), c(1.0 / 3.0));
        assert!(log_p_x_series(1.5).is_err());
    }

    #[test]
    fn log_p_x_at_zero() {
        // Prime powers up to 10: 2, 3, 4, 5, 7, 8, 9.
        let expect = 1.0 + 1.0 + 0.5 + 1.0 + 1.0 + 1.0 / 3.0 + 0.5;
        let v = p_x_eval(10.0, c(0.0)).unwrap();
        assert!((v.ln().re - expect).abs() < 1e-14);
        assert_eq!(p_x_power_eval(10.0, c(0.0), Complex64::new(0.5, 3.0)).unwrap(), c(1.0));
    }

    #[test]
    fn exp_rejects_short_cutoff() {
        let s = log_p_x_series(20.0).unwrap();
        assert!(dirichlet_exp(&s, c(1.0), 10).is_err());
    }

    #[test]
    fn exp_agrees_with_repeated_convolution() {
        let x = 12.0;
        let m = 400;
        let s = log_p_x_series(x).unwrap();
        let k = Complex64::new(1.5, -0.5);
        let rec = dirichlet_exp(&s, k, m).unwrap();
        // exp(kS) = Σ_n (kS)^n / n!, finite since S^n lives on m ≥ 2^n.
        let mut padded = DirichletPolynomial::zeros(m);
        for i in 1..=s.cutoff() {
            padded.coefficients[i - 1] = s.get(i) * k;
        }
        let mut total = DirichletPolynomial::zeros(m);
        total.coefficients[0] = c(1.0);
        let mut power = total.clone();
        let mut fact = 1.0;
        for n in 1..10 {
            power = power.convolve(&padded, m);
            fact *= n as f64;
            for i in 0..m {
                total.coefficients[i] += power.coefficients[i] / fact;
            }
        }
        for i in 0..m {
            assert!((total.coefficients[i] - rec.coefficients[i]).norm() < 1e-10, "m={}", i + 1);
        }
    }

    #[test]
    fn exact_matches_float() {
        let k = BigRational::new(BigInt::from(5), BigInt::from(2));
        let exact = exact_power_coefficients(30, &k, 2000);
        let float = dirichlet_exp(&log_p_x_series(30.0).unwrap(), c(2.5), 2000).unwrap();
        for (i, e) in exact.iter().enumerate() {
            let ef = num_traits::ToPrimitive::to_f64(e).unwrap();
            assert!((float.coefficients[i] - c(ef)).norm() < 1e-9 * ef.abs().max(1.0), "m={}", i + 1);
        }
    }

    #[test]
    fn derivative_recursion_matches_series() {
        let x = 7.0;
        let s = Complex64::new(3.0, 1.0);
        let h = p_x_derivative_eval(x, 3, s).unwrap();
        for j in 0..=3u32 {
            let series = derivative_series(x, j, 200_000).unwrap().eval(s);
            assert!((series - h[j as usize]).norm() < 1e-8 * h[j as usize].norm().max(1.0), "j={j}");
        }
    }

    #[test]
    fn power_eval_matches_coefficients() {
        let x = 10.0;
        let k = c(1.5);
        let s = c(4.0);
        let series = dirichlet_exp(&log_p_x_series(x).unwrap(), k, 500_000).unwrap().eval(s);
        let direct = p_x_power_eval(x, k, s).unwrap();
        assert!((series - direct).norm() < 1e-8 * direct.norm());
    }
}
