use super::MixedMomentSpec;
use crate::error::{invalid, Result};
use crate::stats::{monte_carlo, Estimate};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::Exp1;

/// i^p · q with q an exact rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMoment {
    pub i_power: u8,
    pub value: BigRational,
}

impl ExactMoment {
    pub fn to_complex(&self) -> Complex64 {
        let v = self.value.to_f64().unwrap_or(f64::NAN);
        match self.i_power % 4 {
            0 => Complex64::new(v, 0.0),
            1 => Complex64::new(0.0, v),
            2 => Complex64::new(-v, 0.0),
            _ => Complex64::new(0.0, -v),
        }
    }
}

/// W(p) = Σ_{j_1+...+j_k ≤ N−1} ∏_r j_r^{p_r} (N − Σ j_r), with 0⁰ = 1.
fn weighted_simplex_sum(n: usize, p: &[u32]) -> BigUint {
    let mut v: Vec<BigUint> = (0..n).map(|b| BigUint::from(b + 1)).collect();
    for &pr in p.iter().rev() {
        let powers: Vec<BigUint> = (0..n).map(|j| BigUint::from(j).pow(pr)).collect();
        let mut next = Vec::with_capacity(n);
        for b in 0..n {
            let mut acc = BigUint::zero();
            for j in 0..=b {
                if !powers[j].is_zero() {
                    acc += &powers[j] * &v[b - j];
                }
            }
            next.push(acc);
        }
        v = next;
    }
    v.pop().unwrap_or_default()
}

/// E_N[(1/N) Σ_m ∏_r Z^{(n_r)}(θ_m)] in exact arithmetic.
///
/// Expanding each factor of the nested sum in α_r gives
/// (−i)^{Σn} (−1)^k / N · Σ_{1≤m_r≤n_r} ∏ C(n_r, m_r) · W(n − m).
pub fn exact_moment(spec: &MixedMomentSpec) -> ExactMoment {
    let orders = &spec.orders;
    let k = orders.len();
    let mut total = BigUint::zero();
    let mut m: Vec<u32> = vec![1; k];
    'outer: loop {
        let mut coeff = BigUint::one();
        for (&n, &mr) in orders.iter().zip(&m) {
            coeff *= BigUint::from(binomial(n as u64, mr as u64));
        }
        let p: Vec<u32> = orders.iter().zip(&m).map(|(&n, &mr)| n - mr).collect();
        total += coeff * weighted_simplex_sum(spec.n, &p);
        for r in 0..k {
            if m[r] < orders[r] {
                m[r] += 1;
                continue 'outer;
            }
            m[r] = 1;
        }
        break;
    }
    let s = spec.total_order() as usize;
    ExactMoment {
        i_power: ((3 * s + 2 * k) % 4) as u8,
        value: BigRational::new(BigInt::from(total), BigInt::from(spec.n)),
    }
}

fn big_factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * j)
}

/// ∫ over {x_r ≥ 0, Σx_r ≤ 1} of ∏ x_r^{n_r−1} (1 − Σx_r) dx
/// = ∏ (n_r − 1)! / (Σn_r + 1)!.
pub fn simplex_integral(orders: &[u32]) -> Result<BigRational> {
    if orders.is_empty() || orders.contains(&0) {
        return Err(invalid("simplex orders must be positive"));
    }
    let num = orders.iter().fold(BigInt::one(), |acc, &n| acc * big_factorial(n as u64 - 1));
    let s: u64 = orders.iter().map(|&n| n as u64).sum();
    Ok(BigRational::new(num, big_factorial(s + 1)))
}

/// Monte Carlo estimate of the simplex integral from uniform points on the
/// simplex (normalized exponential spacings) times its volume 1/k!.
pub fn simplex_integral_mc(orders: &[u32], points: usize, seed: u64) -> Result<Estimate> {
    if orders.is_empty() || orders.contains(&0) {
        return Err(invalid("simplex orders must be positive"));
    }
    let k = orders.len();
    let volume: f64 = 1.0 / (1..=k).map(|j| j as f64).product::<f64>();
    let orders = orders.to_vec();
    let e = monte_carlo(points, seed, move |_, rng| {
        let e: Vec<f64> = (0..=k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = e.iter().sum();
        let mut g = e[k] / total;
        for (x, &n) in e.iter().zip(&orders) {
            g *= (x / total).powi(n as i32 - 1);
        }
        Complex64::new(g * volume, 0.0)
    });
    Ok(e)
}

/// (−1)^{Σn+k} i^{Σn} ∏ n_r! / (Σn + 1)! · N^{Σn}.
pub fn theorem3_prediction(spec: &MixedMomentSpec) -> Complex64 {
    let s = spec.total_order();
    let k = spec.k() as u32;
    let mut c: f64 = spec.orders.iter().map(|&n| (1..=n).map(|j| j as f64).product::<f64>()).product();
    c /= (1..=s + 1).map(|j| j as f64).product::<f64>();
    if (s + k) % 2 == 1 {
        c = -c;
    }
    let i_pow = match s % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    i_pow * c * (spec.n as f64).powi(s as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, o: &[u32]) -> MixedMomentSpec {
        MixedMomentSpec::new(n, o.to_vec()).unwrap()
    }

    #[test]
    fn first_derivative_mean_closed_form() {
        for n in 1..40usize {
            let m = exact_moment(&spec(n, &[1]));
            assert_eq!(m.i_power, 1);
            assert_eq!(m.value, BigRational::new(BigInt::from(n + 1), BigInt::from(2)));
        }
    }

    #[test]
    fn second_derivative_closed_form() {
        // E[Z''] = (N² − 1)/3 + (N + 1)/2 from the same expansion done by hand.
        for n in 1..30i64 {
            let m = exact_moment(&spec(n as usize, &[2]));
            let expect = BigRational::new(BigInt::from(n * n - 1), BigInt::from(3))
                + BigRational::new(BigInt::from(n + 1), BigInt::from(2));
            assert_eq!(m.i_power, 0);
            assert_eq!(m.value, expect);
        }
    }

    #[test]
    fn simplex_values() {
        let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(simplex_integral(&[1, 1]).unwrap(), r(1, 6));
        assert_eq!(simplex_integral(&[1]).unwrap(), r(1, 2));
        assert_eq!(simplex_integral(&[2, 3]).unwrap(), r(1, 360));
        assert!(simplex_integral(&[0]).is_err());
    }

    #[test]
    fn predictions() {
        let n = 10.0;
        assert!((theorem3_prediction(&spec(10, &[1])) - Complex64::new(0.0, n / 2.0)).norm() < 1e-12);
        assert!((theorem3_prediction(&spec(10, &[1, 1])) - Complex64::new(-n * n / 6.0, 0.0)).norm() < 1e-12);
        assert!((theorem3_prediction(&spec(10, &[2])) - Complex64::new(n * n / 3.0, 0.0)).norm() < 1e-12);
    }
}
