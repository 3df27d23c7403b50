use super::ShiftVector;
use crate::error::{invalid, Error, Result};
use crate::numeric::linalg::{determinant, LuDeterminant};
use num_complex::Complex64;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// |a − b| / max(|a|, |b|), zero when both vanish.
pub fn relative_difference(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// (1/N) ∏_r A_r^{−1}(A_r − 1) Σ_{j_1+...+j_k ≤ N−1} ∏_r A_r^{−j_r} (N − Σ j_r).
///
/// With F_r(b) the sum over the last k−r+1 indices under budget b,
/// F_{k+1}(b) = b + 1 and F_r(b) = F_{r+1}(b) + A_r^{−1} F_r(b − 1).
pub fn shifted_expectation_sum(n: usize, shifts: &ShiftVector) -> Result<Complex64> {
    if n == 0 {
        return Err(invalid("matrix size N must be at least 1"));
    }
    if shifts.is_empty() {
        return Err(invalid("at least one shift is required"));
    }
    let points = shifts.points();
    let mut f: Vec<Complex64> = (0..n).map(|b| Complex64::new((b + 1) as f64, 0.0)).collect();
    for a in points.iter().rev() {
        let x = a.inv();
        let mut g = vec![Complex64::new(0.0, 0.0); n];
        g[0] = f[0];
        for b in 1..n {
            g[b] = f[b] + x * g[b - 1];
        }
        f = g;
    }
    let pre: Complex64 = points.iter().map(|a| (a - ONE) / a).product();
    Ok(pre * f[n - 1] / n as f64)
}

/// Laurent polynomial Σ_j c_j z^j with exponents starting at `lowest`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSymbol {
    pub lowest: i32,
    pub coefficients: Vec<Complex64>,
}

impl LaurentSymbol {
    /// z^{−1} ∏ (z − r) over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![ONE];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (j, v) in c.iter().enumerate() {
                next[j + 1] += v;
                next[j] -= r * v;
            }
            c = next;
        }
        Self { lowest: -1, coefficients: c }
    }

    pub fn highest(&self) -> i32 {
        self.lowest + self.coefficients.len() as i32 - 1
    }

    /// Coefficient of z^j, zero outside the support.
    pub fn coefficient(&self, j: i32) -> Complex64 {
        let idx = j - self.lowest;
        if idx < 0 || idx as usize >= self.coefficients.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[idx as usize]
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coefficients.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.lowest)
    }
}

/// f(z) = z^{−1}(z − 1)² ∏_r (z − A_r).
pub fn symbol_coefficients(shifts: &ShiftVector) -> LaurentSymbol {
    let mut roots = vec![ONE, ONE];
    roots.extend(shifts.points());
    LaurentSymbol::from_roots(&roots)
}

/// det[f̂_{j−ℓ}] for 0 ≤ j, ℓ < size.
pub fn toeplitz_determinant(symbol: &LaurentSymbol, size: usize) -> LuDeterminant {
    let mut m = Vec::with_capacity(size * size);
    for j in 0..size {
        for l in 0..size {
            m.push(symbol.coefficient(j as i32 - l as i32));
        }
    }
    let d = determinant(m, size);
    if d.pivot_ratio > 1e12 {
        log::warn!("Toeplitz determinant of size {size} is ill-conditioned: pivot ratio {:e}", d.pivot_ratio);
    }
    d
}

fn sign_pow(e: usize) -> f64 {
    if e % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// (−1)^{(k+1)(N−1)}/N ∏_r A_r^{−N}(A_r − 1), the factor turning D_{N−1} into
/// the shifted expectation.
fn heine_prefactor(n: usize, points: &[Complex64]) -> Complex64 {
    let k = points.len();
    let p: Complex64 = points.iter().map(|a| (a - ONE) * a.powi(-(n as i32))).product();
    p * sign_pow((k + 1) * (n - 1)) / n as f64
}

/// Shifted expectation from the Toeplitz determinant D_{N−1}[f].
pub fn toeplitz_expectation(n: usize, shifts: &ShiftVector) -> Result<Complex64> {
    if n == 0 {
        return Err(invalid("matrix size N must be at least 1"));
    }
    let symbol = symbol_coefficients(shifts);
    let d = toeplitz_determinant(&symbol, n - 1);
    Ok(heine_prefactor(n, &shifts.points()) * d.det)
}

/// D_{N−1} of z^{−1} ∏_{r=1}^{k+2} (z − A_r) as a (k+2)×(k+2) determinant
/// with rows (A_r^{N−1}, ..., A_r^{N−1+k}, (−A_r)^{−1}).
pub fn basor_forrester(n: usize, nodes: &[Complex64]) -> Result<Complex64> {
    if n == 0 {
        return Err(invalid("matrix size N must be at least 1"));
    }
    let size = nodes.len();
    if size < 2 {
        return Err(invalid("at least two nodes are required"));
    }
    for j in 0..size {
        for l in j + 1..size {
            if (nodes[j] - nodes[l]).norm() < 1e-6 {
                return Err(Error::NodeCollision(j, l));
            }
        }
    }
    if n == 1 {
        return Ok(ONE);
    }
    let k = size - 2;
    let mut m = Vec::with_capacity(size * size);
    for a in nodes {
        let mut p = a.powi(n as i32 - 1);
        for _ in 0..=k {
            m.push(p);
            p *= a;
        }
        m.push(-a.inv());
    }
    let det = determinant(m, size).det;
    let mut vandermonde = ONE;
    for j in 0..size {
        for l in j + 1..size {
            vandermonde *= nodes[l] - nodes[j];
        }
    }
    let minus_prod: Complex64 = nodes.iter().map(|a| -a).product();
    Ok(det * minus_prod * sign_pow((k + 1) * (n - 1)) / vandermonde)
}

/// Node offsets ε used to approach the double root at z = 1.
pub const RICHARDSON_OFFSETS: [f64; 2] = [1e-2, 1e-3];

/// Shifted expectation through the Basor–Forrester determinant, with the
/// double node at 1 split into e^{±iε} and extrapolated in ε².
pub fn basor_forrester_expectation(n: usize, shifts: &ShiftVector) -> Result<Complex64> {
    let points = shifts.points();
    let pre = heine_prefactor(n, &points);
    let at = |eps: f64| -> Result<Complex64> {
        let mut nodes = points.clone();
        nodes.push(Complex64::from_polar(1.0, eps));
        nodes.push(Complex64::from_polar(1.0, -eps));
        Ok(pre * basor_forrester(n, &nodes)?)
    };
    let [e1, e2] = RICHARDSON_OFFSETS;
    let (v1, v2) = (at(e1)?, at(e2)?);
    Ok((v2 * e1 * e1 - v1 * e2 * e2) / (e1 * e1 - e2 * e2))
}
