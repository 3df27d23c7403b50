//! CUE eigenangles from random Verblunsky coefficients.
//!
//! For Haar U on U(N) the Verblunsky coefficients of the spectral measure at
//! a cyclic vector are independent, with |α_k|² ~ Beta(1, N−k−1) and uniform
//! phase for k < N−1, and α_{N−1} uniform on the unit circle. The eigenvalues
//! are the zeros of Φ_N(z) = zΦ_{N−1}(z) − ᾱ_{N−1}Φ*_{N−1}(z).
//!
//! Writing b_k = Φ_k/Φ*_k on |z| = 1, the zeros solve z·b_{N−1}(z) = ᾱ_{N−1}.
//! The lifted phase Ψ(θ) of z·b_{N−1}(e^{iθ}) is strictly increasing and gains
//! 2πN over a period, so the N roots are isolated by level crossings of Ψ.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::{PI, TAU};

/// Newton stops once the step is below this; Ψ itself carries rounding
/// noise of order N·ε, so tighter tolerances only make the iteration jitter.
const STEP_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct VerblunskyCoefficients {
    pub alpha: Vec<Complex64>,
}

impl VerblunskyCoefficients {
    pub fn sample<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut alpha = Vec::with_capacity(n);
        for k in 0..n {
            let phase = TAU * rng.gen::<f64>();
            let modulus = if k + 1 == n {
                1.0
            } else {
                let u: f64 = rng.gen();
                let dof = (n - k - 1) as f64;
                (1.0 - u.powf(1.0 / dof)).sqrt()
            };
            alpha.push(Complex64::from_polar(modulus, phase));
        }
        Self { alpha }
    }

    /// Ψ(θ) − Nθ, Ψ'(θ) − 1 and d/dθ log|Φ*_{N−1}(e^{iθ})|.
    fn phase(&self, theta: f64) -> (f64, f64, f64) {
        let n = self.alpha.len();
        let z = Complex64::from_polar(1.0, theta);
        let mut b = Complex64::new(1.0, 0.0);
        let mut lift = 0.0;
        let mut d = 0.0;
        let mut dlog = 0.0;
        // Each 1 − αw has positive real part, so a product of two of them has
        // argument in (−π, π) and one atan2 per pair gives the continuous sum.
        let mut pair = Complex64::new(1.0, 0.0);
        for (i, a) in self.alpha[..n - 1].iter().enumerate() {
            let w = z * b;
            let den = Complex64::new(1.0, 0.0) - a * w;
            pair *= den;
            if i % 2 == 1 {
                lift -= 2.0 * pair.im.atan2(pair.re);
                pair = Complex64::new(1.0, 0.0);
            }
            let inv_q = 1.0 / den.norm_sqr();
            // Φ*_{k+1} = Φ*_k (1 − α_k z b_k) and d(z b_k)/dθ = i(1 + d_k) z b_k.
            dlog += (a * w * den.conj()).im * (1.0 + d) * inv_q;
            d = (1.0 + d) * (1.0 - a.norm_sqr()) * inv_q;
            b = (w - a.conj()) * den.conj() * inv_q;
        }
        if n % 2 == 0 {
            lift -= 2.0 * pair.im.atan2(pair.re);
        }
        (lift, d, dlog)
    }

    /// Ψ(θ), Ψ'(θ) and d/dθ log|Φ*_{N−1}|.
    fn psi(&self, theta: f64) -> (f64, f64, f64) {
        let n = self.alpha.len() as f64;
        let (lift, d, dlog) = self.phase(theta);
        (n * theta + lift, 1.0 + d, dlog)
    }

    /// Eigenangles in [0, 2π), ascending.
    pub fn eigenangles(&self) -> Vec<f64> {
        let n = self.alpha.len();
        let target = -self.alpha[n - 1].arg();
        // Ψ on a grid of N cells brackets every level crossing; Ψ(2π) = Ψ(0) + 2πN.
        let cells = n;
        let mut grid: Vec<(f64, f64)> = (0..cells)
            .map(|i| {
                let t = TAU * i as f64 / cells as f64;
                (t, self.psi(t).0)
            })
            .collect();
        let p0 = grid[0].1;
        grid.push((TAU, p0 + TAU * n as f64));
        // First level c + 2πq strictly above Ψ(0).
        let mut level = target + TAU * ((p0 - target) / TAU).floor();
        if level <= p0 {
            level += TAU;
        }
        let mut roots = Vec::with_capacity(n);
        let mut cell = 0;
        let mut prev = 0.0;
        for _ in 0..n {
            while grid[cell + 1].1 < level {
                cell += 1;
            }
            let root = self.solve_level(level, grid[cell], grid[cell + 1], prev);
            roots.push(root);
            prev = root;
            level += TAU;
        }
        roots
    }

    /// Root of Ψ(θ) = level inside a bracketing grid cell.
    ///
    /// The sign of Ψ − level keeps the bracket, while Newton steps are taken on
    /// G = |Φ*_{N−1}| sin((Ψ − level)/2), which is a constant multiple of
    /// e^{−iNθ/2}Φ_N(e^{iθ}) and so behaves like a characteristic polynomial
    /// even where Ψ itself is nearly a step.
    fn solve_level(&self, level: f64, lo: (f64, f64), hi: (f64, f64), floor: f64) -> f64 {
        let (mut a, mut b) = (lo.0.max(floor), hi.0);
        let frac = ((level - lo.1) / (hi.1 - lo.1)).clamp(0.0, 1.0);
        let mut x = lo.0 + frac * (hi.0 - lo.0);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        for _ in 0..200 {
            let (p, dp, dlog) = self.psi(x);
            let f = p - level;
            if f < 0.0 {
                a = x;
            } else if f > 0.0 {
                b = x;
            } else {
                return x;
            }
            let (s, c) = (0.5 * f).sin_cos();
            let step = s / (dlog * s + 0.5 * c * dp);
            // G also vanishes on the neighbouring levels, so only trust its
            // Newton step while Ψ is within π of the target.
            let near = f.abs() < PI;
            if near && step.abs() <= STEP_TOL {
                return (x - step).clamp(a, b);
            }
            let mut next = x - step;
            if !near || !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
            if b - a <= STEP_TOL {
                return next;
            }
            x = next;
        }
        x
    }
}

/// Monic Φ_N in ascending powers, from the Szegő recursion.
pub fn opuc_monic_coefficients(alpha: &[Complex64]) -> Vec<Complex64> {
    let mut phi = vec![Complex64::new(1.0, 0.0)];
    for a in alpha {
        let k = phi.len() - 1;
        let mut next = vec![Complex64::new(0.0, 0.0); k + 2];
        for (j, c) in phi.iter().enumerate() {
            next[j + 1] += c;
            // Φ*_k has coefficient conj(φ_{k−j}) at z^j.
            next[j] -= a.conj() * phi[k - j].conj();
        }
        phi = next;
    }
    phi
}
