use crate::error::{invalid, Result};
use crate::numeric::quad::integrate;
use crate::numeric::special::{e1_unchecked, ein, EULER_GAMMA};
use crate::numeric::ComplexSum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Finest trapezoid level in w for integrals against the bump.
const FINEST: usize = 1 << 14;
const COARSEST: usize = 32;

struct Bump {
    norm: f64,
    /// f(i / FINEST) for i = 0..=FINEST.
    table: Vec<f64>,
}

fn raw_bump(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        (-1.0 / (x * (1.0 - x))).exp()
    }
}

fn bump() -> &'static Bump {
    static BUMP: OnceLock<Bump> = OnceLock::new();
    BUMP.get_or_init(|| {
        let mass = integrate(raw_bump, 0.0, 1.0, 1e-18, 1e-15);
        let norm = 1.0 / mass;
        let table = (0..=FINEST).map(|i| norm * raw_bump(i as f64 / FINEST as f64)).collect();
        Bump { norm, table }
    })
}

/// f(x) = c·exp(−1/(x(1−x))) on (0, 1), normalized to mass 1.
pub fn bump_density(x: f64) -> f64 {
    bump().norm * raw_bump(x)
}

/// The mass-1 bump f rescaled to u(x) = Y f(Y log(x/e) + 1)/x, supported on
/// [e^{1−1/Y}, e].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingKernel {
    y: f64,
    /// ∫ f(w) log v(w) dw with v(w) = 1 + (w − 1)/Y.
    mean_log_v: f64,
}

impl SmoothingKernel {
    pub fn new(y: f64) -> Result<Self> {
        if !(y >= 2.0) || !y.is_finite() {
            return Err(invalid(format!("kernel scale Y must be at least 2, got {y}")));
        }
        let mut k = Self { y, mean_log_v: 0.0 };
        k.mean_log_v = k.trapezoid_real(FINEST, |w| k.v(w).ln());
        Ok(k)
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// log of the support endpoints: [1 − 1/Y, 1].
    pub fn support(&self) -> (f64, f64) {
        ((1.0 - 1.0 / self.y).exp(), std::f64::consts::E)
    }

    fn v(&self, w: f64) -> f64 {
        1.0 + (w - 1.0) / self.y
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let w = self.y * (x.ln() - 1.0) + 1.0;
        self.y * bump_density(w) / x
    }

    /// ∫_a^b u(y) dy by adaptive Gauss–Kronrod over the part inside the support.
    pub fn mass(&self, a: f64, b: f64) -> Result<f64> {
        if !(b >= a && a >= 1.0) {
            return Err(invalid(format!("mass interval must satisfy b ≥ a ≥ 1, got [{a}, {b}]")));
        }
        let (lo, hi) = self.support();
        let (a, b) = (a.max(lo), b.min(hi));
        if a >= b {
            return Ok(0.0);
        }
        Ok(integrate(|x| self.eval(x), a, b, 1e-13, 1e-13))
    }

    fn trapezoid_real<F: Fn(f64) -> f64>(&self, n: usize, g: F) -> f64 {
        let stride = FINEST / n;
        let t = &bump().table;
        let mut s = crate::numeric::NeumaierSum::new();
        for i in 1..n {
            s.add(t[i * stride] * g(i as f64 / n as f64));
        }
        s.value() / n as f64
    }

    /// Trapezoid rule in w for ∫ f(w) g(w) dw, refined by doubling until two
    /// levels agree. Endpoint values vanish, so the rule is spectrally accurate.
    /// `freq` bounds the oscillation of g in cycles per unit w; levels below
    /// four nodes per cycle are never accepted, which rules out two aliased
    /// levels agreeing by accident.
    fn trapezoid_adaptive<G: Fn(f64) -> Complex64>(&self, freq: f64, g: G) -> Complex64 {
        let t = &bump().table;
        let min_n = ((4.0 * freq).ceil() as usize).clamp(4 * COARSEST, FINEST);
        let mut n = COARSEST;
        let mut sum = ComplexSum::new();
        for i in 1..n {
            sum.add(g(i as f64 / n as f64) * t[i * (FINEST / n)]);
        }
        let mut prev = sum.value() / n as f64;
        while n < FINEST {
            n *= 2;
            let stride = FINEST / n;
            for i in (1..n).step_by(2) {
                sum.add(g(i as f64 / n as f64) * t[i * stride]);
            }
            let cur = sum.value() / n as f64;
            if (cur - prev).norm() <= 1e-17 + 1e-14 * cur.norm() && n >= min_n {
                return cur;
            }
            prev = cur;
        }
        log::debug!("bump trapezoid reached the finest level");
        prev
    }

    /// U(z) = ∫ u(y) E₁(z log y) dy = ∫ f(w) E₁(z v(w)) dw.
    pub fn big_u(&self, z: Complex64) -> Result<Complex64> {
        if z.re == 0.0 && z.im == 0.0 {
            return Err(invalid("U has a logarithmic singularity at z = 0"));
        }
        if z.im == 0.0 && z.re < 0.0 {
            return Err(invalid("U is evaluated on the branch cut of E1"));
        }
        Ok(self.big_u_unchecked(z))
    }

    /// Cycles per unit w of e^{−z v(w)}.
    fn freq(&self, z: Complex64) -> f64 {
        z.im.abs() / (self.y * std::f64::consts::TAU)
    }

    pub(crate) fn big_u_unchecked(&self, z: Complex64) -> Complex64 {
        if z.norm() < 0.5 {
            -z.ln() - EULER_GAMMA - self.mean_log_v + self.ein_average(z)
        } else {
            self.trapezoid_adaptive(self.freq(z), |w| e1_unchecked(z * self.v(w)))
        }
    }

    /// ∫ f(w) Ein(z v(w)) dw.
    pub(crate) fn ein_average(&self, z: Complex64) -> Complex64 {
        self.trapezoid_adaptive(self.freq(z), |w| ein(z * self.v(w)))
    }

    /// ∫ f(w) e^{−z v(w)} dw; note U'(z) = −(1/z) times this.
    pub(crate) fn laplace(&self, z: Complex64) -> Complex64 {
        self.trapezoid_adaptive(self.freq(z), |w| (-z * self.v(w)).exp())
    }

    /// ∫ f(w) (e^{−iϑ L v(w)} − 1)/ϑ dw, stable as ϑ → 0.
    pub(crate) fn laplace_difference_quotient(&self, theta: f64, l: f64) -> Complex64 {
        let freq = (theta * l).abs() / (self.y * std::f64::consts::TAU);
        self.trapezoid_adaptive(freq, |w| {
            let lv = l * self.v(w);
            let x = theta * lv;
            // (e^{−ix} − 1)/x = Σ_{n≥1} (−i)^n x^{n−1}/n!
            let mut term = Complex64::new(0.0, -1.0);
            let mut sum = term;
            for n in 2..30 {
                term *= Complex64::new(0.0, -x / n as f64);
                sum += term;
                if term.norm() < 1e-18 {
                    break;
                }
            }
            sum * lv
        })
    }

    pub(crate) fn mean_log_v(&self) -> f64 {
        self.mean_log_v
    }

    /// C with exp(−U(z)) ~ C·z as z → 0, equal to exp(γ + ∫ f log v).
    pub fn small_z_constant(&self) -> f64 {
        (EULER_GAMMA + self.mean_log_v).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_has_unit_mass() {
        let m = integrate(bump_density, 0.0, 1.0, 1e-16, 1e-14);
        assert!((m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_small_scale() {
        assert!(SmoothingKernel::new(1.5).is_err());
        assert!(SmoothingKernel::new(f64::NAN).is_err());
    }

    #[test]
    fn u_vanishes_outside_support() {
        let k = SmoothingKernel::new(10.0).unwrap();
        let (lo, hi) = k.support();
        assert_eq!(k.eval(lo * 0.999), 0.0);
        assert_eq!(k.eval(hi * 1.001), 0.0);
        assert!(k.eval((lo * hi).sqrt()) > 0.0);
    }

    #[test]
    fn mass_on_full_range_is_one() {
        for y in [2.0, 5.0, 10.0, 50.0, 1000.0] {
            let k = SmoothingKernel::new(y).unwrap();
            assert!((k.mass(1.0, std::f64::consts::E).unwrap() - 1.0).abs() < 1e-10, "Y={y}");
            assert_eq!(k.mass(1.0, k.support().0).unwrap(), 0.0);
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let k = SmoothingKernel::new(5.0).unwrap();
        for z in [Complex64::new(0.3, 2.0), Complex64::new(0.01, 0.02), Complex64::new(-1.0, 7.0)] {
            let a = k.big_u(z.conj()).unwrap();
            let b = k.big_u(z).unwrap().conj();
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn small_and_large_branches_agree() {
        let k = SmoothingKernel::new(7.0).unwrap();
        for z in [Complex64::new(0.0, 0.5), Complex64::new(0.3, -0.4)] {
            let series = -z.ln() - EULER_GAMMA - k.mean_log_v + k.ein_average(z);
            let direct = k.trapezoid_adaptive(k.freq(z), |w| e1_unchecked(z * k.v(w)));
            assert!((series - direct).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_singular_arguments() {
        let k = SmoothingKernel::new(5.0).unwrap();
        assert!(k.big_u(Complex64::new(0.0, 0.0)).is_err());
        assert!(k.big_u(Complex64::new(-2.0, 0.0)).is_err());
    }
}
