//! Generates zero ordinates by Gram-point sign counting on Hardy's Z, for use
//! where no published table is at hand. Every block between consecutive good
//! Gram points is subdivided until it shows as many sign changes as Gram
//! intervals; a block that cannot be completed is reported, never skipped.

use super::eval::{hardy_z, theta};
use crate::error::{invalid, Error, Result};
use std::f64::consts::{E, PI, TAU};
use std::io::Write;
use std::path::Path;

const MAX_BLOCK: i64 = 64;
const MAX_REFINE: usize = 14;

/// Principal branch of Lambert W for x ≥ −1/e.
fn lambert_w(x: f64) -> f64 {
    let mut w = if x < 1.0 { x.max(-0.3) } else { x.ln() - x.ln().ln().max(0.0) };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        let step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if step.abs() < 1e-15 * w.abs().max(1.0) {
            break;
        }
    }
    w
}

/// Gram point g_n: θ(g_n) = nπ, for n ≥ −1.
pub fn gram_point(n: i64) -> f64 {
    let guess = TAU * (1.0 + lambert_w((8 * n + 1) as f64 / (8.0 * E))).exp();
    let mut t = guess.max(8.0);
    for _ in 0..60 {
        let step = (theta(t) - n as f64 * PI) / (0.5 * (t / TAU).ln());
        t -= step;
        if step.abs() <= 1e-14 * t {
            break;
        }
    }
    t
}

fn is_good(n: i64, z: f64) -> bool {
    if n.rem_euclid(2) == 0 {
        z > 0.0
    } else {
        z < 0.0
    }
}

/// Brent's method on a bracketing interval.
fn brent<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> f64 {
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..200 {
        if fb == 0.0 {
            return b;
        }
        let tol = 4.0 * f64::EPSILON * b.abs();
        if (b - a).abs() <= tol {
            return b;
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let outside = !((s > lo.min(b)) && (s < lo.max(b)));
        let slow = if bisected { (s - b).abs() >= (b - c).abs() / 2.0 } else { (s - b).abs() >= (c - d).abs() / 2.0 };
        let tiny = if bisected { (b - c).abs() < tol } else { (c - d).abs() < tol };
        if outside || slow || tiny {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    b
}

fn sign_changes(points: &[(f64, f64)]) -> usize {
    points.windows(2).filter(|w| w[0].1 * w[1].1 < 0.0).count()
}

/// Subdivides a block until it shows `expected` sign changes.
fn isolate(mut points: Vec<(f64, f64)>, expected: usize) -> Result<Vec<(f64, f64)>> {
    for _ in 0..=MAX_REFINE {
        let found = sign_changes(&points);
        if found == expected {
            return Ok(points);
        }
        if found > expected {
            break;
        }
        let mut refined = Vec::with_capacity(2 * points.len());
        for w in points.windows(2) {
            refined.push(w[0]);
            let mid = 0.5 * (w[0].0 + w[1].0);
            refined.push((mid, hardy_z(mid)));
        }
        refined.push(*points.last().expect("block has endpoints"));
        points = refined;
    }
    Err(Error::Accuracy {
        what: "Gram block zero isolation",
        residual: sign_changes(&points) as f64,
        tolerance: expected as f64,
    })
}

/// The first `count` zero ordinates above the real axis.
pub fn generate_zeros(count: usize) -> Result<Vec<f64>> {
    let mut zeros = Vec::with_capacity(count);
    let mut n = -1_i64;
    let mut g = gram_point(n);
    let mut z = hardy_z(g);
    if !is_good(n, z) {
        return Err(invalid("the first Gram point is expected to be good"));
    }
    while zeros.len() < count {
        let mut block = vec![(g, z)];
        let mut m = n;
        loop {
            m += 1;
            let gm = gram_point(m);
            let zm = hardy_z(gm);
            block.push((gm, zm));
            if is_good(m, zm) {
                break;
            }
            if m - n > MAX_BLOCK {
                return Err(invalid(format!("no good Gram point within {MAX_BLOCK} of g_{n}")));
            }
        }
        let (gm, zm) = *block.last().expect("nonempty block");
        let points = isolate(block, (m - n) as usize)?;
        for w in points.windows(2) {
            if w[0].1 * w[1].1 < 0.0 {
                zeros.push(brent(hardy_z, w[0].0, w[1].0, w[0].1, w[1].1));
            }
        }
        n = m;
        g = gm;
        z = zm;
    }
    zeros.truncate(count);
    Ok(zeros)
}

/// Writes ordinates one per line with twelve decimals.
pub fn write_zeros(path: impl AsRef<Path>, zeros: &[f64]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for g in zeros {
        writeln!(out, "{g:.12}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_points_solve_theta() {
        assert!((gram_point(-1) - 9.666_908_056).abs() < 1e-6);
        assert!((gram_point(0) - 17.845_599_52).abs() < 1e-6);
        for n in [5, 100, 10_000] {
            assert!((theta(gram_point(n)) - n as f64 * PI).abs() < 1e-9);
        }
    }

    #[test]
    fn first_zeros() {
        let z = generate_zeros(30).unwrap();
        assert!((z[0] - 14.134_725_141_734_694).abs() < 1e-10);
        assert!((z[1] - 21.022_039_638_771_555).abs() < 1e-10);
        assert!((z[2] - 25.010_857_580_145_689).abs() < 1e-10);
        assert_eq!(z.iter().filter(|&&g| g <= 100.0).count(), 29);
    }
}
