use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Eigenangles of Q·diag(r_jj/|r_jj|) where QR is the factorization of a
/// complex Gaussian matrix.
pub(super) fn eigenangles<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let g = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    let (_, t) = Schur::new(q).unpack();
    (0..n).map(|i| t[(i, i)].arg()).collect()
}
