//! Deterministic parallel Monte Carlo.
//!
//! Sample `i` draws from its own ChaCha stream, samples are grouped into
//! fixed-size chunks and chunk results are combined in index order, so an
//! estimate is bit-identical for any number of worker threads.

use crate::rmt::RngSeed;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const CHUNK: usize = 256;
const BATCHES: usize = 10;

/// Mean and standard error of a complex Monte Carlo average.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: Complex64,
    /// sqrt((Var Re + Var Im) / n).
    pub std_error: f64,
    pub samples: usize,
    /// Batch variances disagree by more than two orders of magnitude.
    pub unstable_variance: bool,
}

/// RNG for one sample index under a master seed.
pub fn sample_rng(seed: RngSeed) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed.master);
    rng.set_stream(seed.stream);
    rng
}

#[derive(Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: Complex64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, z: Complex64) {
        self.n += 1.0;
        let d = z - self.mean;
        self.mean += d / self.n;
        let d2 = z - self.mean;
        self.m2 += d.re * d2.re + d.im * d2.im;
    }

    fn merge(&mut self, o: &Moments) {
        if o.n == 0.0 {
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        self.mean += d * (o.n / n);
        self.m2 += o.m2 + d.norm_sqr() * self.n * o.n / n;
        self.n = n;
    }

    fn variance(&self) -> f64 {
        if self.n > 1.0 {
            self.m2 / (self.n - 1.0)
        } else {
            0.0
        }
    }
}

/// Averages `f` over sample indices `0..samples`, each with its own stream.
pub fn monte_carlo<F>(samples: usize, master: u64, f: F) -> Estimate
where
    F: Fn(u64, &mut ChaCha20Rng) -> Complex64 + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut m = Moments::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let mut rng = sample_rng(RngSeed::new(master, i as u64));
                m.push(f(i as u64, &mut rng));
            }
            m
        })
        .collect();

    let mut total = Moments::default();
    let per_batch = chunks.div_ceil(BATCHES).max(1);
    let mut batch_vars = Vec::new();
    for group in parts.chunks(per_batch) {
        let mut b = Moments::default();
        for p in group {
            b.merge(p);
            total.merge(p);
        }
        if b.n > 1.0 {
            batch_vars.push(b.variance());
        }
    }
    let unstable_variance = if batch_vars.len() >= 2 {
        let lo = batch_vars.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = batch_vars.iter().copied().fold(0.0, f64::max);
        hi > 100.0 * lo
    } else {
        false
    };
    Estimate {
        mean: total.mean,
        std_error: (total.variance() / total.n.max(1.0)).sqrt(),
        samples,
        unstable_variance,
    }
}
