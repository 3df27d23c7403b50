/// Primes up to a bound from a segmented sieve of Eratosthenes.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeTable {
    pub bound: u64,
    pub primes: Vec<u64>,
}

const SEGMENT: u64 = 1 << 16;

impl PrimeTable {
    pub fn new(bound: u64) -> Self {
        let root = (bound as f64).sqrt() as u64 + 1;
        let base = simple_sieve(root);
        let mut primes: Vec<u64> = base.iter().copied().filter(|&p| p <= bound).collect();
        let mut lo = root + 1;
        let mut mark = vec![false; SEGMENT as usize];
        while lo <= bound {
            let hi = (lo + SEGMENT - 1).min(bound);
            mark.iter_mut().for_each(|m| *m = false);
            for &p in &base {
                if p * p > hi {
                    break;
                }
                let mut start = lo.div_ceil(p) * p;
                if start < p * p {
                    start = p * p;
                }
                let mut q = start;
                while q <= hi {
                    mark[(q - lo) as usize] = true;
                    q += p;
                }
            }
            for x in lo..=hi {
                if !mark[(x - lo) as usize] {
                    primes.push(x);
                }
            }
            lo = hi + 1;
        }
        Self { bound, primes }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

fn simple_sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut comp = vec![false; n as usize + 1];
    let mut out = Vec::new();
    for i in 2..=n as usize {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n as usize {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Λ(m) = log p when m = p^j, and 0 otherwise.
pub fn von_mangoldt(m: u64) -> f64 {
    match prime_base(m) {
        Some(p) => (p as f64).ln(),
        None => 0.0,
    }
}

/// p when m is a power of the prime p.
pub(crate) fn prime_base(m: u64) -> Option<u64> {
    if m < 2 {
        return None;
    }
    let mut p = 0;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            p = d;
            break;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if p == 0 {
        return Some(m);
    }
    let mut r = m;
    while r % p == 0 {
        r /= p;
    }
    (r == 1).then_some(p)
}

/// All prime powers p^j ≤ x as (p^j, p, j), ascending in p^j.
pub fn prime_powers_up_to(x: u64) -> Vec<(u64, u64, u32)> {
    let mut out = Vec::new();
    for p in simple_sieve(x) {
        let mut q = p;
        let mut j = 1;
        while q <= x {
            out.push((q, p, j));
            match q.checked_mul(p) {
                Some(n) => q = n,
                None => break,
            }
            j += 1;
        }
    }
    out.sort_unstable();
    out
}
