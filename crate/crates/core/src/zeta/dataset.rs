use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

/// Ordinate of the first nontrivial zero, used as a sanity gate.
pub const FIRST_ORDINATE: f64 = 14.134_725_141_734_694;

/// Ascending ordinates γ_j of zeros ρ = 1/2 + iγ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroDataset {
    pub ordinates: Vec<f64>,
    pub source: String,
    pub count: usize,
}

impl ZeroDataset {
    /// Validates positivity and strict monotonicity; errors report 1-based positions.
    pub fn from_ordinates(ordinates: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        for (i, &g) in ordinates.iter().enumerate() {
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::Parse { line: i + 1, message: format!("ordinate {g} is not a positive number") });
            }
            if i > 0 && g <= ordinates[i - 1] {
                return Err(Error::Parse { line: i + 1, message: format!("ordinate {g} does not exceed its predecessor") });
            }
        }
        let count = ordinates.len();
        Ok(Self { ordinates, source: source.into(), count })
    }

    /// Parses one decimal per line; blank lines are skipped.
    pub fn parse(text: &str, source: impl Into<String>, limit: Option<usize>) -> Result<Self> {
        let cap = limit.unwrap_or(usize::MAX);
        let mut ordinates = Vec::new();
        let mut previous = 0.0;
        for (idx, raw) in text.lines().enumerate() {
            if ordinates.len() >= cap {
                break;
            }
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let g: f64 = line
                .parse()
                .map_err(|_| Error::Parse { line: idx + 1, message: format!("not a decimal number: {line:?}") })?;
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::Parse { line: idx + 1, message: format!("ordinate {g} is not positive") });
            }
            if g <= previous {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("ordinate {g} does not exceed the previous value {previous}"),
                });
            }
            previous = g;
            ordinates.push(g);
        }
        let count = ordinates.len();
        Ok(Self { ordinates, source: source.into(), count })
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn max_ordinate(&self) -> Option<f64> {
        self.ordinates.last().copied()
    }

    /// Number of ordinates γ with 0 < γ ≤ T.
    pub fn n_of_t(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }

    /// The first `limit` ordinates.
    pub fn truncated(&self, limit: usize) -> Self {
        let ordinates: Vec<f64> = self.ordinates.iter().copied().take(limit).collect();
        let count = ordinates.len();
        Self { ordinates, source: self.source.clone(), count }
    }

    /// Height of the `count`-th zero, the T at which a zero-count checkpoint sits.
    pub fn checkpoint_height(&self, count: usize) -> Result<f64> {
        if count == 0 || count > self.count {
            return Err(crate::error::invalid(format!(
                "checkpoint {count} outside the dataset of {} zeros",
                self.count
            )));
        }
        Ok(self.ordinates[count - 1])
    }

    /// Checks the first ordinate against the standard tables.
    pub fn check_standard_start(&self) -> Result<()> {
        match self.ordinates.first() {
            Some(&g) if (g - FIRST_ORDINATE).abs() <= 1e-3 => Ok(()),
            Some(&g) => Err(Error::Accuracy { what: "first zero ordinate", residual: (g - FIRST_ORDINATE).abs(), tolerance: 1e-3 }),
            None => Err(crate::error::invalid("dataset is empty")),
        }
    }

    /// SHA-256 over the little-endian bit patterns of the ordinates.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for g in &self.ordinates {
            hasher.update(g.to_bits().to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

/// Reads a zeros file, keeping at most `limit` ordinates.
pub fn load_zeros(path: impl AsRef<Path>, limit: Option<usize>) -> Result<ZeroDataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    ZeroDataset::parse(&text, path.display().to_string(), limit)
}
