//! Append-only JSON-lines cache keyed by (dataset hash, operation, parameters).

use crate::error::Result;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Record {
    dataset: String,
    operation: String,
    params: Value,
    output: Value,
}

#[derive(Clone, Debug)]
pub struct ResultCache {
    path: PathBuf,
}

impl ResultCache {
    pub fn new(path: impl AsRef<Path>) -> Self {
        Self { path: path.as_ref().to_path_buf() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Latest record for the key. Unreadable lines are skipped.
    pub fn get<T: DeserializeOwned>(&self, dataset: &str, operation: &str, params: &Value) -> Result<Option<T>> {
        let file = match std::fs::File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let mut found = None;
        for line in std::io::BufReader::new(file).lines() {
            let line = line?;
            match serde_json::from_str::<Record>(&line) {
                Ok(r) if r.dataset == dataset && r.operation == operation && &r.params == params => {
                    found = Some(r.output)
                }
                Ok(_) => {}
                Err(e) => log::warn!("skipping unreadable cache line in {}: {e}", self.path.display()),
            }
        }
        match found {
            Some(v) => Ok(Some(serde_json::from_value(v)?)),
            None => Ok(None),
        }
    }

    pub fn put<T: Serialize>(&self, dataset: &str, operation: &str, params: &Value, output: &T) -> Result<()> {
        let record = Record {
            dataset: dataset.to_string(),
            operation: operation.to_string(),
            params: params.clone(),
            output: serde_json::to_value(output)?,
        };
        let mut file = std::fs::OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(file, "{}", serde_json::to_string(&record)?)?;
        Ok(())
    }

    pub fn get_or_compute<T, F>(&self, dataset: &str, operation: &str, params: &Value, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(hit) = self.get(dataset, operation, params)? {
            return Ok(hit);
        }
        let value = compute()?;
        self.put(dataset, operation, params, &value)?;
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip_and_latest_wins() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::new(dir.path().join("c.jsonl"));
        let p = json!({"m": 2});
        assert_eq!(cache.get::<f64>("h", "landau", &p).unwrap(), None);
        cache.put("h", "landau", &p, &0.1_f64).unwrap();
        cache.put("h", "landau", &p, &(1.0_f64 / 3.0)).unwrap();
        assert_eq!(cache.get::<f64>("h", "landau", &p).unwrap(), Some(1.0 / 3.0));
        assert_eq!(cache.get::<f64>("other", "landau", &p).unwrap(), None);
        let v: f64 = cache.get_or_compute("h", "x", &p, || Ok(std::f64::consts::PI)).unwrap();
        let again: f64 = cache.get_or_compute("h", "x", &p, || Ok(0.0)).unwrap();
        assert_eq!(v.to_bits(), again.to_bits());
    }
}
