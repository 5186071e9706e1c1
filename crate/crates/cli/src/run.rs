use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use scqc::dualrail::BASIS_CONVENTION;
use scqc::sweep::log_grid;

pub struct Outcome {
    pub summary: Value,
    pub passed: bool,
}

pub fn read_config(path: Option<&Path>) -> anyhow::Result<Value> {
    let Some(path) = path else { return Ok(json!({})) };
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| scqc::Error::Parse {
        path: path.display().to_string(),
        line: e.line() as u64,
        message: e.to_string(),
    })
    .map_err(Into::into)
}

/// Deserializes a command config with its defaults filled in.
pub fn parse_config<T: DeserializeOwned>(raw: &Value) -> anyhow::Result<T> {
    T::deserialize(raw).map_err(|e| scqc::Error::InvalidParameter(format!("config: {e}")).into())
}

pub struct RunContext {
    command: String,
    seed: u64,
    out: PathBuf,
    base: PathBuf,
    config: Value,
    hash: String,
}

impl RunContext {
    pub fn new(command: &str, seed: u64, out: &Path, base: &Path) -> Self {
        RunContext {
            command: command.into(),
            seed,
            out: out.into(),
            base: base.into(),
            config: Value::Null,
            hash: String::new(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Records the resolved config; its hash covers the command and seed.
    pub fn set_config<T: Serialize>(&mut self, config: &T) -> anyhow::Result<()> {
        self.config = serde_json::to_value(config)?;
        let canonical = serde_json::to_string(&json!({
            "command": self.command,
            "seed": self.seed,
            "config": self.config,
        }))?;
        self.hash = hex::encode(Sha256::digest(canonical.as_bytes()));
        Ok(())
    }

    /// Paths in configs are relative to the config file.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.into()
        } else {
            self.base.join(path)
        }
    }

    pub fn header(&self) -> Vec<(String, String)> {
        vec![
            ("scqc_version".into(), env!("CARGO_PKG_VERSION").into()),
            ("command".into(), self.command.clone()),
            ("seed".into(), self.seed.to_string()),
            ("config_sha256".into(), self.hash.clone()),
            ("basis".into(), BASIS_CONVENTION.into()),
            ("config".into(), self.config.to_string()),
        ]
    }

    pub fn meta(&self) -> Value {
        json!({
            "scqc_version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "seed": self.seed,
            "config_sha256": self.hash,
            "basis": BASIS_CONVENTION,
            "config": self.config,
        })
    }

    pub fn create(&self, name: &str) -> anyhow::Result<BufWriter<File>> {
        fs::create_dir_all(&self.out).with_context(|| format!("creating {}", self.out.display()))?;
        let path = self.out.join(name);
        Ok(BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?))
    }

    /// Writes `body` with the run metadata under `"meta"` and returns it.
    pub fn write_json(&self, name: &str, mut body: Value) -> anyhow::Result<Value> {
        body["meta"] = self.meta();
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, &body)?;
        writeln!(w)?;
        w.flush()?;
        Ok(body)
    }

    /// A plain numeric table with the run header.
    pub fn write_table(&self, name: &str, columns: &[String], rows: &[Vec<f64>]) -> anyhow::Result<()> {
        let mut w = self.create(name)?;
        scqc::io::write_header(&mut w, &self.header())?;
        writeln!(w, "{}", columns.join(","))?;
        for row in rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// A noise grid: explicit values or `points` log-spaced values.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Values(Vec<f64>),
    Log(LogGrid),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn log(min: f64, max: f64, points: usize) -> Self {
        GridSpec::Log(LogGrid { min, max, points })
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            GridSpec::Values(v) => v.clone(),
            GridSpec::Log(g) => log_grid(g.min, g.max, g.points),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        let g: GridSpec = serde_json::from_value(json!([1e-3, 1e-2])).unwrap();
        assert_eq!(g.values(), vec![1e-3, 1e-2]);
        let g: GridSpec = serde_json::from_value(json!({"min": 1e-3, "max": 1e-1, "points": 3})).unwrap();
        assert!((g.values()[1] - 1e-2).abs() < 1e-15);
        assert!(serde_json::from_value::<GridSpec>(json!({"min": 1e-3, "max": 1e-1, "pts": 3})).is_err());
    }

    #[test]
    fn hash_depends_on_seed_and_config() {
        let out = Path::new("unused");
        let mut a = RunContext::new("jp", 1, out, Path::new(""));
        a.set_config(&json!({"chi": 1.0})).unwrap();
        let mut b = RunContext::new("jp", 2, out, Path::new(""));
        b.set_config(&json!({"chi": 1.0})).unwrap();
        let mut c = RunContext::new("jp", 1, out, Path::new(""));
        c.set_config(&json!({"chi": 2.0})).unwrap();
        assert_ne!(a.hash, b.hash);
        assert_ne!(a.hash, c.hash);
        assert_eq!(a.hash.len(), 64);
    }
}
