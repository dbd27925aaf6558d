//! Result persistence: RFC-4180 CSV series and a JSON run manifest.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

use super::engine::SimTrace;

/// Fixed-width float formatting so reruns are byte-identical.
pub fn format_value(v: f64) -> String {
    format!("{v:.10}")
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Per-checkpoint gap series for one run.
pub fn write_trace_csv(path: &Path, trace: &SimTrace) -> Result<()> {
    let rows: Vec<Vec<String>> = trace
        .checkpoints
        .iter()
        .map(|c| vec![c.slot.to_string(), format_value(c.gap)])
        .collect();
    write_csv(path, &["slot", "gap"], &rows)
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub experiment: String,
    pub crate_version: String,
    pub seed: u64,
    pub config_hash: String,
    pub wall_clock_ms: u128,
    pub files: Vec<String>,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub details: serde_json::Map<String, serde_json::Value>,
}

impl Manifest {
    pub fn new(experiment: &str, seed: u64, config_hash: String) -> Self {
        Manifest {
            experiment: experiment.to_string(),
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config_hash,
            wall_clock_ms: 0,
            files: Vec::new(),
            details: serde_json::Map::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("manifest.json");
        std::fs::write(&path, serde_json::to_string_pretty(self)?)?;
        Ok(path)
    }
}
