//! Experiment configuration: JSON ingestion with exact rational rates,
//! semantic validation with field-level diagnostics, and a content hash
//! for the run manifest.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::rational::{Rational, RationalSpec};
use crate::schedulers::PolicyKind;
use crate::switch::{RateMatrix, SwitchConfig};

fn default_checkpoint() -> u64 {
    100
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub t: usize,
    pub horizon_slots: u64,
    #[serde(default = "default_checkpoint")]
    pub checkpoint_interval: u64,
    pub seed: u64,
    pub policies: Vec<PolicyKind>,
    /// Target rate matrix, exact rationals.
    pub target: Vec<Vec<RationalSpec>>,
    /// Optional utility weights for NUM-driven workflows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utility_weights: Option<Vec<Vec<RationalSpec>>>,
    /// Output directory for traces and the manifest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let config: ExperimentConfig = serde_json::from_str(&text)?;
        Ok(config)
    }

    pub fn switch_config(&self) -> Result<SwitchConfig> {
        SwitchConfig::new(self.n, self.t)
            .map_err(|_| Error::config("n/t", "n and t must both be at least 1"))
    }

    pub fn target_matrix(&self) -> Result<RateMatrix> {
        let rows = parse_matrix(&self.target, self.n, "target")?;
        RateMatrix::new(rows).map_err(|_| Error::config("target", "entries must be nonnegative"))
    }

    pub fn utility_matrix(&self) -> Result<Option<SquareMatrix<Rational>>> {
        match &self.utility_weights {
            None => Ok(None),
            Some(rows) => Ok(Some(parse_matrix(rows, self.n, "utility_weights")?)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.switch_config()?;
        if self.horizon_slots == 0 || self.horizon_slots % self.t as u64 != 0 {
            return Err(Error::config(
                "horizon_slots",
                format!(
                    "must be a positive multiple of the frame length t={} (got {})",
                    self.t, self.horizon_slots
                ),
            ));
        }
        if self.checkpoint_interval == 0 {
            return Err(Error::config("checkpoint_interval", "must be positive"));
        }
        if self.policies.is_empty() {
            return Err(Error::config("policies", "at least one policy required"));
        }
        self.target_matrix()?;
        self.utility_matrix()?;
        Ok(())
    }

    /// SHA-256 of the canonical JSON serialization.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&json);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn parse_matrix(
    rows: &[Vec<RationalSpec>],
    n: usize,
    field: &str,
) -> Result<SquareMatrix<Rational>> {
    if rows.len() != n {
        return Err(Error::config(
            field,
            format!("expected {n} rows, got {}", rows.len()),
        ));
    }
    let mut parsed = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::config(
                field,
                format!("row {i} has {} entries, expected {n}", row.len()),
            ));
        }
        let mut out = Vec::with_capacity(n);
        for spec in row {
            out.push(spec.to_rational(field)?);
        }
        parsed.push(out);
    }
    SquareMatrix::from_rows(parsed)
}
