//! Run manifests and the artifacts written next to them.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{FinalState, RunError, RunOutcome, ScenarioConfig};
use crate::grid::dump::write_dump;
use crate::solver::RunStatus;

/// Hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Git-style object hash: SHA-256 over `blob <len>\0` followed by the
/// content.
pub fn blob_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Summary of one ladder rung.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub rung: usize,
    pub amplitude: f64,
    /// SHA-256 of the canonical config.
    pub config_hash: String,
    /// Git-style hash over the canonical config followed by the system file.
    pub inputs_hash: String,
    pub seed: u64,
    pub threads: usize,
    #[serde(flatten)]
    pub status: RunStatus,
    pub t_star: Option<f64>,
    pub a0_emp: f64,
    pub a1_emp: f64,
    pub a2_emp: f64,
    /// `A₂ε`.
    pub growth_exponent: f64,
    pub cemp_max: f64,
    /// `(t, C_emp)` per diagnostics row.
    pub cemp_table: Vec<[f64; 2]>,
    pub cemp_flagged: Vec<f64>,
    pub energy_drift: f64,
    pub rows: usize,
    pub steps: usize,
    pub dt: f64,
    pub wall_time_s: f64,
    pub config: ScenarioConfig,
}

impl ExperimentRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        cfg: &ScenarioConfig,
        system_text: &str,
        rung: usize,
        outcome: &RunOutcome,
        threads: usize,
        wall_time_s: f64,
    ) -> Self {
        let canonical = cfg.canonical();
        let mut inputs = canonical.clone().into_bytes();
        inputs.extend_from_slice(system_text.as_bytes());
        let mut materialized = cfg.clone();
        materialized.diagnostics = Some(cfg.diagnostics_spec());
        Self {
            experiment: cfg.experiment.clone(),
            rung,
            amplitude: cfg.rung(rung).amplitude,
            config_hash: sha256_hex(canonical.as_bytes()),
            inputs_hash: blob_hash(&inputs),
            seed: cfg.seed,
            threads,
            status: outcome.status.clone(),
            t_star: outcome.status.blowup_time(),
            a0_emp: outcome.monitor.a0,
            a1_emp: outcome.monitor.a1,
            a2_emp: outcome.monitor.a2,
            growth_exponent: outcome.monitor.exponent,
            cemp_max: outcome.cemp_max(),
            cemp_table: outcome
                .series
                .rows
                .iter()
                .map(|r| [r.snapshot.t, r.cemp_energy])
                .collect(),
            cemp_flagged: outcome.series.flagged.clone(),
            energy_drift: outcome.energy_drift(),
            rows: outcome.series.rows.len(),
            steps: outcome.steps,
            dt: outcome.dt,
            wall_time_s,
            config: materialized,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }
}

/// Directory for rung `k`: the experiment id, suffixed when the ladder has
/// several rungs.
pub fn rung_dir(out_dir: &Path, cfg: &ScenarioConfig, k: usize) -> PathBuf {
    if cfg.ladder.len() > 1 {
        out_dir.join(format!("{}-rung{k}", cfg.experiment))
    } else {
        out_dir.join(&cfg.experiment)
    }
}

/// Writes `series.csv`, the final-state dump and `manifest.json`.
pub fn write_artifacts(
    dir: &Path,
    record: &ExperimentRecord,
    outcome: &RunOutcome,
    dumps: bool,
) -> Result<Vec<PathBuf>, RunError> {
    let io = |p: &Path, e: std::io::Error| RunError::Io(format!("{}: {e}", p.display()));
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut written = Vec::new();
    let csv = dir.join("series.csv");
    std::fs::write(&csv, outcome.series.to_csv()).map_err(|e| io(&csv, e))?;
    written.push(csv);
    if dumps {
        match &outcome.final_state {
            FinalState::Full3d(dump) => {
                let p = dir.join("final.nwv1");
                let f = std::fs::File::create(&p).map_err(|e| io(&p, e))?;
                write_dump(std::io::BufWriter::new(f), dump)?;
                written.push(p);
            }
            FinalState::Radial { t, dr, u, ut } => {
                let p = dir.join("final_radial.csv");
                let mut text = format!("# t={t}\nr,u,ut\n");
                for i in 0..u.len() {
                    text.push_str(&format!("{},{},{}\n", i as f64 * dr, u[i], ut[i]));
                }
                std::fs::write(&p, text).map_err(|e| io(&p, e))?;
                written.push(p);
            }
        }
    }
    let manifest = dir.join("manifest.json");
    std::fs::write(&manifest, record.to_json()).map_err(|e| io(&manifest, e))?;
    written.push(manifest);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digests() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        // `git hash-object --object-format=sha256` of an empty blob
        assert_eq!(
            blob_hash(b""),
            "473a0f4c3be8a93681a267e3b1e9a7dcda1185436fe141f7749120a303721813"
        );
    }
}
