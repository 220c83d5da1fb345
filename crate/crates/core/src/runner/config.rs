//! Scenario configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::RunError;
use crate::diagnostics::DiagnosticsSpec;
use crate::solver::{InitialData, RadialBoundary, SolverConfig};
use crate::system::{parse_system, WaveSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Full3d,
    Radial,
}

/// Cube `[−L, L]³` with `n` points per axis, or `m` radial intervals on
/// `[0, rmax]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GridSpec {
    Cube {
        #[serde(rename = "L")]
        l: f64,
        n: usize,
    },
    Radial {
        rmax: f64,
        m: usize,
    },
}

impl GridSpec {
    /// Points per axis or radial intervals.
    pub fn resolution(&self) -> usize {
        match *self {
            GridSpec::Cube { n, .. } => n,
            GridSpec::Radial { m, .. } => m,
        }
    }

    pub fn with_resolution(&self, k: usize) -> Self {
        match *self {
            GridSpec::Cube { l, .. } => GridSpec::Cube { l, n: k },
            GridSpec::Radial { rmax, .. } => GridSpec::Radial { rmax, m: k },
        }
    }
}

fn default_ladder() -> Vec<f64> {
    vec![1.0]
}

fn default_drift_tolerance() -> f64 {
    1e-8
}

/// One experiment: a system file, a grid, initial data and run settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub experiment: String,
    /// Path to the system file, relative to the config file.
    pub system: PathBuf,
    pub mode: Mode,
    pub grid: GridSpec,
    pub data: InitialData,
    /// Multipliers applied to `data.amplitude`; one run per entry.
    #[serde(default = "default_ladder")]
    pub ladder: Vec<f64>,
    #[serde(default)]
    pub solver: SolverConfig,
    /// Defaults to the mode's standard budget when absent.
    #[serde(default)]
    pub diagnostics: Option<DiagnosticsSpec>,
    #[serde(default)]
    pub radial_boundary: RadialBoundary,
    /// A run that does not complete counts as a negative verdict.
    #[serde(default)]
    pub require_completion: bool,
    /// Relative growth of `E` per unit time tolerated where the bracket of
    /// the energy inequality vanishes.
    #[serde(default = "default_drift_tolerance")]
    pub drift_tolerance: f64,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    /// Write the final state of every run.
    #[serde(default = "default_true")]
    pub dumps: bool,
}

fn default_true() -> bool {
    true
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, RunError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; the returned directory anchors relative paths.
    pub fn load(path: &Path) -> Result<(Self, PathBuf), RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
        let cfg = Self::parse(&text)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((cfg, base))
    }

    /// Canonical JSON with every default written out.
    pub fn canonical(&self) -> String {
        let mut c = self.clone();
        c.diagnostics = Some(self.diagnostics_spec());
        serde_json::to_string_pretty(&c).expect("config serializes")
    }

    pub fn diagnostics_spec(&self) -> DiagnosticsSpec {
        self.diagnostics.unwrap_or(match self.mode {
            Mode::Full3d => DiagnosticsSpec::full3d(),
            Mode::Radial => DiagnosticsSpec::radial(),
        })
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let bad = |m: String| Err(RunError::Config(m));
        match (self.mode, self.grid) {
            (Mode::Full3d, GridSpec::Cube { .. }) | (Mode::Radial, GridSpec::Radial { .. }) => {}
            (Mode::Full3d, _) => return bad("mode full3d needs a grid with L and n".into()),
            (Mode::Radial, _) => return bad("mode radial needs a grid with rmax and m".into()),
        }
        if self.ladder.is_empty() || self.ladder.iter().any(|a| !a.is_finite()) {
            return bad("ladder must hold finite multipliers".into());
        }
        if !self.data.amplitude.is_finite() || !(self.data.width > 0.0) {
            return bad("data needs a finite amplitude and a positive width".into());
        }
        if self.experiment.is_empty() || self.experiment.contains(['/', '\\']) {
            return bad(format!("experiment id {:?} is not a plain name", self.experiment));
        }
        self.solver.validate()?;
        self.diagnostics_spec().validate()?;
        Ok(())
    }

    pub fn system_path(&self, base: &Path) -> PathBuf {
        base.join(&self.system)
    }

    /// Reads the system file; returns the system and the raw text.
    pub fn load_system(&self, base: &Path) -> Result<(WaveSystem, String), RunError> {
        let path = self.system_path(base);
        let text = std::fs::read_to_string(&path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
        let sys = parse_system(&text)?;
        Ok((sys, text))
    }

    /// The data of ladder rung `k`.
    pub fn rung(&self, k: usize) -> InitialData {
        let mut d = self.data.clone();
        d.amplitude *= self.ladder[k];
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RADIAL: &str = r#"{
        "experiment": "demo",
        "system": "q0.json",
        "mode": "radial",
        "grid": {"rmax": 40, "m": 400},
        "data": {"profile": {"kind": "bump", "power": 4}, "amplitude": 0.1, "width": 2, "slot": "displacement"}
    }"#;

    #[test]
    fn defaults_are_materialized() {
        let cfg = ScenarioConfig::parse(RADIAL).unwrap();
        assert_eq!(cfg.ladder, vec![1.0]);
        assert_eq!(cfg.diagnostics_spec(), DiagnosticsSpec::radial());
        let canon = cfg.canonical();
        assert!(canon.contains("\"budget\": 4"));
        assert!(canon.contains("\"cfl\": 0.4"));
    }

    #[test]
    fn canonical_form_round_trips() {
        let cfg = ScenarioConfig::parse(RADIAL).unwrap();
        let canon = cfg.canonical();
        let again = ScenarioConfig::parse(&canon).unwrap();
        assert_eq!(again.canonical(), canon);
    }

    #[test]
    fn mode_and_grid_must_agree() {
        let text = RADIAL.replace(r#""mode": "radial""#, r#""mode": "full3d""#);
        assert!(matches!(ScenarioConfig::parse(&text), Err(RunError::Config(_))));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = RADIAL.replace(r#""experiment""#, r#""colour": 1, "experiment""#);
        assert!(ScenarioConfig::parse(&text).is_err());
    }
}
