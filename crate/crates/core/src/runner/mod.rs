//! Scenario configs, complete runs with diagnostics, run manifests and
//! convergence studies.

mod config;
mod convergence;
mod record;
mod run;

pub use config::{GridSpec, Mode, ScenarioConfig};
pub use convergence::{
    check_nested, convergence_study, nested_levels, ConvergenceTable, ErrorKind, FieldConvergence, ORDER_BAND,
};
pub use record::{blob_hash, rung_dir, sha256_hex, write_artifacts, ExperimentRecord};
pub use run::{
    check_cube_domain, check_radial_domain, run_full3d, run_radial, DecaySample, FinalState, RunOutcome,
};

use std::time::Instant;

use thiserror::Error;

use crate::diagnostics::DiagnosticsError;
use crate::grid::{Grid3, GridError};
use crate::solver::{RadialForm, SolverError};
use crate::system::{SystemError, WaveSystem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunError {
    #[error("invalid scenario: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl From<GridError> for RunError {
    fn from(e: GridError) -> Self {
        RunError::Solver(SolverError::Grid(e))
    }
}

/// Runs ladder rung `k` of a scenario.
pub fn run_rung(cfg: &ScenarioConfig, sys: &WaveSystem, k: usize) -> Result<RunOutcome, RunError> {
    let data = cfg.rung(k);
    let spec = cfg.diagnostics_spec();
    match cfg.grid {
        GridSpec::Cube { l, n } => {
            let grid = Grid3::new(l, n)?;
            run_full3d(grid, &sys.numeric(), &data, &cfg.solver, &spec, None, cfg.drift_tolerance)
        }
        GridSpec::Radial { rmax, m } => {
            let form = RadialForm::from_system(sys)?;
            run_radial(
                form,
                rmax,
                m,
                cfg.radial_boundary,
                &data,
                &cfg.solver,
                &spec,
                None,
                cfg.drift_tolerance,
            )
        }
    }
}

/// Runs every rung and builds its record; `threads` is only recorded.
pub fn run_scenario(
    cfg: &ScenarioConfig,
    sys: &WaveSystem,
    system_text: &str,
    threads: usize,
) -> Result<Vec<(ExperimentRecord, RunOutcome)>, RunError> {
    cfg.validate()?;
    (0..cfg.ladder.len())
        .map(|k| {
            let start = Instant::now();
            let outcome = run_rung(cfg, sys, k)?;
            let wall = start.elapsed().as_secs_f64();
            Ok((ExperimentRecord::new(cfg, system_text, k, &outcome, threads, wall), outcome))
        })
        .collect()
}
