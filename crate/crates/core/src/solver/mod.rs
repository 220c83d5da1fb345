//! Time integration: leapfrog in full 3D for quasilinear systems and a
//! radial `v = r·u` reduction for scalar semilinear equations.

mod data;
mod full3d;
mod radial;

pub use data::{DataSlot, InitialData, Profile};
pub use full3d::{nonlinear_rhs, Boundary3, Forcing3, Solver3, StepStats, Window};
pub use radial::{
    RadialBoundary, RadialForcing, RadialForm, RadialSolver, RadialState, RadialStats, RadialWindow,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::GridError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("domain too small: {0}")]
    Domain(String),
    #[error("system not supported in radial mode: {0}")]
    NotRadial(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Courant number `dt·max c / h`.
    pub cfl: f64,
    /// Re-evaluations of the nonlinearity after the extrapolated first pass.
    pub picard_iters: usize,
    pub t_end: f64,
    /// `sup |∂u|` above which a run is declared to blow up.
    pub blowup_threshold: f64,
    /// Steps between diagnostics rows.
    pub dump_every: usize,
    /// Fraction of grid points allowed to violate the metric smallness bound
    /// before the run is flagged.
    pub smallness_fraction: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: 0.4,
            picard_iters: 2,
            t_end: 1.0,
            blowup_threshold: 1e6,
            dump_every: 10,
            smallness_fraction: 1e-3,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: String| Err(SolverError::InvalidConfig(m));
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return bad(format!("cfl must lie in (0, 1), got {}", self.cfl));
        }
        if self.picard_iters < 1 {
            return bad("picard_iters must be at least 1".into());
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return bad(format!("t_end must be finite and non-negative, got {}", self.t_end));
        }
        if !(self.blowup_threshold > 0.0) {
            return bad("blowup_threshold must be positive".into());
        }
        if self.dump_every == 0 {
            return bad("dump_every must be at least 1".into());
        }
        Ok(())
    }

    /// Fixed step and step count reaching `t_end` exactly with Courant
    /// number at most `cfl`.
    pub fn time_step(&self, h: f64, max_speed: f64) -> (f64, usize) {
        let dt_max = self.cfl * h / max_speed;
        if self.t_end == 0.0 {
            return (dt_max, 0);
        }
        let steps = (self.t_end / dt_max).ceil().max(1.0) as usize;
        (self.t_end / steps as f64, steps)
    }
}

/// Final state of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RunStatus {
    Completed,
    Blowup { t: f64, location: [f64; 3], sup: f64 },
    /// The metric smallness bound failed on too many points at some time;
    /// the integration itself ran to the end.
    SmallnessViolated { t_first: f64, worst_fraction: f64 },
    AbortedNan { t: f64 },
}

impl RunStatus {
    pub fn label(&self) -> &'static str {
        match self {
            RunStatus::Completed => "completed",
            RunStatus::Blowup { .. } => "blowup",
            RunStatus::SmallnessViolated { .. } => "smallness-violated",
            RunStatus::AbortedNan { .. } => "aborted-nan",
        }
    }

    pub fn blowup_time(&self) -> Option<f64> {
        match self {
            RunStatus::Blowup { t, .. } | RunStatus::AbortedNan { t } => Some(*t),
            _ => None,
        }
    }
}
