//! Weighted norms, the perturbed energy, vector-field quantities and the
//! bootstrap monitor, evaluated on solver windows.

mod energy;
mod monitor;
mod norms;
mod radial;
mod series;
mod snapshot;

pub use energy::{
    energy_form, energy_form_point, flat_energy, positivity_margin_point, EnergyReport,
};
pub use monitor::{bootstrap_monitor, MonitorReport};
pub use norms::{
    japanese, radial_weighted_sobolev_norm, radial_weighted_sobolev_profile, weighted_sobolev_norm,
    weighted_sobolev_profile,
};
pub use radial::{radial_d1, radial_integral, radial_l2, RadialField, RadialSlab};
pub use series::{energy_inequality_residual, DiagnosticsRow, DiagnosticsSeries, ResidualReport};
pub use snapshot::{gamma_quantities, radial_gamma_quantities, snapshot_3d, snapshot_radial, GammaQuantities, Snapshot};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::GridError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("order {order} exceeds the derivative budget {budget}")]
    BudgetExceeded { order: usize, budget: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Largest order accepted by the weighted Sobolev norms.
pub const SOBOLEV_BUDGET: usize = 4;

/// What a diagnostics row contains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsSpec {
    /// Vector-field budget `M` for `Γ^α` with `|α| ≤ M`.
    pub budget: usize,
    /// Highest weighted Sobolev order reported (`H1 … Hm`).
    pub sobolev_order: usize,
}

impl DiagnosticsSpec {
    pub fn full3d() -> Self {
        Self {
            budget: 2,
            sobolev_order: 2,
        }
    }

    pub fn radial() -> Self {
        Self {
            budget: 4,
            sobolev_order: 2,
        }
    }

    /// Time levels needed on each side of a row's center.
    pub fn history(&self) -> usize {
        (self.budget + 1).max(2)
    }

    pub fn validate(&self) -> Result<(), DiagnosticsError> {
        if self.sobolev_order > SOBOLEV_BUDGET {
            return Err(DiagnosticsError::BudgetExceeded {
                order: self.sobolev_order,
                budget: SOBOLEV_BUDGET,
            });
        }
        Ok(())
    }
}

impl Default for DiagnosticsSpec {
    fn default() -> Self {
        Self::full3d()
    }
}
