//! Solver runs with diagnostics rows every `dump_every` steps.

use serde::{Deserialize, Serialize};

use super::RunError;
use crate::diagnostics::{
    bootstrap_monitor, snapshot_3d, snapshot_radial, DiagnosticsSeries, DiagnosticsSpec, MonitorReport,
};
use crate::grid::dump::FieldDump;
use crate::grid::Grid3;
use crate::solver::{
    Boundary3, Forcing3, InitialData, RadialBoundary, RadialForcing, RadialForm, RadialSolver, RunStatus,
    Solver3, SolverConfig, SolverError,
};
use crate::system::NumericSystem;

/// Final time level of a run.
#[derive(Debug, Clone, PartialEq)]
pub enum FinalState {
    Full3d(FieldDump),
    Radial { t: f64, dr: f64, u: Vec<f64>, ut: Vec<f64> },
}

/// `sup |∂u|` sampled at the diagnostics cadence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecaySample {
    pub t: f64,
    pub sup_du: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub series: DiagnosticsSeries,
    pub monitor: MonitorReport,
    pub decay: Vec<DecaySample>,
    pub dt: f64,
    pub steps: usize,
    pub final_state: FinalState,
}

impl RunOutcome {
    /// `max_t |E_flat(t) − E_flat(0)| / E_flat(0)`, zero for a zero start.
    pub fn energy_drift(&self) -> f64 {
        let Some(first) = self.series.rows.first() else {
            return 0.0;
        };
        let e0 = first.snapshot.e_flat;
        if e0 == 0.0 {
            return 0.0;
        }
        self.series
            .rows
            .iter()
            .map(|r| (r.snapshot.e_flat - e0).abs() / e0)
            .fold(0.0, f64::max)
    }

    pub fn cemp_max(&self) -> f64 {
        self.series.rows.iter().map(|r| r.cemp_energy).fold(0.0, f64::max)
    }
}

/// Tracks the status flags raised along a run.
struct StatusTracker {
    threshold: f64,
    smallness_fraction: f64,
    t_end: f64,
    smallness: Option<(f64, f64)>,
}

enum Verdict {
    Continue,
    Stop(RunStatus),
    /// Past `t_end` while only finishing the last diagnostics window.
    Quiet,
}

impl StatusTracker {
    fn new(cfg: &SolverConfig) -> Self {
        Self {
            threshold: cfg.blowup_threshold,
            smallness_fraction: cfg.smallness_fraction,
            t_end: cfg.t_end,
            smallness: None,
        }
    }

    fn observe(&mut self, t: f64, sup: f64, location: [f64; 3], finite: bool, small_fraction: f64) -> Verdict {
        let inside = t <= self.t_end * (1.0 + 1e-12);
        let abort = if !finite {
            Some(RunStatus::AbortedNan { t })
        } else if sup > self.threshold {
            Some(RunStatus::Blowup { t, location, sup })
        } else {
            None
        };
        if let Some(status) = abort {
            return if inside { Verdict::Stop(status) } else { Verdict::Quiet };
        }
        if inside && small_fraction > self.smallness_fraction {
            let entry = self.smallness.get_or_insert((t, small_fraction));
            entry.1 = entry.1.max(small_fraction);
        }
        Verdict::Continue
    }

    fn finish(&self) -> RunStatus {
        match self.smallness {
            Some((t_first, worst_fraction)) => RunStatus::SmallnessViolated { t_first, worst_fraction },
            None => RunStatus::Completed,
        }
    }
}

/// Step indices of the diagnostics rows: multiples of `every` and the last
/// step.
fn is_row(center: usize, every: usize, total: usize) -> bool {
    center <= total && (center.is_multiple_of(every) || center == total)
}

/// Cube large enough that no boundary reaches the data's domain of
/// dependence before `t_end`.
pub fn check_cube_domain(grid: &Grid3, data: &InitialData, max_speed: f64, t_end: f64) -> Result<(), SolverError> {
    let Some(r0) = data.support_radius() else {
        return Err(SolverError::Domain(
            "unbounded data need prescribed boundary values".into(),
        ));
    };
    if r0 == 0.0 {
        return Ok(());
    }
    let offset = data.center.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let reach = offset + r0 + max_speed * t_end;
    if reach > grid.l {
        return Err(SolverError::Domain(format!(
            "support {r0} around offset {offset} plus c·t_end = {} reaches {reach} > L = {}",
            max_speed * t_end,
            grid.l
        )));
    }
    Ok(())
}

/// Same check for the radial interval when the outer value is held fixed.
pub fn check_radial_domain(
    r_max: f64,
    data: &InitialData,
    c: f64,
    t_end: f64,
    boundary: RadialBoundary,
) -> Result<(), SolverError> {
    if boundary == RadialBoundary::Outgoing {
        return Ok(());
    }
    let r0 = data
        .support_radius()
        .ok_or_else(|| SolverError::Domain("unbounded data in radial mode".into()))?;
    if r0 > 0.0 && r0 + c * t_end > r_max {
        return Err(SolverError::Domain(format!(
            "support {r0} plus c·t_end = {} exceeds rmax = {r_max}",
            c * t_end
        )));
    }
    Ok(())
}

/// Full 3D run with the cube sized by domain of dependence.
pub fn run_full3d(
    grid: Grid3,
    sys: &NumericSystem,
    data: &InitialData,
    cfg: &SolverConfig,
    spec: &DiagnosticsSpec,
    forcing: Option<Forcing3>,
    drift_tolerance: f64,
) -> Result<RunOutcome, RunError> {
    check_cube_domain(&grid, data, sys.max_speed(), cfg.t_end)?;
    spec.validate()?;
    let history = spec.history();
    let mut solver = Solver3::new(grid, sys, data, cfg.clone(), history, Boundary3::Fixed, forcing.clone())?;
    let total = solver.total_steps();
    let mut series = DiagnosticsSeries::new(spec.budget, spec.sobolev_order);
    let mut decay = Vec::new();
    let mut tracker = StatusTracker::new(cfg);
    let mut status = None;
    for s in 1..=total + history {
        let stats = solver.step();
        let center_of_step = s - 1;
        if is_row(center_of_step, cfg.dump_every, total) {
            decay.push(DecaySample { t: stats.t, sup_du: stats.sup_du });
        }
        match tracker.observe(stats.t, stats.sup_du, stats.sup_location, stats.finite, stats.smallness_fraction()) {
            Verdict::Continue => {}
            Verdict::Stop(st) => {
                status = Some(st);
                break;
            }
            Verdict::Quiet => break,
        }
        if s >= history && is_row(s - history, cfg.dump_every, total) {
            let window = solver.window(history)?;
            series.push(snapshot_3d(&window, solver.system(), spec, forcing.as_ref())?);
        }
    }
    series.finish(drift_tolerance);
    let epsilon = data.amplitude.abs();
    let monitor = bootstrap_monitor(&series, epsilon);
    let final_state = {
        let w = solver.window(1)?;
        FinalState::Full3d(FieldDump {
        grid,
        t: w.t,
        u: w.families.iter().map(|f| f.center().to_vec()).collect(),
        ut: w
            .families
            .iter()
            .map(|f| f.partial(0).map(|p| p.into_center()))
            .collect::<Result<_, _>>()
            .map_err(SolverError::from)?,
    })
    };
    Ok(RunOutcome {
        status: status.unwrap_or_else(|| tracker.finish()),
        series,
        monitor,
        decay,
        dt: solver.dt(),
        steps: solver.steps_taken(),
        final_state,
    })
}

/// Radial run of a scalar semilinear equation.
#[allow(clippy::too_many_arguments)]
pub fn run_radial(
    form: RadialForm,
    r_max: f64,
    m: usize,
    boundary: RadialBoundary,
    data: &InitialData,
    cfg: &SolverConfig,
    spec: &DiagnosticsSpec,
    forcing: Option<RadialForcing>,
    drift_tolerance: f64,
) -> Result<RunOutcome, RunError> {
    check_radial_domain(r_max, data, form.c, cfg.t_end, boundary)?;
    spec.validate()?;
    let history = spec.history();
    let mut solver = RadialSolver::from_data(form, r_max, m, cfg.clone(), history, boundary, forcing.clone(), data)?;
    let total = solver.total_steps();
    let mut series = DiagnosticsSeries::new(spec.budget, spec.sobolev_order);
    let mut decay = Vec::new();
    let mut tracker = StatusTracker::new(cfg);
    let mut status = None;
    for s in 1..=total + history {
        let stats = solver.step();
        if is_row(s - 1, cfg.dump_every, total) {
            decay.push(DecaySample { t: stats.t, sup_du: stats.sup_du });
        }
        match tracker.observe(stats.t, stats.sup_du, [stats.sup_radius, 0.0, 0.0], stats.finite, 0.0) {
            Verdict::Continue => {}
            Verdict::Stop(st) => {
                status = Some(st);
                break;
            }
            Verdict::Quiet => break,
        }
        if s >= history && is_row(s - history, cfg.dump_every, total) {
            let window = solver.window(history)?;
            series.push(snapshot_radial(&window, &form, spec, forcing.as_ref())?);
        }
    }
    series.finish(drift_tolerance);
    let monitor = bootstrap_monitor(&series, data.amplitude.abs());
    let w = solver.window(1)?;
    let (prev, next) = (&w.levels[0], &w.levels[2]);
    let ut = prev.iter().zip(next).map(|(a, b)| (b - a) / (2.0 * w.dt)).collect();
    Ok(RunOutcome {
        status: status.unwrap_or_else(|| tracker.finish()),
        series,
        monitor,
        decay,
        dt: solver.dt(),
        steps: solver.steps_taken(),
        final_state: FinalState::Radial {
            t: w.t,
            dr: w.dr,
            u: w.center().to_vec(),
            ut,
        },
    })
}
