//! Grid-refinement studies on nested resolutions.

use serde::{Deserialize, Serialize};

use super::{check_cube_domain, check_radial_domain, GridSpec, Mode, RunError, ScenarioConfig};
use crate::grid::Grid3;
use crate::solver::{Boundary3, RadialForm, RadialSolver, Solver3};
use crate::system::WaveSystem;

/// Accepted band for observed orders.
pub const ORDER_BAND: (f64, f64) = (1.7, 2.3);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    /// Against the exact plane-wave solution.
    Exact,
    /// Differences between consecutive levels on the coarser grid.
    SelfConvergence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldConvergence {
    pub field: String,
    /// One entry per error measurement, finest last.
    pub errors: Vec<f64>,
    /// `log₂(e_k / e_{k+1})`.
    pub orders: Vec<f64>,
    /// Every error is exactly zero.
    pub exact: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub kind: ErrorKind,
    pub resolutions: Vec<usize>,
    pub fields: Vec<FieldConvergence>,
}

impl ConvergenceTable {
    pub fn pass(&self) -> bool {
        self.fields.iter().all(|f| f.pass)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("kind: {:?}\nresolutions: {:?}\n", self.kind, self.resolutions);
        s.push_str("field,errors,orders,verdict\n");
        for f in &self.fields {
            let errs: Vec<String> = f.errors.iter().map(|e| format!("{e:.6e}")).collect();
            let ords: Vec<String> = f.orders.iter().map(|p| format!("{p:.4}")).collect();
            let verdict = if f.exact {
                "exact"
            } else if f.pass {
                "pass"
            } else {
                "fail"
            };
            s.push_str(&format!("{},{},{},{}\n", f.field, errs.join(" "), ords.join(" "), verdict));
        }
        s
    }
}

/// `k` nested resolutions starting from `base`: `n ↦ 2n − 1` for cubes,
/// `m ↦ 2m` for radial intervals.
pub fn nested_levels(mode: Mode, base: usize, k: usize) -> Vec<usize> {
    let mut out = vec![base];
    for _ in 1..k {
        let last = *out.last().expect("nonempty");
        out.push(match mode {
            Mode::Full3d => 2 * last - 1,
            Mode::Radial => 2 * last,
        });
    }
    out
}

/// Rejects fewer than three levels or levels that do not nest.
pub fn check_nested(mode: Mode, levels: &[usize]) -> Result<(), RunError> {
    if levels.len() < 3 {
        return Err(RunError::Config(format!("need at least 3 levels, got {}", levels.len())));
    }
    for w in levels.windows(2) {
        let ok = match mode {
            Mode::Full3d => w[1] + 1 == 2 * w[0],
            Mode::Radial => w[1] == 2 * w[0],
        };
        if !ok {
            return Err(RunError::Config(format!("levels {} and {} are not nested", w[0], w[1])));
        }
    }
    Ok(())
}

/// Runs the scenario at every level and reports per-field orders.
pub fn convergence_study(cfg: &ScenarioConfig, sys: &WaveSystem, levels: &[usize]) -> Result<ConvergenceTable, RunError> {
    check_nested(cfg.mode, levels)?;
    let data = cfg.rung(0);
    let exact = data.support_radius().is_none();
    let numeric = sys.numeric();
    let d = numeric.families();
    // finals[level][family] on the level's own grid
    let mut finals: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut errors: Vec<Vec<f64>> = vec![Vec::new(); d];
    for &res in levels {
        let spec = cfg.grid.with_resolution(res);
        let u = match (cfg.mode, spec) {
            (Mode::Full3d, GridSpec::Cube { l, n }) => {
                let grid = Grid3::new(l, n)?;
                let boundary = if exact {
                    let data = data.clone();
                    let speeds = numeric.speeds.clone();
                    Boundary3::Prescribed(std::sync::Arc::new(move |i, t, x| {
                        data.plane_wave_exact(i, speeds[i], t, x).unwrap_or(0.0)
                    }))
                } else {
                    check_cube_domain(&grid, &data, numeric.max_speed(), cfg.solver.t_end)?;
                    Boundary3::Fixed
                };
                let mut solver = Solver3::new(grid, &numeric, &data, cfg.solver.clone(), 1, boundary, None)?;
                while !solver.finished() {
                    let st = solver.step();
                    if !st.finite || st.sup_du > cfg.solver.blowup_threshold {
                        return Err(RunError::Numerical(format!("run at resolution {res} did not complete")));
                    }
                }
                let u = solver.newest().to_vec();
                if exact {
                    let t = solver.time();
                    for (i, ui) in u.iter().enumerate() {
                        let ex = grid.sample(|x| data.plane_wave_exact(i, numeric.speeds[i], t, x).unwrap_or(0.0));
                        let diff: Vec<f64> = ui.iter().zip(&ex).map(|(a, b)| a - b).collect();
                        errors[i].push(rms(&grid, &diff));
                    }
                }
                u
            }
            (Mode::Radial, GridSpec::Radial { rmax, m }) => {
                let form = RadialForm::from_system(sys)?;
                check_radial_domain(rmax, &data, form.c, cfg.solver.t_end, cfg.radial_boundary)?;
                let mut solver =
                    RadialSolver::from_data(form, rmax, m, cfg.solver.clone(), 1, cfg.radial_boundary, None, &data)?;
                while !solver.finished() {
                    let st = solver.step();
                    if !st.finite || st.sup_du > cfg.solver.blowup_threshold {
                        return Err(RunError::Numerical(format!("run at resolution {res} did not complete")));
                    }
                }
                vec![solver.newest_u()]
            }
            _ => return Err(RunError::Config("mode and grid disagree".into())),
        };
        finals.push(u);
    }
    let kind = if exact { ErrorKind::Exact } else { ErrorKind::SelfConvergence };
    if !exact {
        for k in 0..levels.len() - 1 {
            for (i, err) in errors.iter_mut().enumerate() {
                err.push(coarse_difference(cfg, levels[k], &finals[k][i], &finals[k + 1][i])?);
            }
        }
    }
    let fields = errors
        .into_iter()
        .enumerate()
        .map(|(i, errors)| {
            let all_zero = errors.iter().all(|&e| e == 0.0);
            let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
            let pass = all_zero || orders.iter().all(|p| (ORDER_BAND.0..=ORDER_BAND.1).contains(p));
            FieldConvergence {
                field: format!("u{}", i + 1),
                errors,
                orders: if all_zero { Vec::new() } else { orders },
                exact: all_zero,
                pass,
            }
        })
        .collect();
    Ok(ConvergenceTable {
        kind,
        resolutions: levels.to_vec(),
        fields,
    })
}

fn rms(grid: &Grid3, f: &[f64]) -> f64 {
    grid.l2(f) / (2.0 * grid.l).powi(3).sqrt()
}

/// RMS of `coarse − fine` on the coarse points.
fn coarse_difference(cfg: &ScenarioConfig, res: usize, coarse: &[f64], fine: &[f64]) -> Result<f64, RunError> {
    match cfg.mode {
        Mode::Full3d => {
            let GridSpec::Cube { l, .. } = cfg.grid else {
                return Err(RunError::Config("mode and grid disagree".into()));
            };
            let g = Grid3::new(l, res)?;
            let nf = 2 * res - 1;
            let diff = g.build(|p| {
                let [i, j, k] = g.ijk(p);
                coarse[p] - fine[2 * i + nf * (2 * j + nf * 2 * k)]
            });
            Ok(rms(&g, &diff))
        }
        Mode::Radial => {
            let GridSpec::Radial { rmax, .. } = cfg.grid else {
                return Err(RunError::Config("mode and grid disagree".into()));
            };
            let dr = rmax / res as f64;
            // r² weight: the 3D L² norm of a radial field
            let s: f64 = (0..coarse.len())
                .map(|i| {
                    let r = i as f64 * dr;
                    let e = coarse[i] - fine[2 * i];
                    r * r * e * e
                })
                .sum();
            let vol: f64 = rmax.powi(3) / 3.0;
            Ok((s * dr / vol).sqrt())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nesting() {
        assert_eq!(nested_levels(Mode::Full3d, 9, 3), vec![9, 17, 33]);
        assert_eq!(nested_levels(Mode::Radial, 100, 3), vec![100, 200, 400]);
        assert!(check_nested(Mode::Full3d, &[9, 17, 33]).is_ok());
        assert!(check_nested(Mode::Full3d, &[9, 18, 36]).is_err());
        assert!(check_nested(Mode::Radial, &[100, 200]).is_err());
    }
}
