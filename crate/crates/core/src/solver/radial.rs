//! Radially symmetric scalar equations through `v = r·u`, which turns
//! `∂ₜ²u − c²Δu` into `∂ₜ²v − c²∂_r²v`.

use std::collections::VecDeque;
use std::sync::Arc;

use num_traits::Zero;

use super::{InitialData, SolverConfig, SolverError};
use crate::system::{rational, WaveSystem};

/// External source `F(t, r)` for the `u` equation.
pub type RadialForcing = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `N = b₀₀ (∂ₜu)² + β |∇u|²`, the most general radial semilinear form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialForm {
    pub c: f64,
    pub b00: f64,
    pub beta: f64,
}

impl RadialForm {
    /// Reads `c, b₀₀, β` off a scalar semilinear system. The mixed part
    /// `B₀ⱼ + Bⱼ₀` must vanish and the spatial part must be a multiple of the
    /// identity, otherwise the right-hand side is not a function of
    /// `(∂ₜu, ∂_r u)` alone.
    pub fn from_system(sys: &WaveSystem) -> Result<Self, SolverError> {
        if sys.families() != 1 {
            return Err(SolverError::NotRadial(format!(
                "radial mode needs one family, got {}",
                sys.families()
            )));
        }
        if sys.cubic_block(0, 0, 0).iter().any(|v| !v.is_zero()) {
            return Err(SolverError::NotRadial("quasilinear terms present".into()));
        }
        let sym = |a: usize, b: usize| sys.b(0, 0, 0, a, b) + sys.b(0, 0, 0, b, a);
        for j in 1..4 {
            if !sym(0, j).is_zero() {
                return Err(SolverError::NotRadial(format!("mixed coefficient B0{j} is not antisymmetric")));
            }
        }
        let beta2 = sym(1, 1);
        for a in 1..4 {
            for b in 1..4 {
                let want = if a == b { beta2.clone() } else { Zero::zero() };
                if sym(a, b) != want {
                    return Err(SolverError::NotRadial("spatial coefficients are not isotropic".into()));
                }
            }
        }
        Ok(Self {
            c: rational::to_f64(&sys.speeds()[0]),
            b00: rational::to_f64(sys.b(0, 0, 0, 0, 0)),
            beta: rational::to_f64(&beta2) / 2.0,
        })
    }

    pub fn linear(c: f64) -> Self {
        Self { c, b00: 0.0, beta: 0.0 }
    }

    pub fn is_linear(&self) -> bool {
        self.b00 == 0.0 && self.beta == 0.0
    }

    pub fn eval(&self, ut: f64, ur: f64) -> f64 {
        self.b00 * ut * ut + self.beta * ur * ur
    }
}

/// Condition at the outer radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialBoundary {
    /// First-order upwind `v_t + c v_r = 0`.
    #[default]
    Outgoing,
    /// `v` held at its initial value.
    Fixed,
}

/// Two consecutive levels of `v` on `r_i = i·dr`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState {
    pub t: f64,
    pub dr: f64,
    pub previous: Vec<f64>,
    pub current: Vec<f64>,
}

/// Time levels of `u` around a center time.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialWindow {
    pub t: f64,
    pub dt: f64,
    pub dr: f64,
    /// `u` on `r_i = i·dr`, oldest first.
    pub levels: Vec<Vec<f64>>,
}

impl RadialWindow {
    pub fn half(&self) -> usize {
        (self.levels.len() - 1) / 2
    }

    pub fn center(&self) -> &[f64] {
        &self.levels[self.half()]
    }
}

/// Point-level summary of one step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RadialStats {
    pub t: f64,
    pub sup_du: f64,
    pub sup_radius: f64,
    pub finite: bool,
}

pub struct RadialSolver {
    form: RadialForm,
    cfg: SolverConfig,
    dr: f64,
    dt: f64,
    total_steps: usize,
    taken: usize,
    boundary: RadialBoundary,
    forcing: Option<RadialForcing>,
    levels: VecDeque<Vec<f64>>,
    first: isize,
    keep: usize,
}

impl std::fmt::Debug for RadialSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialSolver")
            .field("form", &self.form)
            .field("dr", &self.dr)
            .field("dt", &self.dt)
            .field("taken", &self.taken)
            .finish()
    }
}

impl RadialSolver {
    /// `m + 1` radii `0, dr, …, r_max`; `init(r) = (u(0, r), ∂ₜu(0, r))`.
    #[allow(clippy::too_many_arguments)]
    pub fn new<F>(
        form: RadialForm,
        r_max: f64,
        m: usize,
        cfg: SolverConfig,
        history: usize,
        boundary: RadialBoundary,
        forcing: Option<RadialForcing>,
        init: F,
    ) -> Result<Self, SolverError>
    where
        F: Fn(f64) -> (f64, f64),
    {
        cfg.validate()?;
        if m < 8 {
            return Err(SolverError::InvalidConfig(format!("radial grid needs at least 8 intervals, got {m}")));
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(SolverError::InvalidConfig(format!("r_max must be positive, got {r_max}")));
        }
        if !(form.c > 0.0) {
            return Err(SolverError::InvalidConfig("speed must be positive".into()));
        }
        let dr = r_max / m as f64;
        let (dt, total_steps) = cfg.time_step(dr, form.c);
        let mut solver = Self {
            form,
            cfg,
            dr,
            dt,
            total_steps,
            taken: 0,
            boundary,
            forcing,
            levels: VecDeque::new(),
            first: -1,
            keep: (2 * history + 1).max(3),
        };
        let r: Vec<f64> = (0..=m).map(|i| i as f64 * dr).collect();
        let (u0, ut0): (Vec<f64>, Vec<f64>) = r.iter().map(|&ri| init(ri)).unzip();
        let v0: Vec<f64> = (0..=m).map(|i| r[i] * u0[i]).collect();
        let vt0: Vec<f64> = (0..=m).map(|i| r[i] * ut0[i]).collect();
        // v_tt = c² v_rr + r N + r F at t = 0, with ∂ₜu known exactly
        let ur = solver.radial_gradient(&v0);
        let mut vtt = vec![0.0; m + 1];
        for i in 1..m {
            let vrr = (v0[i + 1] - 2.0 * v0[i] + v0[i - 1]) / (dr * dr);
            vtt[i] = form.c * form.c * vrr + r[i] * (form.eval(ut0[i], ur[i]) + solver.force(0.0, r[i]));
        }
        let mut vm1: Vec<f64> = (0..=m)
            .map(|i| v0[i] - dt * vt0[i] + 0.5 * dt * dt * vtt[i])
            .collect();
        vm1[0] = 0.0;
        vm1[m] = match boundary {
            RadialBoundary::Fixed => v0[m],
            RadialBoundary::Outgoing => v0[m] + form.c * dt / dr * (v0[m] - v0[m - 1]),
        };
        solver.levels.push_back(vm1);
        solver.levels.push_back(v0);
        let mut back: Vec<Vec<f64>> = Vec::new();
        for k in 1..history.max(1) {
            let (older, cur, older2) = match back.len() {
                0 => (&solver.levels[1], &solver.levels[0], None),
                1 => (&solver.levels[0], &back[0], Some(&solver.levels[1])),
                b => (&back[b - 2], &back[b - 1], Some(if b == 2 { &solver.levels[0] } else { &back[b - 3] })),
            };
            let (next, _) = solver.advance(older, cur, older2, -(k as f64) * dt, -dt);
            back.push(next);
        }
        for lvl in back {
            solver.levels.push_front(lvl);
            solver.first -= 1;
        }
        Ok(solver)
    }

    /// Radial solver for `InitialData` evaluated along a ray from its center.
    #[allow(clippy::too_many_arguments)]
    pub fn from_data(
        form: RadialForm,
        r_max: f64,
        m: usize,
        cfg: SolverConfig,
        history: usize,
        boundary: RadialBoundary,
        forcing: Option<RadialForcing>,
        data: &InitialData,
    ) -> Result<Self, SolverError> {
        let c = form.c;
        let center = data.center;
        Self::new(form, r_max, m, cfg, history, boundary, forcing, |r| {
            data.eval(0, c, [center[0] + r, center[1], center[2]])
        })
    }

    pub fn form(&self) -> RadialForm {
        self.form
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn points(&self) -> usize {
        self.levels[0].len()
    }

    pub fn total_steps(&self) -> usize {
        self.total_steps
    }

    pub fn steps_taken(&self) -> usize {
        self.taken
    }

    pub fn finished(&self) -> bool {
        self.taken >= self.total_steps
    }

    pub fn time(&self) -> f64 {
        self.level_time(self.levels.len() - 1)
    }

    fn level_time(&self, k: usize) -> f64 {
        (self.first + k as isize) as f64 * self.dt
    }

    pub fn state(&self) -> RadialState {
        let len = self.levels.len();
        RadialState {
            t: self.time(),
            dr: self.dr,
            previous: self.levels[len - 2].clone(),
            current: self.levels[len - 1].clone(),
        }
    }

    /// `u = v/r` of the newest level, with `u(0) = v(dr)/dr`.
    pub fn newest_u(&self) -> Vec<f64> {
        self.to_u(self.levels.back().expect("two levels"))
    }

    pub fn to_u(&self, v: &[f64]) -> Vec<f64> {
        let dr = self.dr;
        (0..v.len())
            .map(|i| if i == 0 { v[1] / dr } else { v[i] / (i as f64 * dr) })
            .collect()
    }

    pub fn step(&mut self) -> RadialStats {
        let len = self.levels.len();
        let t_cur = self.level_time(len - 1);
        let older2 = (len >= 3).then(|| &self.levels[len - 3]);
        let (next, stats) = self.advance(&self.levels[len - 2], &self.levels[len - 1], older2, t_cur, self.dt);
        self.levels.push_back(next);
        while self.levels.len() > self.keep {
            self.levels.pop_front();
            self.first += 1;
        }
        self.taken += 1;
        stats
    }

    /// `u` on `2·half + 1` levels centered `half` steps behind the newest.
    pub fn window(&self, half: usize) -> Result<RadialWindow, SolverError> {
        let len = self.levels.len();
        if len < 2 * half + 1 {
            return Err(crate::grid::GridError::InsufficientHistory {
                required: 2 * half + 1,
                available: len,
            }
            .into());
        }
        let levels = (len - 2 * half - 1..len).map(|k| self.to_u(&self.levels[k])).collect();
        Ok(RadialWindow {
            t: self.level_time(len - 1 - half),
            dt: self.dt,
            dr: self.dr,
            levels,
        })
    }

    fn force(&self, t: f64, r: f64) -> f64 {
        self.forcing.as_ref().map_or(0.0, |f| f(t, r))
    }

    /// `∂_r u = (∂_r v − v/r)/r` at interior radii, zero on the axis.
    fn radial_gradient(&self, v: &[f64]) -> Vec<f64> {
        let m = v.len() - 1;
        let dr = self.dr;
        let mut ur = vec![0.0; m + 1];
        for i in 1..m {
            let r = i as f64 * dr;
            ur[i] = ((v[i + 1] - v[i - 1]) / (2.0 * dr) - v[i] / r) / r;
        }
        let r = m as f64 * dr;
        ur[m] = ((3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * dr) - v[m] / r) / r;
        ur
    }

    fn advance(
        &self,
        older: &[f64],
        cur: &[f64],
        older2: Option<&Vec<f64>>,
        t_cur: f64,
        dt: f64,
    ) -> (Vec<f64>, RadialStats) {
        let m = cur.len() - 1;
        let dr = self.dr;
        let c = self.form.c;
        let lam2 = (c * dt / dr).powi(2);
        let mut guess: Vec<f64> = match older2 {
            Some(o2) => (0..=m).map(|i| 3.0 * cur[i] - 3.0 * older[i] + o2[i]).collect(),
            None => (0..=m).map(|i| 2.0 * cur[i] - older[i]).collect(),
        };
        let ur = self.radial_gradient(cur);
        let passes = if self.form.is_linear() { 1 } else { 1 + self.cfg.picard_iters };
        let mut stats = RadialStats::default();
        for _ in 0..passes {
            let mut next = vec![0.0; m + 1];
            stats = RadialStats {
                t: t_cur,
                finite: true,
                ..Default::default()
            };
            for i in 0..=m {
                let r = i as f64 * dr;
                let vt = (guess[i] - older[i]) / (2.0 * dt);
                let ut = if i == 0 {
                    (guess[1] - older[1]) / (2.0 * dt * dr)
                } else {
                    vt / r
                };
                let du = ut.abs().max(ur[i].abs());
                if !du.is_finite() {
                    stats.finite = false;
                }
                if du > stats.sup_du {
                    stats.sup_du = du;
                    stats.sup_radius = r;
                }
                if i == 0 || i == m {
                    continue;
                }
                let source = r * (self.form.eval(ut, ur[i]) + self.force(t_cur, r));
                next[i] = 2.0 * cur[i] - older[i]
                    + lam2 * (cur[i + 1] - 2.0 * cur[i] + cur[i - 1])
                    + dt * dt * source;
            }
            next[m] = match self.boundary {
                RadialBoundary::Fixed => cur[m],
                RadialBoundary::Outgoing => cur[m] - c * dt / dr * (cur[m] - cur[m - 1]),
            };
            if next.iter().any(|v| !v.is_finite()) {
                stats.finite = false;
            }
            guess = next;
        }
        (guess, stats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::rational::{frac, int};

    fn q0(c: i64) -> WaveSystem {
        let mut sys = WaveSystem::linear(vec![int(c)]).unwrap();
        sys.set_b([0, 0, 0, 0, 0], frac(1, c * c));
        for a in 1..4 {
            sys.set_b([0, 0, 0, a, a], int(-1));
        }
        sys
    }

    #[test]
    fn extracts_radial_form() {
        let f = RadialForm::from_system(&q0(2)).unwrap();
        assert_eq!(f, RadialForm { c: 2.0, b00: 0.25, beta: -1.0 });
        let mut aniso = q0(1);
        aniso.set_b([0, 0, 0, 1, 1], int(3));
        assert!(matches!(RadialForm::from_system(&aniso), Err(SolverError::NotRadial(_))));
        let mut mixed = q0(1);
        mixed.set_b([0, 0, 0, 0, 2], int(1));
        assert!(RadialForm::from_system(&mixed).is_err());
        // antisymmetric mixed entries do not contribute
        mixed.set_b([0, 0, 0, 2, 0], int(-1));
        assert!(RadialForm::from_system(&mixed).is_ok());
        let two = WaveSystem::linear(vec![int(1), int(1)]).unwrap();
        assert!(RadialForm::from_system(&two).is_err());
    }

    #[test]
    fn zero_data_stays_zero() {
        let cfg = SolverConfig { t_end: 2.0, ..Default::default() };
        let form = RadialForm { c: 1.0, b00: 1.0, beta: 0.0 };
        let mut s = RadialSolver::new(form, 10.0, 100, cfg, 1, RadialBoundary::Outgoing, None, |_| (0.0, 0.0)).unwrap();
        while !s.finished() {
            s.step();
        }
        assert!(s.newest_u().iter().all(|&v| v == 0.0));
    }

    fn translation_error(m: usize) -> f64 {
        // v = g(r − t) with g supported away from the axis
        let g = |s: f64| (-(s - 5.0).powi(2)).exp();
        let dg = |s: f64| -2.0 * (s - 5.0) * g(s);
        let cfg = SolverConfig { t_end: 2.0, ..Default::default() };
        let init = |r: f64| {
            if r == 0.0 {
                (0.0, 0.0)
            } else {
                (g(r) / r, -dg(r) / r)
            }
        };
        let mut s = RadialSolver::new(RadialForm::linear(1.0), 12.0, m, cfg, 1, RadialBoundary::Outgoing, None, init)
            .unwrap();
        while !s.finished() {
            s.step();
        }
        let t = s.time();
        let v = s.state().current;
        let dr = s.dr();
        (v.iter()
            .enumerate()
            .map(|(i, vi)| (vi - g(i as f64 * dr - t)).powi(2))
            .sum::<f64>()
            * dr)
            .sqrt()
    }

    #[test]
    fn linear_translation_converges_at_second_order() {
        let (e1, e2) = (translation_error(120), translation_error(240));
        let order = (e1 / e2).log2();
        assert!((1.8..2.3).contains(&order), "{e1} {e2} {order}");
    }

    fn reflection(m: usize) -> f64 {
        let g = |s: f64| (-(s - 3.0).powi(2) * 4.0).exp();
        let dg = |s: f64| -8.0 * (s - 3.0) * g(s);
        let cfg = SolverConfig { t_end: 8.0, ..Default::default() };
        let init = |r: f64| if r == 0.0 { (0.0, 0.0) } else { (g(r) / r, -dg(r) / r) };
        let mut s = RadialSolver::new(RadialForm::linear(1.0), 6.0, m, cfg, 1, RadialBoundary::Outgoing, None, init)
            .unwrap();
        while !s.finished() {
            s.step();
        }
        s.state().current.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    #[test]
    fn outgoing_boundary_reflection_is_first_order() {
        let (coarse, fine) = (reflection(300), reflection(600));
        assert!(fine < 5e-3, "{fine}");
        assert!(coarse / fine > 1.6, "{coarse} {fine}");
    }
}
