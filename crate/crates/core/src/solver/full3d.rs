//! Three-level leapfrog for the full 3D system.

use std::collections::VecDeque;
use std::sync::Arc;

use rayon::prelude::*;

use super::{InitialData, SolverConfig, SolverError};
use crate::grid::{Grid3, Slab};
use crate::system::NumericSystem;

/// External source `F^I(t, x)` added to the right-hand side.
pub type Forcing3 = Arc<dyn Fn(usize, f64, [f64; 3]) -> f64 + Send + Sync>;

/// Values on the outermost layer of the cube.
#[derive(Clone, Default)]
pub enum Boundary3 {
    /// Held at their initial values.
    #[default]
    Fixed,
    /// `u^I(t, x)` supplied by a closure, e.g. an exact solution.
    Prescribed(Forcing3),
}

impl std::fmt::Debug for Boundary3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary3::Fixed => write!(f, "Fixed"),
            Boundary3::Prescribed(_) => write!(f, "Prescribed(..)"),
        }
    }
}

/// Pointwise summary of the level a step was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepStats {
    /// Time of the level the derivatives were taken at.
    pub t: f64,
    /// `max_{I,a} |∂_a u^I|` over interior points.
    pub sup_du: f64,
    pub sup_location: [f64; 3],
    /// Interior points where `Σ|γ|` exceeds the smallness threshold.
    pub smallness_violations: usize,
    pub interior_points: usize,
    pub finite: bool,
}

impl StepStats {
    pub fn smallness_fraction(&self) -> f64 {
        if self.interior_points == 0 {
            0.0
        } else {
            self.smallness_violations as f64 / self.interior_points as f64
        }
    }
}

/// Time levels of every family around a center time.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub t: f64,
    pub dt: f64,
    pub families: Vec<Slab>,
}

/// Leapfrog integrator holding a sliding window of time levels.
pub struct Solver3 {
    grid: Grid3,
    sys: NumericSystem,
    cfg: SolverConfig,
    dt: f64,
    total_steps: usize,
    taken: usize,
    boundary: Boundary3,
    forcing: Option<Forcing3>,
    /// Oldest first; each level holds one field per family.
    levels: VecDeque<Vec<Vec<f64>>>,
    /// Step index of `levels[0]`.
    first: isize,
    keep: usize,
}

impl std::fmt::Debug for Solver3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Solver3")
            .field("grid", &self.grid)
            .field("dt", &self.dt)
            .field("taken", &self.taken)
            .field("total_steps", &self.total_steps)
            .finish()
    }
}

impl Solver3 {
    /// Sets up `u^0` and `∂ₜu^0` from `data` and builds `history` levels
    /// before `t = 0` by integrating backwards, so that a window of
    /// half-width `history` around `t = 0` is available once `history`
    /// forward steps have been taken.
    pub fn new(
        grid: Grid3,
        sys: &NumericSystem,
        data: &InitialData,
        cfg: SolverConfig,
        history: usize,
        boundary: Boundary3,
        forcing: Option<Forcing3>,
    ) -> Result<Self, SolverError> {
        cfg.validate()?;
        if sys.families() == 0 {
            return Err(SolverError::InvalidConfig("system has no families".into()));
        }
        let (dt, total_steps) = cfg.time_step(grid.h, sys.max_speed());
        let d = sys.families();
        let u0: Vec<Vec<f64>> = (0..d)
            .map(|i| grid.sample(|x| data.eval(i, sys.speeds[i], x).0))
            .collect();
        let ut0: Vec<Vec<f64>> = (0..d)
            .map(|i| grid.sample(|x| data.eval(i, sys.speeds[i], x).1))
            .collect();
        let mut solver = Self {
            grid,
            sys: sys.clone(),
            cfg,
            dt,
            total_steps,
            taken: 0,
            boundary,
            forcing,
            levels: VecDeque::new(),
            first: -1,
            keep: (2 * history + 1).max(3),
        };
        let utt0 = solver.initial_acceleration(&u0, &ut0);
        let mut um1: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                grid.build(|p| u0[i][p] - dt * ut0[i][p] + 0.5 * dt * dt * utt0[i][p])
            })
            .collect();
        solver.fill_boundary(&mut um1, &u0, -dt);
        solver.levels.push_back(um1);
        solver.levels.push_back(u0);
        // backward leapfrog for the remaining pre-history
        let mut back: Vec<Vec<Vec<f64>>> = Vec::new();
        for m in 1..history.max(1) {
            let (older, cur, older2) = match back.len() {
                0 => (&solver.levels[1], &solver.levels[0], None),
                1 => (&solver.levels[0], &back[0], Some(&solver.levels[1])),
                b => (&back[b - 2], &back[b - 1], Some(if b == 2 { &solver.levels[0] } else { &back[b - 3] })),
            };
            let t_cur = -(m as f64) * dt;
            let (next, _) = solver.advance(older, cur, older2, t_cur, -dt);
            back.push(next);
        }
        for lvl in back {
            solver.levels.push_front(lvl);
            solver.first -= 1;
        }
        Ok(solver)
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn system(&self) -> &NumericSystem {
        &self.sys
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn dt(&self) -> f64 {
        self.dt
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

    /// Time of the newest level.
    pub fn time(&self) -> f64 {
        self.level_time(self.levels.len() - 1)
    }

    fn level_time(&self, m: usize) -> f64 {
        (self.first + m as isize) as f64 * self.dt
    }

    /// Newest level, one field per family.
    pub fn newest(&self) -> &[Vec<f64>] {
        self.levels.back().expect("solver holds at least two levels")
    }

    /// Advances one step and reports on the level the step was taken from.
    pub fn step(&mut self) -> StepStats {
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

    /// Levels `center − half ..= center + half` where `center` is `half`
    /// steps behind the newest level.
    pub fn window(&self, half: usize) -> Result<Window, SolverError> {
        let len = self.levels.len();
        if len < 2 * half + 1 {
            return Err(crate::grid::GridError::InsufficientHistory {
                required: 2 * half + 1,
                available: len,
            }
            .into());
        }
        let start = len - 2 * half - 1;
        let t = self.level_time(len - 1 - half);
        let families = (0..self.sys.families())
            .map(|i| {
                let lv = (start..len).map(|m| self.levels[m][i].clone()).collect();
                Slab::new(self.grid, t, self.dt, lv).map_err(SolverError::from)
            })
            .collect::<Result<_, _>>()?;
        Ok(Window { t, dt: self.dt, families })
    }

    fn initial_acceleration(&self, u0: &[Vec<f64>], ut0: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let g = &self.grid;
        let d = self.sys.families();
        let lap: Vec<Vec<f64>> = u0.iter().map(|u| g.laplacian(u)).collect();
        let force = |i: usize, p: usize| {
            self.forcing
                .as_ref()
                .map_or(0.0, |f| f(i, 0.0, g.point(p)))
        };
        let mut utt: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let c2 = self.sys.speeds[i].powi(2);
                g.build(|p| c2 * lap[i][p] + force(i, p))
            })
            .collect();
        if self.sys.is_linear() {
            return utt;
        }
        let grad: Vec<[Vec<f64>; 3]> = u0.iter().map(|u| g.gradient(u)).collect();
        let grad_t: Vec<[Vec<f64>; 3]> = ut0.iter().map(|u| g.gradient(u)).collect();
        let hess: Vec<Vec<Vec<f64>>> = u0
            .iter()
            .map(|u| {
                (0..9)
                    .map(|ab| g.dd(u, ab / 3, ab % 3))
                    .collect()
            })
            .collect();
        for _ in 0..=self.cfg.picard_iters {
            let prev = utt.clone();
            let fields: Vec<Vec<f64>> = {
                let eval = |p: usize| -> Vec<f64> {
                    let mut du = vec![[0.0; 4]; d];
                    let mut ddu = vec![[[0.0; 4]; 4]; d];
                    for j in 0..d {
                        du[j][0] = ut0[j][p];
                        ddu[j][0][0] = prev[j][p];
                        for a in 0..3 {
                            du[j][a + 1] = grad[j][a][p];
                            ddu[j][0][a + 1] = grad_t[j][a][p];
                            ddu[j][a + 1][0] = grad_t[j][a][p];
                            for b in 0..3 {
                                ddu[j][a + 1][b + 1] = hess[j][3 * a + b][p];
                            }
                        }
                    }
                    let mut out = vec![0.0; d];
                    self.sys.nonlinearity(&du, &ddu, &mut out);
                    out
                };
                let per_point: Vec<Vec<f64>> = (0..g.len()).into_par_iter().map(eval).collect();
                (0..d)
                    .map(|i| {
                        let c2 = self.sys.speeds[i].powi(2);
                        g.build(|p| c2 * lap[i][p] + force(i, p) + per_point[p][i])
                    })
                    .collect()
            };
            utt = fields;
        }
        utt
    }

    /// Boundary values of the level at `t`, given the level before it.
    fn fill_boundary(&self, next: &mut [Vec<f64>], cur: &[Vec<f64>], t: f64) {
        let g = &self.grid;
        let n = g.n;
        for (i, field) in next.iter_mut().enumerate() {
            for k in 0..n {
                for j in 0..n {
                    let face_row = k == 0 || k == n - 1 || j == 0 || j == n - 1;
                    let cols: Box<dyn Iterator<Item = usize>> = if face_row {
                        Box::new(0..n)
                    } else {
                        Box::new([0, n - 1].into_iter())
                    };
                    for ii in cols {
                        let p = g.index(ii, j, k);
                        field[p] = match &self.boundary {
                            Boundary3::Fixed => cur[i][p],
                            Boundary3::Prescribed(f) => f(i, t, g.point(p)),
                        };
                    }
                }
            }
        }
    }

    /// One leapfrog step from `(older, cur)` with signed step `dt`; the
    /// nonlinearity is resolved by Picard iteration starting from the
    /// quadratic extrapolation through `older2, older, cur`.
    fn advance(
        &self,
        older: &[Vec<f64>],
        cur: &[Vec<f64>],
        older2: Option<&Vec<Vec<f64>>>,
        t_cur: f64,
        dt: f64,
    ) -> (Vec<Vec<f64>>, StepStats) {
        let g = &self.grid;
        let d = self.sys.families();
        let mut guess: Vec<Vec<f64>> = (0..d)
            .map(|i| match older2 {
                Some(o2) => g.build(|p| 3.0 * cur[i][p] - 3.0 * older[i][p] + o2[i][p]),
                None => g.build(|p| 2.0 * cur[i][p] - older[i][p]),
            })
            .collect();
        let passes = if self.sys.is_linear() { 1 } else { 1 + self.cfg.picard_iters };
        let mut stats = StepStats::default();
        for pass in 0..passes {
            let (mut next, s) = self.pass(older, cur, &guess, t_cur, dt, pass + 1 == passes);
            self.fill_boundary(&mut next, cur, t_cur + dt);
            guess = next;
            stats = s;
        }
        (guess, stats)
    }

    fn pass(
        &self,
        older: &[Vec<f64>],
        cur: &[Vec<f64>],
        guess: &[Vec<f64>],
        t_cur: f64,
        dt: f64,
        last: bool,
    ) -> (Vec<Vec<f64>>, StepStats) {
        let g = &self.grid;
        let n = g.n;
        let d = self.sys.families();
        let plane = n * n;
        let k = Kernel::new(g, dt);
        let quasi = !self.sys.quasilinear.is_empty();
        let nonlinear = !self.sys.is_linear();
        let threshold = self.sys.smallness_threshold();
        let planes: Vec<(Vec<f64>, StepStats)> = (1..n - 1)
            .into_par_iter()
            .map(|kz| {
                let mut buf = vec![0.0; d * plane];
                let mut du = vec![[0.0; 4]; d];
                let mut ddu = vec![[[0.0; 4]; 4]; d];
                let mut rhs = vec![0.0; d];
                let mut gamma = vec![0.0; d * d * 16];
                let mut st = StepStats {
                    finite: true,
                    ..Default::default()
                };
                let mut sup_idx = usize::MAX;
                for j in 1..n - 1 {
                    for i in 1..n - 1 {
                        let p = g.index(i, j, kz);
                        k.derivatives(p, older, cur, guess, nonlinear || last, quasi, &mut du, &mut ddu);
                        if nonlinear {
                            self.sys.nonlinearity(&du, &ddu, &mut rhs);
                        }
                        let x = self.forcing.as_ref().map(|_| g.point(p));
                        for f in 0..d {
                            let lap = ddu[f][1][1] + ddu[f][2][2] + ddu[f][3][3];
                            let mut acc = self.sys.speeds[f].powi(2) * lap;
                            if nonlinear {
                                acc += rhs[f];
                            }
                            if let (Some(force), Some(x)) = (&self.forcing, x) {
                                acc += force(f, t_cur, x);
                            }
                            buf[f * plane + p - kz * plane] =
                                2.0 * cur[f][p] - older[f][p] + dt * dt * acc;
                        }
                        if last {
                            st.interior_points += 1;
                            for row in du.iter() {
                                for v in row {
                                    if !v.is_finite() {
                                        st.finite = false;
                                    }
                                    if v.abs() > st.sup_du {
                                        st.sup_du = v.abs();
                                        sup_idx = p;
                                    }
                                }
                            }
                            if quasi {
                                self.sys.metric_perturbation(&du, &mut gamma);
                                let total: f64 = gamma.iter().map(|v| v.abs()).sum();
                                if total > threshold {
                                    st.smallness_violations += 1;
                                }
                            }
                        }
                    }
                }
                if sup_idx != usize::MAX {
                    st.sup_location = g.point(sup_idx);
                }
                (buf, st)
            })
            .collect();
        let mut next: Vec<Vec<f64>> = vec![vec![0.0; g.len()]; d];
        let mut stats = StepStats {
            t: t_cur,
            finite: true,
            ..Default::default()
        };
        for (m, (buf, st)) in planes.into_iter().enumerate() {
            let kz = m + 1;
            for f in 0..d {
                next[f][kz * plane..(kz + 1) * plane].copy_from_slice(&buf[f * plane..(f + 1) * plane]);
                if buf[f * plane..(f + 1) * plane].iter().any(|v| !v.is_finite()) {
                    stats.finite = false;
                }
            }
            stats.interior_points += st.interior_points;
            stats.smallness_violations += st.smallness_violations;
            stats.finite &= st.finite;
            if st.sup_du > stats.sup_du {
                stats.sup_du = st.sup_du;
                stats.sup_location = st.sup_location;
            }
        }
        (next, stats)
    }
}

/// Difference stencils at interior points.
struct Kernel {
    strides: [usize; 3],
    inv2h: f64,
    invh2: f64,
    inv4h2: f64,
    inv2dt: f64,
    invdt2: f64,
    inv4hdt: f64,
}

impl Kernel {
    fn new(g: &Grid3, dt: f64) -> Self {
        let h = g.h;
        Self {
            strides: [1, g.n, g.n * g.n],
            inv2h: 0.5 / h,
            invh2: 1.0 / (h * h),
            inv4h2: 0.25 / (h * h),
            inv2dt: 0.5 / dt,
            invdt2: 1.0 / (dt * dt),
            inv4hdt: 0.25 / (h * dt),
        }
    }

    /// First and second derivatives at `p` of the current level, with time
    /// derivatives taken from `older` and `next`.
    #[allow(clippy::too_many_arguments)]
    #[inline]
    fn derivatives(
        &self,
        p: usize,
        older: &[Vec<f64>],
        cur: &[Vec<f64>],
        next: &[Vec<f64>],
        time_first: bool,
        second: bool,
        du: &mut [[f64; 4]],
        ddu: &mut [[[f64; 4]; 4]],
    ) {
        let s = self.strides;
        for f in 0..cur.len() {
            let c = &cur[f];
            for a in 0..3 {
                let (up, dn) = (c[p + s[a]], c[p - s[a]]);
                du[f][a + 1] = (up - dn) * self.inv2h;
                ddu[f][a + 1][a + 1] = (up - 2.0 * c[p] + dn) * self.invh2;
            }
            if time_first {
                du[f][0] = (next[f][p] - older[f][p]) * self.inv2dt;
            }
            if second {
                let (o, nx) = (&older[f], &next[f]);
                ddu[f][0][0] = (nx[p] - 2.0 * c[p] + o[p]) * self.invdt2;
                for a in 0..3 {
                    let sa = s[a];
                    let v = ((nx[p + sa] - nx[p - sa]) - (o[p + sa] - o[p - sa])) * self.inv4hdt;
                    ddu[f][0][a + 1] = v;
                    ddu[f][a + 1][0] = v;
                    for b in a + 1..3 {
                        let sb = s[b];
                        let v = (c[p + sa + sb] - c[p + sa - sb] - c[p - sa + sb] + c[p - sa - sb])
                            * self.inv4h2;
                        ddu[f][a + 1][b + 1] = v;
                        ddu[f][b + 1][a + 1] = v;
                    }
                }
            }
        }
    }
}

/// `N^I` on the interior of the middle of three consecutive levels, with
/// the same stencils as the integrator. Boundary values are zero.
pub fn nonlinear_rhs(
    grid: &Grid3,
    sys: &NumericSystem,
    levels: [&[Vec<f64>]; 3],
    dt: f64,
) -> Vec<Vec<f64>> {
    let [older, cur, next] = levels;
    let d = sys.families();
    let k = Kernel::new(grid, dt);
    let n = grid.n;
    let per_point: Vec<Vec<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|p| {
            let [i, j, kz] = grid.ijk(p);
            let mut out = vec![0.0; d];
            if [i, j, kz].iter().any(|&q| q == 0 || q == n - 1) {
                return out;
            }
            let mut du = vec![[0.0; 4]; d];
            let mut ddu = vec![[[0.0; 4]; 4]; d];
            k.derivatives(p, older, cur, next, true, true, &mut du, &mut ddu);
            sys.nonlinearity(&du, &ddu, &mut out);
            out
        })
        .collect();
    (0..d)
        .map(|f| per_point.iter().map(|v| v[f]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{DataSlot, Profile};
    use crate::system::rational::{frac, int};
    use crate::system::WaveSystem;

    fn scalar(c: i64) -> NumericSystem {
        WaveSystem::linear(vec![int(c)]).unwrap().numeric()
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = Grid3::new(2.0, 12).unwrap();
        let cfg = SolverConfig { t_end: 0.5, ..Default::default() };
        let mut s = Solver3::new(g, &scalar(1), &InitialData::zero(), cfg, 1, Boundary3::Fixed, None).unwrap();
        while !s.finished() {
            let st = s.step();
            assert_eq!(st.sup_du, 0.0);
        }
        assert!(s.newest()[0].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn time_step_reaches_end_exactly() {
        let cfg = SolverConfig { t_end: 1.0, cfl: 0.4, ..Default::default() };
        let (dt, steps) = cfg.time_step(0.1, 2.0);
        assert_eq!(steps, 50);
        assert!((dt * steps as f64 - 1.0).abs() < 1e-14);
        assert!(dt * 2.0 / 0.1 <= 0.4 + 1e-14);
    }

    #[test]
    fn rhs_of_time_derivative_squared() {
        // B₀₀ = 1 and u = t·φ(x): N = φ²
        let mut sys = WaveSystem::linear(vec![int(1)]).unwrap();
        sys.set_b([0, 0, 0, 0, 0], int(1));
        let g = Grid3::new(1.0, 9).unwrap();
        let phi = |x: [f64; 3]| 1.0 + x[0] - 0.5 * x[2];
        let dt = 0.1;
        let lv: Vec<Vec<Vec<f64>>> = (0..3)
            .map(|m| vec![g.sample(|x| (m as f64 - 1.0) * dt * phi(x))])
            .collect();
        let n = nonlinear_rhs(&g, &sys.numeric(), [&lv[0], &lv[1], &lv[2]], dt);
        let p = g.index(4, 3, 5);
        assert!((n[0][p] - phi(g.point(p)).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn null_form_annihilates_outgoing_phase() {
        // Q₀ on u = t − r away from the origin
        let mut sys = WaveSystem::linear(vec![int(1)]).unwrap();
        sys.set_b([0, 0, 0, 0, 0], int(1));
        for a in 1..4 {
            sys.set_b([0, 0, 0, a, a], int(-1));
        }
        let g = Grid3::new(4.0, 41).unwrap();
        let dt = 0.05;
        let r = |x: [f64; 3]| (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let lv: Vec<Vec<Vec<f64>>> = (0..3)
            .map(|m| vec![g.sample(|x| (m as f64 - 1.0) * dt - r(x))])
            .collect();
        let n = nonlinear_rhs(&g, &sys.numeric(), [&lv[0], &lv[1], &lv[2]], dt);
        let p = g.index(30, 20, 25);
        assert!(r(g.point(p)) > 2.0);
        assert!(n[0][p].abs() < 1e-2, "{}", n[0][p]);
        let _ = frac(1, 2);
    }

    fn plane_wave_error(n: usize) -> f64 {
        let g = Grid3::new(1.0, n).unwrap();
        let k = [std::f64::consts::PI, 0.0, 0.0];
        let data = InitialData::new(Profile::PlaneWave { wavevector: k }, 1.0, 1.0, DataSlot::Travelling);
        let exact = data.clone();
        let boundary = Boundary3::Prescribed(Arc::new(move |i, t, x| exact.plane_wave_exact(i, 1.0, t, x).unwrap()));
        let cfg = SolverConfig { t_end: 0.5, ..Default::default() };
        let mut s = Solver3::new(g, &scalar(1), &data, cfg, 1, boundary, None).unwrap();
        while !s.finished() {
            s.step();
        }
        let t = s.time();
        let u = &s.newest()[0];
        g.integrate_by(|p| (u[p] - data.plane_wave_exact(0, 1.0, t, g.point(p)).unwrap()).powi(2))
            .sqrt()
    }

    #[test]
    fn plane_wave_converges_at_second_order() {
        let (e1, e2) = (plane_wave_error(11), plane_wave_error(21));
        let order = (e1 / e2).log2();
        assert!((1.7..2.4).contains(&order), "errors {e1} {e2} order {order}");
    }

    #[test]
    fn uncoupled_families_evolve_independently() {
        let sys = WaveSystem::linear(vec![int(1), int(2)]).unwrap().numeric();
        let g = Grid3::new(3.0, 16).unwrap();
        let cfg = SolverConfig { t_end: 0.4, ..Default::default() };
        let bump = InitialData::new(Profile::Bump { power: 4 }, 1.0, 1.0, DataSlot::Displacement);
        let run = |weights: Vec<f64>| {
            let mut s = Solver3::new(g, &sys, &bump.clone().with_families(weights), cfg.clone(), 1, Boundary3::Fixed, None)
                .unwrap();
            while !s.finished() {
                s.step();
            }
            s.newest().to_vec()
        };
        let both = run(vec![1.0, 1.0]);
        let first = run(vec![1.0, 0.0]);
        let second = run(vec![0.0, 1.0]);
        assert_eq!(both[0], first[0]);
        assert_eq!(both[1], second[1]);
        assert!(first[1].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn finite_propagation_speed() {
        let g = Grid3::new(3.0, 61).unwrap();
        let data = InitialData::new(Profile::Bump { power: 8 }, 1.0, 0.8, DataSlot::Displacement);
        let cfg = SolverConfig { t_end: 1.0, ..Default::default() };
        let mut s = Solver3::new(g, &scalar(1), &data, cfg, 1, Boundary3::Fixed, None).unwrap();
        while !s.finished() {
            s.step();
        }
        let u = &s.newest()[0];
        let beyond = |radius: f64| {
            (0..g.len())
                .filter(|&p| crate::grid::frame::norm(g.point(p)) > radius)
                .map(|p| u[p].abs())
                .fold(0.0, f64::max)
        };
        // the leapfrog precursor ahead of the cone decays over a few cells
        assert!(beyond(0.8 + 1.0 + 8.0 * g.h) <= 1e-12);
        assert!(beyond(0.8 + 1.0 + 2.0 * g.h) < 1e-5);
    }

    #[test]
    fn window_covers_initial_time_after_history() {
        let g = Grid3::new(2.0, 10).unwrap();
        let data = InitialData::new(Profile::Gaussian, 1.0, 0.5, DataSlot::Displacement);
        let cfg = SolverConfig { t_end: 1.0, ..Default::default() };
        let mut s = Solver3::new(g, &scalar(1), &data, cfg, 2, Boundary3::Fixed, None).unwrap();
        assert!(s.window(2).is_err());
        s.step();
        s.step();
        let w = s.window(2).unwrap();
        assert_eq!(w.t, 0.0);
        let u0 = g.sample(|x| data.eval(0, 1.0, x).0);
        assert_eq!(w.families[0].center(), &u0[..]);
        // symmetric in time for displacement data
        let lv = &w.families[0].levels;
        let asym = (0..g.len()).map(|p| (lv[0][p] - lv[4][p]).abs()).fold(0.0, f64::max);
        assert!(asym < 1e-2, "{asym}");
    }
}
