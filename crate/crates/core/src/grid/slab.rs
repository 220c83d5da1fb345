use serde::{Deserialize, Serialize};

use super::{Grid3, GridError};

/// The eight commuting fields `∂₀, ∂₁, ∂₂, ∂₃, Ω₁ = Ω₂₃, Ω₂ = Ω₃₁, Ω₃ = Ω₁₂, S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VectorField {
    D0,
    D1,
    D2,
    D3,
    Omega1,
    Omega2,
    Omega3,
    Scaling,
}

impl VectorField {
    pub const ALL: [VectorField; 8] = [
        VectorField::D0,
        VectorField::D1,
        VectorField::D2,
        VectorField::D3,
        VectorField::Omega1,
        VectorField::Omega2,
        VectorField::Omega3,
        VectorField::Scaling,
    ];

    /// `∂_a` for `a ∈ 0..4`.
    pub fn partial(a: usize) -> Self {
        Self::ALL[a]
    }

    /// `Ω_{ij}` for `1 ≤ i < j ≤ 3`, with the sign of the requested order.
    pub fn rotation(i: usize, j: usize) -> (Self, f64) {
        match (i, j) {
            (2, 3) => (VectorField::Omega1, 1.0),
            (3, 1) => (VectorField::Omega2, 1.0),
            (1, 3) => (VectorField::Omega2, -1.0),
            (1, 2) => (VectorField::Omega3, 1.0),
            _ => panic!("no rotation field Ω_{i}{j}"),
        }
    }

    /// Whether the discrete field differentiates in time.
    pub fn uses_time(self) -> bool {
        matches!(self, VectorField::D0 | VectorField::Scaling)
    }

    pub fn label(self) -> &'static str {
        match self {
            VectorField::D0 => "d0",
            VectorField::D1 => "d1",
            VectorField::D2 => "d2",
            VectorField::D3 => "d3",
            VectorField::Omega1 => "O23",
            VectorField::Omega2 => "O31",
            VectorField::Omega3 => "O12",
            VectorField::Scaling => "S",
        }
    }
}

/// `2k + 1` equally spaced time levels of one scalar field, centered at `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Slab {
    pub grid: Grid3,
    /// Time of the center level.
    pub t: f64,
    pub dt: f64,
    pub levels: Vec<Vec<f64>>,
}

impl Slab {
    pub fn new(grid: Grid3, t: f64, dt: f64, levels: Vec<Vec<f64>>) -> Result<Self, GridError> {
        if levels.len().is_multiple_of(2) {
            return Err(GridError::Shape(format!(
                "slab needs an odd number of levels, got {}",
                levels.len()
            )));
        }
        if let Some(bad) = levels.iter().find(|l| l.len() != grid.len()) {
            return Err(GridError::Shape(format!(
                "level has {} values, grid has {}",
                bad.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, t, dt, levels })
    }

    /// Samples `f(t, x)` on `2·half + 1` levels around `t`.
    pub fn from_fn<F>(grid: Grid3, t: f64, dt: f64, half: usize, f: F) -> Self
    where
        F: Fn(f64, [f64; 3]) -> f64 + Sync,
    {
        let levels = (0..=2 * half)
            .map(|m| {
                let tm = t + (m as f64 - half as f64) * dt;
                grid.sample(|x| f(tm, x))
            })
            .collect();
        Self { grid, t, dt, levels }
    }

    /// Number of levels on each side of the center.
    pub fn half(&self) -> usize {
        (self.levels.len() - 1) / 2
    }

    pub fn center(&self) -> &[f64] {
        &self.levels[self.half()]
    }

    pub fn into_center(mut self) -> Vec<f64> {
        let h = self.half();
        self.levels.swap_remove(h)
    }

    fn level_time(&self, m: usize) -> f64 {
        self.t + (m as f64 - self.half() as f64) * self.dt
    }

    /// Keeps at most `half` levels on each side.
    pub fn trimmed(mut self, half: usize) -> Self {
        let h = self.half();
        if half < h {
            let drop = h - half;
            self.levels.drain(..drop);
            self.levels.truncate(2 * half + 1);
        }
        self
    }

    fn need(&self, levels: usize) -> Result<(), GridError> {
        if self.levels.len() < levels {
            Err(GridError::InsufficientHistory {
                required: levels,
                available: self.levels.len(),
            })
        } else {
            Ok(())
        }
    }

    fn spatial<F>(&self, f: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        Self {
            grid: self.grid,
            t: self.t,
            dt: self.dt,
            levels: self.levels.iter().map(|l| f(l)).collect(),
        }
    }

    /// Time-centered operator using three consecutive levels.
    fn temporal<F>(&self, f: F) -> Result<Self, GridError>
    where
        F: Fn(f64, &[f64], &[f64], &[f64]) -> Vec<f64>,
    {
        self.need(3)?;
        let levels = (1..self.levels.len() - 1)
            .map(|m| {
                f(
                    self.level_time(m),
                    &self.levels[m - 1],
                    &self.levels[m],
                    &self.levels[m + 1],
                )
            })
            .collect();
        Ok(Self {
            grid: self.grid,
            t: self.t,
            dt: self.dt,
            levels,
        })
    }

    /// `∂_a` for `a ∈ 0..4`; the time derivative is centered.
    pub fn partial(&self, a: usize) -> Result<Self, GridError> {
        if a == 0 {
            let inv = 1.0 / (2.0 * self.dt);
            let g = self.grid;
            self.temporal(|_, prev, _, next| g.build(|i| (next[i] - prev[i]) * inv))
        } else {
            Ok(self.spatial(|l| self.grid.d1(l, a - 1)))
        }
    }

    /// `Ω_i` in the numbering `Ω₁ = Ω₂₃, Ω₂ = Ω₃₁, Ω₃ = Ω₁₂` (`i ∈ 0..3`).
    pub fn rotation(&self, i: usize) -> Self {
        let (p, q) = [(1, 2), (2, 0), (0, 1)][i];
        let g = self.grid;
        self.spatial(|l| {
            let dq = g.d1(l, q);
            let dp = g.d1(l, p);
            g.build(|idx| {
                let x = g.point(idx);
                x[p] * dq[idx] - x[q] * dp[idx]
            })
        })
    }

    /// `S = t∂ₜ + x·∇`.
    pub fn scaling(&self) -> Result<Self, GridError> {
        let g = self.grid;
        let inv = 1.0 / (2.0 * self.dt);
        self.temporal(|t, prev, cur, next| {
            let [gx, gy, gz] = g.gradient(cur);
            g.build(|i| {
                let x = g.point(i);
                t * (next[i] - prev[i]) * inv + x[0] * gx[i] + x[1] * gy[i] + x[2] * gz[i]
            })
        })
    }

    pub fn apply(&self, field: VectorField) -> Result<Self, GridError> {
        match field {
            VectorField::D0 => self.partial(0),
            VectorField::D1 => self.partial(1),
            VectorField::D2 => self.partial(2),
            VectorField::D3 => self.partial(3),
            VectorField::Omega1 => Ok(self.rotation(0)),
            VectorField::Omega2 => Ok(self.rotation(1)),
            VectorField::Omega3 => Ok(self.rotation(2)),
            VectorField::Scaling => self.scaling(),
        }
    }

    /// Time levels needed to apply `alpha`.
    pub fn levels_for(alpha: &[VectorField]) -> usize {
        2 * alpha.iter().filter(|f| f.uses_time()).count() + 1
    }

    /// `Γ^α = Γ_{α_m} ··· Γ_{α_1}` with `alpha = [α_m, …, α_1]`, i.e. the last
    /// entry acts first.
    pub fn gamma(&self, alpha: &[VectorField], max_order: usize) -> Result<Self, GridError> {
        if alpha.len() > max_order {
            return Err(GridError::OrderTooHigh {
                order: alpha.len(),
                max: max_order,
            });
        }
        self.need(Self::levels_for(alpha))?;
        let mut cur = self.clone();
        for &f in alpha.iter().rev() {
            cur = cur.apply(f)?;
        }
        Ok(cur)
    }

    /// Visits `Γ^α` at the center level for every `|α| ≤ max_order`, in
    /// depth-first order starting with the empty index.
    pub fn for_each_gamma<F>(&self, max_order: usize, mut visit: F) -> Result<(), GridError>
    where
        F: FnMut(&[VectorField], &[f64]),
    {
        self.need(2 * max_order + 1)?;
        let start = self.clone().trimmed(max_order);
        let mut alpha = Vec::new();
        walk(&start, max_order, &mut alpha, &mut visit)
    }

    /// `(∂ₜ² − c²Δ)` on each interior time level.
    pub fn wave_operator(&self, c: f64) -> Result<Self, GridError> {
        let g = self.grid;
        let inv = 1.0 / (self.dt * self.dt);
        let c2 = c * c;
        self.temporal(|_, prev, cur, next| {
            let lap = g.laplacian(cur);
            g.build(|i| (next[i] - 2.0 * cur[i] + prev[i]) * inv - c2 * lap[i])
        })
    }

    /// `∂₀∂₀ − c² Σⱼ ∂ⱼ∂ⱼ` assembled from the same first-derivative stencils
    /// as the vector fields (a five-point-wide operator in every direction).
    pub fn wave_operator_composed(&self, c: f64) -> Result<Self, GridError> {
        let tt = self.partial(0)?.partial(0)?;
        let c2 = c * c;
        let mut lap: Option<Slab> = None;
        for j in 1..4 {
            let jj = self.partial(j)?.partial(j)?;
            lap = Some(match lap {
                None => jj,
                Some(acc) => acc.combine(&jj, |a, b| a + b),
            });
        }
        let lap = lap.expect("three spatial axes");
        Ok(tt.combine(&lap, |a, b| a - c2 * b))
    }

    /// Pointwise `op(self, other)` on the common centered window of levels.
    pub fn combine<F>(&self, other: &Slab, op: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let (a, b) = align(self, other);
        let g = self.grid;
        Self {
            grid: g,
            t: self.t,
            dt: self.dt,
            levels: a
                .iter()
                .zip(b)
                .map(|(x, y)| g.build(|i| op(x[i], y[i])))
                .collect(),
        }
    }

    pub fn map<F>(&self, f: F) -> Self
    where
        F: Fn(f64, [f64; 3], f64) -> f64 + Sync,
    {
        let g = self.grid;
        Self {
            grid: g,
            t: self.t,
            dt: self.dt,
            levels: (0..self.levels.len())
                .map(|m| {
                    let tm = self.level_time(m);
                    let l = &self.levels[m];
                    g.build(|i| f(tm, g.point(i), l[i]))
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Slab) -> Self {
        self.combine(other, |a, b| a - b)
    }
}

/// Matching center-aligned level windows of two slabs.
fn align<'a>(a: &'a Slab, b: &'a Slab) -> (&'a [Vec<f64>], &'a [Vec<f64>]) {
    let h = a.half().min(b.half());
    (
        &a.levels[a.half() - h..=a.half() + h],
        &b.levels[b.half() - h..=b.half() + h],
    )
}

fn walk<F>(
    slab: &Slab,
    budget: usize,
    alpha: &mut Vec<VectorField>,
    visit: &mut F,
) -> Result<(), GridError>
where
    F: FnMut(&[VectorField], &[f64]),
{
    visit(alpha, slab.center());
    if budget == 0 {
        return Ok(());
    }
    for f in VectorField::ALL {
        let next = slab.apply(f)?.trimmed(budget - 1);
        alpha.insert(0, f);
        walk(&next, budget - 1, alpha, visit)?;
        alpha.remove(0);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use VectorField::*;

    fn grid() -> Grid3 {
        Grid3::new(1.0, 9).unwrap()
    }

    #[test]
    fn scaling_of_homogeneous_functions() {
        let g = grid();
        let t0 = 0.7;
        let s = Slab::from_fn(g, t0, 0.1, 1, |t, _| t).scaling().unwrap();
        assert!(s.center().iter().all(|v| (v - t0).abs() < 1e-12));
        let s = Slab::from_fn(g, t0, 0.1, 2, |_, x| x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        let ss = s.gamma(&[Scaling, Scaling], 2).unwrap();
        for idx in 0..g.len() {
            let x = g.point(idx);
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            assert!((ss.center()[idx] - 4.0 * r2).abs() < 1e-10);
        }
        let s = Slab::from_fn(g, t0, 0.1, 1, |t, x| t * x[0]).scaling().unwrap();
        for idx in 0..g.len() {
            assert!((s.center()[idx] - 2.0 * t0 * g.point(idx)[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn rotations_on_polynomials() {
        let g = grid();
        let s = Slab::from_fn(g, 0.0, 0.1, 0, |_, x| x[0]);
        let o = s.gamma(&[Omega3], 1).unwrap();
        for idx in 0..g.len() {
            assert!((o.center()[idx] + g.point(idx)[1]).abs() < 1e-12);
        }
        let s = Slab::from_fn(g, 0.0, 0.1, 0, |_, x| x[0] * x[1]);
        let o = s.gamma(&[Omega3, D1], 2).unwrap();
        for idx in 0..g.len() {
            assert!((o.center()[idx] - g.point(idx)[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_index_is_identity_and_limits_are_enforced() {
        let g = grid();
        let s = Slab::from_fn(g, 0.0, 0.1, 1, |t, x| t + x[2]);
        assert_eq!(s.gamma(&[], 3).unwrap(), s);
        assert!(matches!(
            s.gamma(&[D1, D1, D1, D1], 3),
            Err(GridError::OrderTooHigh { .. })
        ));
        assert!(matches!(
            s.gamma(&[D0, Scaling], 3),
            Err(GridError::InsufficientHistory { required: 5, available: 3 })
        ));
    }

    #[test]
    fn depth_first_visit_counts() {
        let g = grid();
        let s = Slab::from_fn(g, 0.0, 0.1, 2, |t, x| t * x[0]);
        let mut count = 0;
        let mut last = Vec::new();
        s.for_each_gamma(2, |alpha, _| {
            count += 1;
            last = alpha.to_vec();
        })
        .unwrap();
        assert_eq!(count, 1 + 8 + 64);
        assert_eq!(last, vec![Scaling, Scaling]);
    }

    #[test]
    fn visit_matches_direct_application() {
        let g = grid();
        let s = Slab::from_fn(g, 0.3, 0.05, 2, |t, x| (t * x[0] + x[1] * x[2]).sin());
        s.for_each_gamma(2, |alpha, center| {
            let direct = s.gamma(alpha, 2).unwrap();
            for (a, b) in center.iter().zip(direct.center()) {
                assert!((a - b).abs() < 1e-12, "{alpha:?}");
            }
        })
        .unwrap();
    }
}
