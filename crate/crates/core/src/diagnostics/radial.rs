//! Vector fields on radial profiles `f(t, r)` sampled at `r_i = i·dr`.
//!
//! Rotations annihilate radial functions, so the family reduces to
//! `∂ₜ`, `∂_r` and `S = t∂ₜ + r∂_r`. Values across the axis come from the
//! parity of the profile: even for `u`, odd for `∂_r u`.

use crate::grid::{reduce, GridError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RadialField {
    Dt,
    Dr,
    Scaling,
}

impl RadialField {
    pub const ALL: [RadialField; 3] = [RadialField::Dt, RadialField::Dr, RadialField::Scaling];

    pub fn uses_time(self) -> bool {
        !matches!(self, RadialField::Dr)
    }
}

/// `∂_r f` on `r_i = i·dr`, using `f(−r) = parity·f(r)` on the axis and a
/// one-sided second-order stencil at the outer end.
pub fn radial_d1(f: &[f64], dr: f64, parity: f64) -> Vec<f64> {
    let m = f.len() - 1;
    let inv = 0.5 / dr;
    (0..=m)
        .map(|i| {
            if i == 0 {
                (f[1] - parity * f[1]) * inv
            } else if i == m {
                (3.0 * f[m] - 4.0 * f[m - 1] + f[m - 2]) * inv
            } else {
                (f[i + 1] - f[i - 1]) * inv
            }
        })
        .collect()
}

/// `(4π Σ f_i² r_i² dr)^{1/2}`.
pub fn radial_l2(dr: f64, f: &[f64]) -> f64 {
    radial_integral(dr, |i| f[i] * f[i], f.len()).sqrt()
}

/// `4π Σ g(i) r_i² dr`.
pub fn radial_integral<F>(dr: f64, g: F, len: usize) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    4.0 * std::f64::consts::PI * dr * reduce::sum_by(len, |i| {
        let r = i as f64 * dr;
        g(i) * r * r
    })
}

/// Odd number of time levels of a radial profile, centered at `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSlab {
    pub t: f64,
    pub dt: f64,
    pub dr: f64,
    pub levels: Vec<Vec<f64>>,
    /// `+1` for even, `−1` for odd extension through `r = 0`.
    pub parity: f64,
}

impl RadialSlab {
    pub fn half(&self) -> usize {
        (self.levels.len() - 1) / 2
    }

    pub fn center(&self) -> &[f64] {
        &self.levels[self.half()]
    }

    fn level_time(&self, k: usize) -> f64 {
        self.t + (k as f64 - self.half() as f64) * self.dt
    }

    pub fn trimmed(mut self, half: usize) -> Self {
        let h = self.half();
        if half < h {
            self.levels.drain(..h - half);
            self.levels.truncate(2 * half + 1);
        }
        self
    }

    fn temporal<F>(&self, f: F) -> Result<Self, GridError>
    where
        F: Fn(f64, &[f64], &[f64], &[f64]) -> Vec<f64>,
    {
        if self.levels.len() < 3 {
            return Err(GridError::InsufficientHistory {
                required: 3,
                available: self.levels.len(),
            });
        }
        let levels = (1..self.levels.len() - 1)
            .map(|k| f(self.level_time(k), &self.levels[k - 1], &self.levels[k], &self.levels[k + 1]))
            .collect();
        Ok(Self {
            levels,
            ..self.clone()
        })
    }

    pub fn apply(&self, field: RadialField) -> Result<Self, GridError> {
        let inv = 0.5 / self.dt;
        let dr = self.dr;
        match field {
            RadialField::Dt => self.temporal(|_, p, _, n| p.iter().zip(n).map(|(a, b)| (b - a) * inv).collect()),
            RadialField::Dr => Ok(Self {
                levels: self.levels.iter().map(|l| radial_d1(l, dr, self.parity)).collect(),
                parity: -self.parity,
                ..self.clone()
            }),
            RadialField::Scaling => self.temporal(|t, p, c, n| {
                let d = radial_d1(c, dr, self.parity);
                (0..c.len())
                    .map(|i| t * (n[i] - p[i]) * inv + i as f64 * dr * d[i])
                    .collect()
            }),
        }
    }

    /// Visits every `Γ^α` with `|α| ≤ max_order` at the center level,
    /// depth-first from the empty index, with the parity of the result.
    pub fn for_each_gamma<F>(&self, max_order: usize, mut visit: F) -> Result<(), GridError>
    where
        F: FnMut(&[RadialField], &[f64], f64),
    {
        if self.levels.len() < 2 * max_order + 1 {
            return Err(GridError::InsufficientHistory {
                required: 2 * max_order + 1,
                available: self.levels.len(),
            });
        }
        let start = self.clone().trimmed(max_order);
        let mut alpha = Vec::new();
        walk(&start, max_order, &mut alpha, &mut visit)
    }
}

fn walk<F>(slab: &RadialSlab, budget: usize, alpha: &mut Vec<RadialField>, visit: &mut F) -> Result<(), GridError>
where
    F: FnMut(&[RadialField], &[f64], f64),
{
    visit(alpha, slab.center(), slab.parity);
    if budget == 0 {
        return Ok(());
    }
    for f in RadialField::ALL {
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

    fn slab(half: usize, f: impl Fn(f64, f64) -> f64) -> RadialSlab {
        let (dt, dr, t) = (0.01, 0.02, 0.5);
        let levels = (0..=2 * half)
            .map(|k| {
                let tk = t + (k as f64 - half as f64) * dt;
                (0..=200).map(|i| f(tk, i as f64 * dr)).collect()
            })
            .collect();
        RadialSlab { t, dt, dr, levels, parity: 1.0 }
    }

    #[test]
    fn scaling_of_homogeneous_profiles() {
        // S(t² + r²) = 2(t² + r²)
        let s = slab(1, |t, r| t * t + r * r).apply(RadialField::Scaling).unwrap();
        for (i, v) in s.center().iter().enumerate().take(200) {
            let r = i as f64 * 0.02;
            assert!((v - 2.0 * (0.25 + r * r)).abs() < 1e-9, "{i} {v}");
        }
    }

    #[test]
    fn parity_on_the_axis() {
        let s = slab(0, |_, r| (-r * r).exp());
        let d = s.apply(RadialField::Dr).unwrap();
        assert_eq!(d.center()[0], 0.0);
        assert_eq!(d.parity, -1.0);
        // ∂_r of the odd profile −2r e^{−r²} at 0 is −2
        let dd = d.apply(RadialField::Dr).unwrap();
        assert!((dd.center()[0] + 2.0).abs() < 5e-3, "{}", dd.center()[0]);
    }

    #[test]
    fn visit_count() {
        let mut n = 0;
        slab(2, |t, r| t * r).for_each_gamma(2, |_, _, _| n += 1).unwrap();
        assert_eq!(n, 1 + 3 + 9);
    }

    #[test]
    fn radial_norm_of_unit_ball_indicator() {
        let dr = 1e-3;
        let f: Vec<f64> = (0..=2000).map(|i| if i as f64 * dr <= 1.0 { 1.0 } else { 0.0 }).collect();
        let vol = radial_l2(dr, &f).powi(2);
        assert!((vol - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-2);
    }
}
