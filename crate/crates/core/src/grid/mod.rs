//! Uniform Cartesian grids on `[−L, L]³`, second-order difference stencils,
//! the eight vector fields `Γ`, the null frame, the Kirchhoff oracle and
//! the binary field dump.

pub mod dump;
pub(crate) mod frame;
pub mod kirchhoff;
pub mod quadrature;
pub mod reduce;
mod slab;

pub use frame::{null_frame_decompose, FrameDecomposition, NullFrame};
pub use slab::{Slab, VectorField};

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid needs at least 8 points per axis, got {0}")]
    TooFewPoints(usize),
    #[error("half-width L must be positive and finite, got {0}")]
    BadWidth(f64),
    #[error("operator needs {required} time levels, slab has {available}")]
    InsufficientHistory { required: usize, available: usize },
    #[error("multi-index order {order} exceeds the configured maximum {max}")]
    OrderTooHigh { order: usize, max: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("not an NWV1 dump: {0}")]
    BadDump(String),
}

/// `n³` points `x = −L + (i, j, k)·h` with `h = 2L/(n − 1)`.
///
/// Fields on the grid are flat `Vec<f64>` with the first coordinate varying
/// fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid3 {
    pub l: f64,
    pub n: usize,
    pub h: f64,
    /// Width of the boundary layer where stencils are one-sided.
    pub ghost: usize,
}

impl Grid3 {
    pub fn new(l: f64, n: usize) -> Result<Self, GridError> {
        if n < 8 {
            return Err(GridError::TooFewPoints(n));
        }
        if !(l.is_finite() && l > 0.0) {
            return Err(GridError::BadWidth(l));
        }
        Ok(Self {
            l,
            n,
            h: 2.0 * l / (n - 1) as f64,
            ghost: 2,
        })
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.l + i as f64 * self.h
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n * (j + self.n * k)
    }

    pub fn ijk(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx % n, (idx / n) % n, idx / (n * n)]
    }

    pub fn point(&self, idx: usize) -> [f64; 3] {
        let [i, j, k] = self.ijk(idx);
        [self.coord(i), self.coord(j), self.coord(k)]
    }

    pub fn stride(&self, axis: usize) -> usize {
        match axis {
            0 => 1,
            1 => self.n,
            2 => self.n * self.n,
            _ => panic!("spatial axis {axis} out of range"),
        }
    }

    /// Cell volume `h³`.
    pub fn cell(&self) -> f64 {
        self.h * self.h * self.h
    }

    /// Distance (in points) from `idx` to the nearest face of the cube.
    pub fn depth(&self, idx: usize) -> usize {
        let n = self.n;
        self.ijk(idx)
            .iter()
            .map(|&i| i.min(n - 1 - i))
            .min()
            .unwrap_or(0)
    }

    /// A field built pointwise, computed in parallel over `x₃`-slabs.
    pub fn build<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn(usize) -> f64 + Sync,
    {
        let mut out = vec![0.0; self.len()];
        let plane = self.n * self.n;
        out.par_chunks_mut(plane).enumerate().for_each(|(k, slab)| {
            for (m, o) in slab.iter_mut().enumerate() {
                *o = f(k * plane + m);
            }
        });
        out
    }

    pub fn sample<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn([f64; 3]) -> f64 + Sync,
    {
        self.build(|idx| f(self.point(idx)))
    }

    /// `∂_{x_{axis+1}} f`: centered in the interior, one-sided second order on
    /// the two boundary faces.
    pub fn d1(&self, f: &[f64], axis: usize) -> Vec<f64> {
        let s = self.stride(axis);
        let n = self.n;
        let inv = 1.0 / (2.0 * self.h);
        self.build(|idx| {
            let i = (idx / s) % n;
            if i == 0 {
                (-3.0 * f[idx] + 4.0 * f[idx + s] - f[idx + 2 * s]) * inv
            } else if i == n - 1 {
                (3.0 * f[idx] - 4.0 * f[idx - s] + f[idx - 2 * s]) * inv
            } else {
                (f[idx + s] - f[idx - s]) * inv
            }
        })
    }

    /// `∂²_{x_{axis+1}} f`, second order including the boundary faces.
    pub fn d2(&self, f: &[f64], axis: usize) -> Vec<f64> {
        let s = self.stride(axis);
        let n = self.n;
        let inv = 1.0 / (self.h * self.h);
        self.build(|idx| {
            let i = (idx / s) % n;
            if i == 0 {
                (2.0 * f[idx] - 5.0 * f[idx + s] + 4.0 * f[idx + 2 * s] - f[idx + 3 * s]) * inv
            } else if i == n - 1 {
                (2.0 * f[idx] - 5.0 * f[idx - s] + 4.0 * f[idx - 2 * s] - f[idx - 3 * s]) * inv
            } else {
                (f[idx + s] - 2.0 * f[idx] + f[idx - s]) * inv
            }
        })
    }

    /// Mixed or pure second derivative `∂_a ∂_b f` over spatial axes.
    pub fn dd(&self, f: &[f64], a: usize, b: usize) -> Vec<f64> {
        if a == b {
            self.d2(f, a)
        } else {
            self.d1(&self.d1(f, b), a)
        }
    }

    pub fn laplacian(&self, f: &[f64]) -> Vec<f64> {
        let (x, y, z) = (self.d2(f, 0), self.d2(f, 1), self.d2(f, 2));
        self.build(|i| x[i] + y[i] + z[i])
    }

    pub fn gradient(&self, f: &[f64]) -> [Vec<f64>; 3] {
        [self.d1(f, 0), self.d1(f, 1), self.d1(f, 2)]
    }

    /// `h³ Σ f`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.cell() * reduce::sum(f)
    }

    /// `h³ Σ w(x)·f(x)` with `w` evaluated at each grid point.
    pub fn integrate_by<F>(&self, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync,
    {
        self.cell() * reduce::sum_by(self.len(), f)
    }

    /// Discrete `L²` norm `(h³ Σ f²)^{1/2}`.
    pub fn l2(&self, f: &[f64]) -> f64 {
        self.integrate_by(|i| f[i] * f[i]).sqrt()
    }

    /// `max |f|` over points at least `skip` layers away from the faces.
    pub fn sup(&self, f: &[f64], skip: usize) -> f64 {
        reduce::max_by(self.len(), |i| {
            if self.depth(i) >= skip {
                f[i].abs()
            } else {
                0.0
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_grids() {
        assert_eq!(Grid3::new(1.0, 4), Err(GridError::TooFewPoints(4)));
        assert!(matches!(Grid3::new(0.0, 16), Err(GridError::BadWidth(_))));
    }

    #[test]
    fn stencils_exact_on_low_polynomials() {
        let g = Grid3::new(1.0, 9).unwrap();
        let f = g.sample(|x| 2.0 * x[0] - x[1] + x[2] * x[2]);
        let fx = g.d1(&f, 0);
        let fz = g.d1(&f, 2);
        let fzz = g.d2(&f, 2);
        for idx in 0..g.len() {
            let x = g.point(idx);
            assert!((fx[idx] - 2.0).abs() < 1e-12);
            assert!((fz[idx] - 2.0 * x[2]).abs() < 1e-12);
            assert!((fzz[idx] - 2.0).abs() < 1e-10);
        }
        let lap = g.laplacian(&g.sample(|x| x[0] * x[0] + x[1] * x[1]));
        assert!(lap.iter().all(|v| (v - 4.0).abs() < 1e-10));
    }

    #[test]
    fn constant_has_zero_derivatives() {
        let g = Grid3::new(2.0, 10).unwrap();
        let f = vec![3.5; g.len()];
        for a in 0..3 {
            assert!(g.d1(&f, a).iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn derivative_error_is_second_order() {
        let err = |n: usize| {
            let g = Grid3::new(2.0, n).unwrap();
            let f = g.sample(|x| x[0].sin());
            let d = g.d1(&f, 0);
            (0..g.len())
                .map(|i| (d[i] - g.point(i)[0].cos()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(17) / err(33);
        assert!((3.2..=4.8).contains(&ratio), "ratio {ratio}");
    }
}
