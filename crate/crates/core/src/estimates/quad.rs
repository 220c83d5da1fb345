//! Spatial and temporal quadrature for the estimate integrals.
//!
//! Radially symmetric integrands use radial Gauss panels along a single
//! direction. Other analytic integrands use midpoint cells on a bounding
//! cube or radial panels times a product sphere rule. Grid snapshots are
//! integrated over their interior nodes.

use rayon::prelude::*;

use crate::grid::quadrature::{gauss_legendre, gauss_product};
use crate::grid::Grid3;

/// Gauss points per panel.
const PANEL_POINTS: usize = 3;
/// Nodes per parallel chunk; partial sums combine in chunk order.
const CHUNK: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub x: [f64; 3],
    pub w: f64,
    /// Grid index for snapshot rules.
    pub index: Option<usize>,
}

impl Node {
    pub fn r(&self) -> f64 {
        (self.x[0] * self.x[0] + self.x[1] * self.x[1] + self.x[2] * self.x[2]).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceRule {
    pub nodes: Vec<Node>,
}

/// Gauss panels of width at most `h` on `[a, b]`, split at `breaks`.
pub fn panels(a: f64, b: f64, h: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = vec![a, b];
    cuts.extend(breaks.iter().copied().filter(|&c| c > a && c < b));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let (z, w) = gauss_legendre(PANEL_POINTS);
    let mut out = Vec::new();
    for pair in cuts.windows(2) {
        let len = pair[1] - pair[0];
        if len <= 0.0 {
            continue;
        }
        let k = (len / h).ceil().max(1.0) as usize;
        let step = len / k as f64;
        for p in 0..k {
            let lo = pair[0] + p as f64 * step;
            for (zi, wi) in z.iter().zip(&w) {
                out.push((lo + 0.5 * step * (zi + 1.0), 0.5 * step * wi));
            }
        }
    }
    out
}

/// Direction used for radial integrands; any unit vector works.
const RADIAL_DIRECTION: [f64; 3] = [0.36, 0.48, 0.8];

impl SpaceRule {
    /// Radial panels on `[r_lo, r_hi]`, one direction, weight `4πr² dr`.
    pub fn radial(r_lo: f64, r_hi: f64, h: f64, breaks: &[f64]) -> Self {
        let nodes = panels(r_lo, r_hi, h, breaks)
            .into_iter()
            .map(|(r, w)| Node {
                x: RADIAL_DIRECTION.map(|d| d * r),
                w: 4.0 * std::f64::consts::PI * r * r * w,
                index: None,
            })
            .collect();
        Self { nodes }
    }

    /// Radial panels times a product sphere rule of order `m`.
    pub fn polar(r_lo: f64, r_hi: f64, h: f64, breaks: &[f64], m: usize) -> Self {
        let sphere = gauss_product(m);
        let mut nodes = Vec::new();
        for (r, w) in panels(r_lo, r_hi, h, breaks) {
            for (p, sw) in sphere.points.iter().zip(&sphere.weights) {
                nodes.push(Node {
                    x: p.map(|d| d * r),
                    w: 4.0 * std::f64::consts::PI * r * r * w * sw,
                    index: None,
                });
            }
        }
        Self { nodes }
    }

    /// Midpoint cells of side at most `h` on the cube `center ± half`.
    pub fn cube(center: [f64; 3], half: f64, h: f64) -> Self {
        let k = (2.0 * half / h).ceil().max(1.0) as usize;
        let step = 2.0 * half / k as f64;
        let vol = step * step * step;
        let mut nodes = Vec::with_capacity(k * k * k);
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let x = [a, b, c]
                        .iter()
                        .zip(center)
                        .map(|(&i, c0)| c0 - half + (i as f64 + 0.5) * step)
                        .collect::<Vec<_>>();
                    nodes.push(Node {
                        x: [x[0], x[1], x[2]],
                        w: vol,
                        index: None,
                    });
                }
            }
        }
        Self { nodes }
    }

    /// Grid nodes at least `skip` layers inside the boundary.
    pub fn grid(grid: &Grid3, skip: usize) -> Self {
        let vol = grid.cell();
        let nodes = (0..grid.len())
            .filter(|&p| grid.depth(p) >= skip)
            .map(|p| Node {
                x: grid.point(p),
                w: vol,
                index: Some(p),
            })
            .collect();
        Self { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ wᵢ f(nodeᵢ)` componentwise for `dim` integrands. The association
    /// order depends on the node count only.
    pub fn integrate<F>(&self, dim: usize, f: F) -> Vec<f64>
    where
        F: Fn(&Node) -> Vec<f64> + Sync,
    {
        let parts: Vec<Vec<f64>> = self
            .nodes
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut acc = vec![0.0; dim];
                for n in chunk {
                    for (a, v) in acc.iter_mut().zip(f(n)) {
                        *a += n.w * v;
                    }
                }
                acc
            })
            .collect();
        let mut total = vec![0.0; dim];
        for p in parts {
            for (t, v) in total.iter_mut().zip(p) {
                *t += v;
            }
        }
        total
    }

    /// Evaluates `f` at every node, in node order.
    pub fn map<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&Node) -> T + Sync + Send,
    {
        self.nodes.par_iter().map(f).collect()
    }
}

/// Gauss panels in time on `[a, b]` with width at most `h`.
pub fn time_rule(a: f64, b: f64, h: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    if b <= a {
        return Vec::new();
    }
    panels(a, b, h, breaks)
}
