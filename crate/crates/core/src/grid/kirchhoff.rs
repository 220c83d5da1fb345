//! Duhamel + spherical means solution of `(∂ₜ² − c²Δ)w = F` with zero
//! Cauchy data:
//!
//! ```text
//! w(t, x) = ∫₀ᵗ (t − s) · M[F(s, ·)](x, c(t − s)) ds
//! ```
//!
//! where `M[g](x, ρ)` is the mean of `g` over the sphere of radius `ρ`
//! around `x`. Independent of the finite-difference solver.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quadrature::{gauss_on, gauss_product, sphere_ladder, SphereRule};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KirchhoffOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub min_time_nodes: usize,
    pub max_time_nodes: usize,
    /// Smallest length scale of the source; when given, sphere rules too
    /// coarse to resolve it at the current radius are skipped.
    pub feature_scale: Option<f64>,
    /// Times outside which the source vanishes; the time integral is
    /// restricted to this window.
    pub source_window: Option<(f64, f64)>,
}

impl Default for KirchhoffOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            min_time_nodes: 8,
            max_time_nodes: 512,
            feature_scale: None,
            source_window: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KirchhoffValue {
    pub value: f64,
    /// Difference between the last two refinement levels.
    pub error_estimate: f64,
    /// False when any sphere mean or the time integral missed the tolerance.
    pub converged: bool,
    pub time_nodes: usize,
}

fn agree(a: f64, b: f64, opts: &KirchhoffOptions) -> bool {
    (a - b).abs() <= opts.rel_tol * a.abs().max(b.abs()) + opts.abs_tol
}

struct Ladder {
    rules: Vec<SphereRule>,
}

impl Ladder {
    fn first_rule(&self, rho: f64, opts: &KirchhoffOptions) -> usize {
        let Some(w) = opts.feature_scale else {
            return 0;
        };
        // product rule with m nodes spaces points about π/m apart in angle
        let need = (2.0 * std::f64::consts::PI * rho / w).ceil() as usize;
        self.rules
            .iter()
            .position(|r| r.degree + 1 >= 2 * need)
            .unwrap_or(self.rules.len() - 2)
    }

    /// Adaptive spherical mean of `g` over radius `rho` around `x`.
    fn mean<G: Fn([f64; 3]) -> f64>(&self, g: G, x: [f64; 3], rho: f64, opts: &KirchhoffOptions) -> (f64, bool) {
        if rho == 0.0 {
            return (g(x), true);
        }
        let at = |rule: &SphereRule| rule.mean(|p| g([x[0] + rho * p[0], x[1] + rho * p[1], x[2] + rho * p[2]]));
        let start = self.first_rule(rho, opts);
        let mut prev = at(&self.rules[start]);
        for rule in &self.rules[start + 1..] {
            let cur = at(rule);
            if agree(cur, prev, opts) {
                return (cur, true);
            }
            prev = cur;
        }
        (prev, false)
    }
}

fn time_integral<F>(f: &F, c: f64, t: f64, x: [f64; 3], n: usize, ladder: &Ladder, opts: &KirchhoffOptions) -> (f64, bool)
where
    F: Fn(f64, [f64; 3]) -> f64 + Sync,
{
    let (a, b) = opts.source_window.map_or((0.0, t), |(a, b)| (a.max(0.0), b.min(t)));
    if b <= a {
        return (0.0, true);
    }
    let (s, w) = gauss_on(n, a, b);
    let parts: Vec<(f64, bool)> = s
        .par_iter()
        .zip(w.par_iter())
        .map(|(&si, &wi)| {
            let (m, ok) = ladder.mean(|y| f(si, y), x, c * (t - si), opts);
            (wi * (t - si) * m, ok)
        })
        .collect();
    let value = parts.iter().map(|p| p.0).sum();
    (value, parts.iter().all(|p| p.1))
}

/// Evaluates `w(t, x)` to the tolerances in `opts`.
pub fn kirchhoff_solve<F>(f: F, c: f64, t: f64, x: [f64; 3], opts: &KirchhoffOptions) -> KirchhoffValue
where
    F: Fn(f64, [f64; 3]) -> f64 + Sync,
{
    if t <= 0.0 {
        return KirchhoffValue {
            value: 0.0,
            error_estimate: 0.0,
            converged: true,
            time_nodes: 0,
        };
    }
    let ladder = Ladder { rules: sphere_ladder() };
    let mut n = opts.min_time_nodes.max(1);
    let (mut prev, mut ok_prev) = time_integral(&f, c, t, x, n, &ladder, opts);
    loop {
        let next_n = 2 * n;
        if next_n > opts.max_time_nodes {
            return KirchhoffValue {
                value: prev,
                error_estimate: f64::NAN,
                converged: false,
                time_nodes: n,
            };
        }
        let (cur, ok) = time_integral(&f, c, t, x, next_n, &ladder, opts);
        let err = (cur - prev).abs();
        if agree(cur, prev, opts) {
            return KirchhoffValue {
                value: cur,
                error_estimate: err,
                converged: ok && ok_prev,
                time_nodes: next_n,
            };
        }
        prev = cur;
        ok_prev = ok;
        n = next_n;
    }
}

/// A fixed product rule, exposed for callers that need a plain spherical
/// mean without adaptivity.
pub fn sphere_mean<G: Fn([f64; 3]) -> f64>(g: G, x: [f64; 3], rho: f64, order: usize) -> f64 {
    gauss_product(order).mean(|p| g([x[0] + rho * p[0], x[1] + rho * p[1], x[2] + rho * p[2]]))
}
