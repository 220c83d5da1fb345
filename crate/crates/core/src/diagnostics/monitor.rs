//! Empirical constants of the bootstrap bounds
//! `(1+t) Σ|Γ^α u'| ≤ A₀ε` and `Σ‖Γ^α u'‖₂ ≤ A₁ε(1+t)^{A₂ε}`.

use serde::{Deserialize, Serialize};

use super::DiagnosticsSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorReport {
    pub budget: usize,
    pub epsilon: f64,
    /// `sup_t Q₀(t)/ε`.
    pub a0: f64,
    /// Upper envelope `Q₁(t)/Q₁(0) ≤ A₁(1+t)^{A₂ε}` with the smallest
    /// sup-norm misfit in log scale.
    pub a1: f64,
    pub a2: f64,
    /// `A₂ε`, the fitted growth exponent.
    pub exponent: f64,
    /// Largest gap between the envelope and the data in log scale.
    pub misfit: f64,
    pub finite: bool,
}

/// Fits the monitor constants to a finished series.
pub fn bootstrap_monitor(series: &DiagnosticsSeries, epsilon: f64) -> MonitorReport {
    let q0_max = series.rows.iter().map(|r| r.q0).fold(0.0, f64::max);
    let a0 = if q0_max == 0.0 { 0.0 } else { q0_max / epsilon };
    let finite_rows = series
        .rows
        .iter()
        .all(|r| r.q0.is_finite() && r.snapshot.q1.is_finite());
    let q1_0 = series.rows.first().map_or(0.0, |r| r.snapshot.q1);
    let (a, b, misfit) = if q1_0 > 0.0 && finite_rows {
        let pts: Vec<(f64, f64)> = series
            .rows
            .iter()
            .map(|r| ((1.0 + r.snapshot.t).ln(), (r.snapshot.q1 / q1_0).ln()))
            .collect();
        envelope(&pts)
    } else {
        (0.0, 0.0, 0.0)
    };
    let a1 = if q1_0 > 0.0 { a.exp() } else { 0.0 };
    let a2 = if epsilon > 0.0 { b / epsilon } else { 0.0 };
    MonitorReport {
        budget: series.budget,
        epsilon,
        a0,
        a1,
        a2,
        exponent: b,
        misfit,
        finite: finite_rows && a0.is_finite() && a1.is_finite() && a2.is_finite(),
    }
}

/// Line `a + b·x` lying above every point and minimizing the largest gap.
///
/// The gap `max(y − bx) − min(y − bx)` is convex in `b`; its minimum is
/// located by golden-section search.
fn envelope(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let gap = |b: f64| {
        let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, y)| {
            let v = y - b * x;
            (lo.min(v), hi.max(v))
        });
        (hi - lo, hi)
    };
    let x_span = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    if pts.len() < 2 || x_span == 0.0 {
        let a = pts.iter().map(|p| p.1).fold(0.0, f64::max);
        return (a, 0.0, 0.0);
    }
    let slope_bound = pts
        .iter()
        .flat_map(|p| pts.iter().map(move |q| (p, q)))
        .filter(|(p, q)| q.0 > p.0)
        .map(|(p, q)| ((q.1 - p.1) / (q.0 - p.0)).abs())
        .fold(0.0, f64::max)
        + 1.0;
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (-slope_bound, slope_bound);
    for _ in 0..200 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if gap(m1).0 <= gap(m2).0 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let b = 0.5 * (lo + hi);
    let (misfit, a) = gap(b);
    (a, b, misfit)
}

#[cfg(test)]
mod tests {
    use super::super::Snapshot;
    use super::*;

    fn series(q1: impl Fn(f64) -> f64, sup: f64) -> DiagnosticsSeries {
        let mut s = DiagnosticsSeries::new(2, 1);
        for k in 0..40 {
            let t = 0.5 * k as f64;
            s.push(Snapshot {
                t,
                e_flat: 0.0,
                e_pert: 0.0,
                sobolev: vec![0.0],
                sup_gamma: sup / (1.0 + t),
                q1: q1(t),
                du_weighted: 0.0,
                u_weighted: 0.0,
                force_norm: 0.0,
                dgamma_sup: 0.0,
                margin: 0.0,
                smallness_violations: 0,
            });
        }
        s
    }

    #[test]
    fn zero_solution() {
        let r = bootstrap_monitor(&series(|_| 0.0, 0.0), 0.1);
        assert_eq!((r.a0, r.a1, r.a2), (0.0, 0.0, 0.0));
        assert!(r.finite);
    }

    #[test]
    fn constant_q1_has_no_growth() {
        let r = bootstrap_monitor(&series(|_| 2.0, 0.3), 0.1);
        assert!((r.a0 - 3.0).abs() < 1e-12);
        assert!(r.a2.abs() < 1e-6);
        assert!((r.a1 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn recovers_power_law() {
        let r = bootstrap_monitor(&series(|t| 3.0 * (1.0 + t).powf(0.05), 1.0), 0.1);
        assert!((r.exponent - 0.05).abs() < 1e-6, "{}", r.exponent);
        assert!((r.a2 - 0.5).abs() < 1e-5);
        assert!(r.misfit < 1e-6);
    }
}
