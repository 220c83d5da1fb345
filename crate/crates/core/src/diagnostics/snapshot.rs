//! Everything a diagnostics row needs, evaluated on one solver window.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::energy::energy_form;
use super::norms::{japanese, radial_weighted_sobolev_profile, weighted_sobolev_profile};
use super::radial::{radial_d1, radial_integral, RadialSlab};
use super::{DiagnosticsError, DiagnosticsSpec};
use crate::grid::{reduce, Grid3, Slab};
use crate::solver::{Forcing3, RadialForcing, RadialForm, RadialWindow, Window};
use crate::system::NumericSystem;

/// Quantities at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub e_flat: f64,
    pub e_pert: f64,
    /// `‖∇ₓu‖_{𝓗^k} + ‖∂ₜu‖_{𝓗^k}` for `k = 1 … m`.
    pub sobolev: Vec<f64>,
    /// `Σ_{|α|≤M} sup_x |Γ^α u'|`.
    pub sup_gamma: f64,
    /// `Σ_{|α|≤M} ‖Γ^α u'‖₂`.
    pub q1: f64,
    /// `∫ ⟨x⟩⁻² Σ_{|α|≤M} |Γ^α u'|² dx`.
    pub du_weighted: f64,
    /// `∫ ⟨x⟩⁻⁴ Σ_{|α|≤M} |Γ^α u|² dx`.
    pub u_weighted: f64,
    /// `‖F‖₂` of the semilinear part plus any external source.
    pub force_norm: f64,
    /// `Σ_l Σ ‖∂_l γ^{IK,ab}‖_∞`.
    pub dgamma_sup: f64,
    /// Minimum of `e₀ − ½ min(1, c²)|∇_{t,x}u|²`.
    pub margin: f64,
    pub smallness_violations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GammaQuantities {
    pub sup_gamma: f64,
    pub q1: f64,
    pub du_weighted: f64,
    pub u_weighted: f64,
}

fn accumulate(acc: &mut Vec<Vec<f64>>, k: usize, values: &[f64]) {
    if acc.len() == k {
        acc.push(vec![0.0; values.len()]);
    }
    acc[k].par_iter_mut().zip(values).for_each(|(a, v)| *a += v * v);
}

/// `Γ^α` quantities of the center level for `|α| ≤ budget`; `families`
/// need `budget + 1` levels on each side.
pub fn gamma_quantities(families: &[Slab], budget: usize) -> Result<GammaQuantities, DiagnosticsError> {
    let grid = families[0].grid;
    let mut acc_du: Vec<Vec<f64>> = Vec::new();
    let mut acc_u: Vec<Vec<f64>> = Vec::new();
    for slab in families {
        for a in 0..4 {
            let d = slab.partial(a)?.trimmed(budget);
            let mut k = 0;
            d.for_each_gamma(budget, |_, center| {
                accumulate(&mut acc_du, k, center);
                k += 1;
            })?;
        }
        let mut k = 0;
        slab.clone().trimmed(budget).for_each_gamma(budget, |_, center| {
            accumulate(&mut acc_u, k, center);
            k += 1;
        })?;
    }
    let w = grid.build(|p| japanese(grid.point(p)).powi(-2));
    let mut q = GammaQuantities::default();
    for a in &acc_du {
        q.sup_gamma += reduce::max_by(grid.len(), |p| {
            if grid.depth(p) >= grid.ghost {
                a[p].sqrt()
            } else {
                0.0
            }
        });
        q.q1 += grid.integrate(a).sqrt();
        q.du_weighted += grid.integrate_by(|p| w[p] * a[p]);
    }
    for a in &acc_u {
        q.u_weighted += grid.integrate_by(|p| w[p] * w[p] * a[p]);
    }
    Ok(q)
}

/// `Σ_l Σ_{I,K,a,b} sup |∂_l γ^{IK,ab}|` with
/// `∂_l γ^{IK,ab} = −Σ_{J,c} C^{IJK}_{abc} ∂_l ∂_c u^J`.
fn metric_derivative_sup(families: &[Slab], sys: &NumericSystem) -> Result<f64, DiagnosticsError> {
    if sys.quasilinear.is_empty() {
        return Ok(0.0);
    }
    let grid = families[0].grid;
    let mut second: BTreeMap<(usize, usize, usize), Vec<f64>> = BTreeMap::new();
    for t in &sys.quasilinear {
        for l in 0..4 {
            let key = (t.j, l.min(t.c), l.max(t.c));
            if let std::collections::btree_map::Entry::Vacant(e) = second.entry(key) {
                let v = families[t.j].partial(key.1)?.partial(key.2)?.center().to_vec();
                e.insert(v);
            }
        }
    }
    let mut fields: BTreeMap<(usize, usize, usize, usize, usize), Vec<f64>> = BTreeMap::new();
    for t in &sys.quasilinear {
        for l in 0..4 {
            let dd = &second[&(t.j, l.min(t.c), l.max(t.c))];
            let f = fields
                .entry((l, t.i, t.k, t.a, t.b))
                .or_insert_with(|| vec![0.0; grid.len()]);
            f.par_iter_mut().zip(dd).for_each(|(a, v)| *a -= t.value * v);
        }
    }
    Ok(fields.values().map(|f| grid.sup(f, grid.ghost)).sum())
}

/// Diagnostics of the center level of a 3D window.
pub fn snapshot_3d(
    window: &Window,
    sys: &NumericSystem,
    spec: &DiagnosticsSpec,
    forcing: Option<&Forcing3>,
) -> Result<Snapshot, DiagnosticsError> {
    spec.validate()?;
    let families = &window.families;
    let grid: Grid3 = families[0].grid;
    let d = sys.families();
    let flat = energy_form(families, sys, false)?;
    let pert = energy_form(families, sys, true)?;
    let ut: Vec<Vec<f64>> = families
        .iter()
        .map(|s| s.partial(0).map(|p| p.center().to_vec()))
        .collect::<Result<_, _>>()?;
    let grads: Vec<[Vec<f64>; 3]> = families.iter().map(|s| grid.gradient(s.center())).collect();
    let mut sobolev = vec![0.0; spec.sobolev_order + 1];
    for i in 0..d {
        let fields = [&ut[i], &grads[i][0], &grads[i][1], &grads[i][2]];
        for f in fields {
            let prof = weighted_sobolev_profile(&grid, f, spec.sobolev_order)?;
            sobolev.iter_mut().zip(&prof).for_each(|(s, v)| *s += v);
        }
    }
    let gq = gamma_quantities(families, spec.budget)?;
    let t = window.t;
    let force: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            grid.build(|p| {
                let du: Vec<[f64; 4]> = (0..d)
                    .map(|j| [ut[j][p], grads[j][0][p], grads[j][1][p], grads[j][2][p]])
                    .collect();
                let mut out = vec![0.0; d];
                sys.semilinear_part(&du, &mut out);
                out[i] + forcing.map_or(0.0, |f| f(i, t, grid.point(p)))
            })
        })
        .collect();
    let force_norm = force.iter().map(|f| grid.l2(f).powi(2)).sum::<f64>().sqrt();
    Ok(Snapshot {
        t,
        e_flat: flat.energy,
        e_pert: pert.energy,
        sobolev: sobolev[1..].to_vec(),
        sup_gamma: gq.sup_gamma,
        q1: gq.q1,
        du_weighted: gq.du_weighted,
        u_weighted: gq.u_weighted,
        force_norm,
        dgamma_sup: metric_derivative_sup(families, sys)?,
        margin: pert.margin,
        smallness_violations: pert.smallness_violations,
    })
}

/// Points near the outer radius excluded from radial sup norms.
fn radial_skip(budget: usize) -> usize {
    budget + 2
}

/// Radial `Γ^α` quantities with `Γ ∈ {∂ₜ, ∂_r, S}` and `u' = (∂ₜu, ∂_r u)`.
pub fn radial_gamma_quantities(window: &RadialWindow, budget: usize) -> Result<GammaQuantities, DiagnosticsError> {
    let dr = window.dr;
    let slab = RadialSlab {
        t: window.t,
        dt: window.dt,
        dr,
        levels: window.levels.clone(),
        parity: 1.0,
    };
    let len = slab.center().len();
    let mut acc_du: Vec<Vec<f64>> = Vec::new();
    let mut acc_u: Vec<Vec<f64>> = Vec::new();
    for first in [super::RadialField::Dt, super::RadialField::Dr] {
        let d = slab.apply(first)?.trimmed(budget);
        let mut k = 0;
        d.for_each_gamma(budget, |_, center, _| {
            accumulate(&mut acc_du, k, center);
            k += 1;
        })?;
    }
    let mut k = 0;
    slab.clone().trimmed(budget).for_each_gamma(budget, |_, center, _| {
        accumulate(&mut acc_u, k, center);
        k += 1;
    })?;
    let inner = len - radial_skip(budget);
    let w = |i: usize| 1.0 / (1.0 + (i as f64 * dr).powi(2));
    let mut q = GammaQuantities::default();
    for a in &acc_du {
        q.sup_gamma += reduce::max_by(inner, |i| a[i].sqrt());
        q.q1 += radial_integral(dr, |i| a[i], len).sqrt();
        q.du_weighted += radial_integral(dr, |i| w(i) * a[i], len);
    }
    for a in &acc_u {
        q.u_weighted += radial_integral(dr, |i| w(i) * w(i) * a[i], len);
    }
    Ok(q)
}

/// Diagnostics of the center level of a radial window.
pub fn snapshot_radial(
    window: &RadialWindow,
    form: &RadialForm,
    spec: &DiagnosticsSpec,
    forcing: Option<&RadialForcing>,
) -> Result<Snapshot, DiagnosticsError> {
    spec.validate()?;
    let dr = window.dr;
    let c = form.c;
    let h = window.half();
    if h < 1 {
        return Err(crate::grid::GridError::InsufficientHistory {
            required: 3,
            available: window.levels.len(),
        }
        .into());
    }
    let u = window.center();
    let len = u.len();
    let (prev, next) = (&window.levels[h - 1], &window.levels[h + 1]);
    let ut: Vec<f64> = (0..len).map(|i| (next[i] - prev[i]) / (2.0 * window.dt)).collect();
    let ur = radial_d1(u, dr, 1.0);
    // v = r·u form: 4π ∫ v_t² + c² v_r² dr with the summation-by-parts gradient
    let v: Vec<f64> = (0..len).map(|i| i as f64 * dr * u[i]).collect();
    let energy2 = 4.0 * std::f64::consts::PI * dr * reduce::sum_by(len, |i| {
        let vt = i as f64 * dr * ut[i];
        let fwd = if i + 1 < len { Some((v[i + 1] - v[i]) / dr) } else { None };
        // v is odd through the axis
        let bwd = if i > 0 { Some((v[i] - v[i - 1]) / dr) } else { fwd };
        let g2 = match (fwd, bwd) {
            (Some(f), Some(b)) => 0.5 * (f * f + b * b),
            (None, Some(b)) => b * b,
            _ => 0.0,
        };
        vt * vt + c * c * g2
    });
    let e_flat = energy2.max(0.0).sqrt();
    let mut sobolev = vec![0.0; spec.sobolev_order + 1];
    for (f, parity) in [(&ut, 1.0), (&ur, -1.0)] {
        let prof = radial_weighted_sobolev_profile(dr, f, parity, spec.sobolev_order)?;
        sobolev.iter_mut().zip(&prof).for_each(|(s, v)| *s += v);
    }
    let gq = radial_gamma_quantities(window, spec.budget)?;
    let t = window.t;
    let force: Vec<f64> = (0..len)
        .map(|i| form.eval(ut[i], ur[i]) + forcing.map_or(0.0, |f| f(t, i as f64 * dr)))
        .collect();
    let m = (c * c).min(1.0);
    let margin = (0..len)
        .map(|i| ut[i] * ut[i] + c * c * ur[i] * ur[i] - 0.5 * m * (ut[i] * ut[i] + ur[i] * ur[i]))
        .fold(f64::INFINITY, f64::min);
    Ok(Snapshot {
        t,
        e_flat,
        e_pert: e_flat,
        sobolev: sobolev[1..].to_vec(),
        sup_gamma: gq.sup_gamma,
        q1: gq.q1,
        du_weighted: gq.du_weighted,
        u_weighted: gq.u_weighted,
        force_norm: radial_integral(dr, |i| force[i] * force[i], len).sqrt(),
        dgamma_sup: 0.0,
        margin,
        smallness_violations: 0,
    })
}
