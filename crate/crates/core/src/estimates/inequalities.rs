//! Left- and right-hand sides of the weighted estimates, evaluated on test
//! fields with quadrature at a given resolution.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fields::{apply_gamma, GridSnapshot, Local, TestField, GAMMA, ROTATIONS};
use super::jet::Jet;
use super::quad::{time_rule, Node, SpaceRule};
use super::EstimateError;
use crate::grid::kirchhoff::{kirchhoff_solve, KirchhoffOptions};
use crate::system::{form_is_null, rational, ConeForm};

/// Sphere order that integrates the angular dependence of radial fields
/// exactly (product rule of degree 11).
pub const EXACT_SPHERE: usize = 6;
/// Sphere order at level 0 where angular dependence must be resolved.
pub const BASE_SPHERE: usize = 8;
/// Nodes with `RHS` below this fraction of the largest `RHS` are left out
/// of pointwise sup ratios.
pub const RHS_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub level: usize,
    /// Panel width in space and time.
    pub h: f64,
}

impl Resolution {
    /// Level `k` halves `h0` `k` times.
    pub fn new(h0: f64, level: usize) -> Self {
        Self {
            level,
            h: h0 / (1u64 << level) as f64,
        }
    }

    pub fn sphere_order(&self) -> usize {
        BASE_SPHERE << self.level
    }
}

/// How much angular resolution an integrand of radial fields needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Angles {
    /// Rotation-invariant integrand: one direction suffices.
    Invariant,
    /// Polynomial in the direction: a fixed product rule is exact.
    Polynomial,
    /// Anything else: the sphere rule refines with the level.
    Resolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// A quadrature or oracle tolerance was missed.
    pub flagged: bool,
    /// Named intermediate quantities.
    pub parts: Vec<(String, f64)>,
}

/// `lhs / rhs`, with `0/0 = 0`.
pub fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 && rhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

impl Evaluation {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            ratio: ratio(lhs, rhs),
            flagged: false,
            parts: Vec::new(),
        }
    }

    fn with(mut self, name: &str, v: f64) -> Self {
        self.parts.push((name.to_string(), v));
        self
    }

    pub fn part(&self, name: &str) -> Option<f64> {
        self.parts.iter().find(|p| p.0 == name).map(|p| p.1)
    }
}

/// `⟨s⟩ = (1 + s²)^{1/2}`.
pub fn japanese(s: f64) -> f64 {
    (1.0 + s * s).sqrt()
}

fn snapshot_of(f: &TestField) -> Option<&GridSnapshot> {
    match f {
        TestField::Snapshot(s) => Some(s),
        TestField::Scaled(g, _) => snapshot_of(g),
        _ => None,
    }
}

/// Quadrature nodes covering the supports of `fields` at time `t`.
pub fn space_rule(fields: &[&TestField], t: f64, res: &Resolution, breaks: &[f64], angles: Angles) -> SpaceRule {
    if let Some(s) = fields.iter().find_map(|f| snapshot_of(f)) {
        return SpaceRule::grid(&s.slab.grid, 2);
    }
    let active: Vec<&&TestField> = fields.iter().filter(|f| !matches!(f, TestField::Zero)).collect();
    if active.is_empty() {
        return SpaceRule { nodes: Vec::new() };
    }
    if active.iter().all(|f| f.is_radial()) {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        let mut cuts = breaks.to_vec();
        for f in &active {
            let (a, b) = f.support_band(t);
            lo = lo.min(a);
            hi = hi.max(b);
            cuts.extend([a, b]);
        }
        if hi <= lo {
            return SpaceRule { nodes: Vec::new() };
        }
        return match angles {
            Angles::Invariant => SpaceRule::radial(lo, hi, res.h, &cuts),
            Angles::Polynomial => SpaceRule::polar(lo, hi, res.h, &cuts, EXACT_SPHERE),
            Angles::Resolved => SpaceRule::polar(lo, hi, res.h, &cuts, res.sphere_order()),
        };
    }
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for f in &active {
        let (c, half) = f.support_box(t);
        for i in 0..3 {
            lo[i] = lo[i].min(c[i] - half);
            hi[i] = hi[i].max(c[i] + half);
        }
    }
    let center = [0, 1, 2].map(|i| 0.5 * (lo[i] + hi[i]));
    let half = (0..3).map(|i| 0.5 * (hi[i] - lo[i])).fold(0.0, f64::max);
    SpaceRule::cube(center, half, res.h)
}

fn field_jet(f: &TestField, t: f64, node: &Node) -> Jet {
    match f {
        TestField::Snapshot(s) => s.jet_at(node.index.expect("snapshot rules carry grid indices")),
        TestField::Scaled(g, k) if g.is_snapshot() => field_jet(g, t, node).scale(*k),
        _ => f.jet(t, node.x),
    }
}

/// Derivatives of `f` at a node, with the commuting fields applied once.
pub fn local(f: &TestField, t: f64, node: &Node) -> Local {
    if matches!(f, TestField::Zero) {
        return Local::zero();
    }
    let (tj, xj) = Jet::coordinates(t, node.x);
    Local::from_jet(&field_jet(f, t, node), &tj, &xj)
}

/// Squared integrands of `bracket(w, c)`: `|w'|²`, `|Z w'|²` per field and
/// `(⟨t+r⟩(∂ₜ² − c²Δ)w)²`.
fn bracket_integrands(l: &Local, c: f64, t: f64, r: f64) -> [f64; GAMMA + 2] {
    let mut out = [0.0; GAMMA + 2];
    out[0] = l.abs_du().powi(2);
    for z in 0..GAMMA {
        out[1 + z] = l.abs_gamma_du(z).powi(2);
    }
    out[GAMMA + 1] = (japanese(t + r) * l.wave(c)).powi(2);
    out
}

/// `Σ_{|α|≤1} ‖Γ^α w'‖₂ + ‖⟨t+r⟩(∂ₜ² − c²Δ)w‖₂` from integrated squares.
fn bracket_from(sq: &[f64]) -> f64 {
    sq[..GAMMA + 2].iter().map(|v| v.max(0.0).sqrt()).sum()
}

/// `bracket(w, c)` at time `t`.
pub fn bracket(w: &TestField, c: f64, t: f64, res: &Resolution) -> f64 {
    let rule = space_rule(&[w], t, res, &[], Angles::Polynomial);
    let sq = rule.integrate(GAMMA + 2, |n| bracket_integrands(&local(w, t, n), c, t, n.r()).to_vec());
    bracket_from(&sq)
}

/// `Σ_{|α|≤order} |Γ^α f|` over ordered sequences of the eight fields.
pub fn gamma_sum(f: &Jet, t: &Jet, x: &[Jet; 3], order: usize) -> f64 {
    if order == 1 {
        // the last layer only needs first derivatives at the point
        return f.value().abs() + gamma_values(f, t, x).iter().map(|v| v.abs()).sum::<f64>();
    }
    let mut s = f.value().abs();
    if order > 0 {
        for z in 0..GAMMA {
            s += gamma_sum(&apply_gamma(z, f, t, x), t, x, order - 1);
        }
    }
    s
}

/// `(Γ_z f)(p)` for the eight fields, from the gradient of `f` at `p`.
fn gamma_values(f: &Jet, t: &Jet, x: &[Jet; 3]) -> [f64; GAMMA] {
    let g = f.gradient();
    let (t, x) = (t.value(), [x[0].value(), x[1].value(), x[2].value()]);
    [
        g[0],
        g[1],
        g[2],
        g[3],
        x[0] * g[2] - x[1] * g[1],
        x[0] * g[3] - x[2] * g[1],
        x[1] * g[3] - x[2] * g[2],
        t * g[0] + x[0] * g[1] + x[1] * g[2] + x[2] * g[3],
    ]
}

/// `t·max_x |w(t, x)|` over `probes`, with `w` the zero-data solution of
/// `□w = F` from the spherical-means formula. The flag reports a missed
/// quadrature tolerance.
pub fn pointwise_decay_lhs(f: &TestField, t: f64, probes: &[[f64; 3]]) -> (f64, bool) {
    let opts = KirchhoffOptions {
        rel_tol: 1e-5,
        abs_tol: 1e-9,
        feature_scale: Some(f.feature_scale()),
        source_window: f.time_support(),
        ..KirchhoffOptions::default()
    };
    let mut best: f64 = 0.0;
    let mut flagged = false;
    for &x in probes {
        let w = kirchhoff_solve(|s, y| f.value(s, y), 1.0, t, x, &opts);
        flagged |= !w.converged;
        best = best.max(t * w.value.abs());
    }
    (best, flagged)
}

/// `∫₀ᵗ ∫ Σ_{|α|≤3} |Γ^α F(s, y)| dy ds / (1 + |y|)`.
pub fn pointwise_decay_rhs(f: &TestField, t: f64, res: &Resolution) -> f64 {
    let (a, b) = f.time_support().unwrap_or((0.0, t));
    let mut total = 0.0;
    for (s, ws) in time_rule(a.max(0.0), b.min(t), res.h, &[]) {
        let rule = space_rule(&[f], s, res, &[], Angles::Resolved);
        let v = rule.integrate(1, |n| {
            let (tj, xj) = Jet::coordinates(s, n.x);
            vec![gamma_sum(&f.eval(&tj, &xj), &tj, &xj, 3) / (1.0 + n.r())]
        });
        total += ws * v[0];
    }
    total
}

/// Pointwise decay of zero-data solutions against the weighted
/// space-time integral of the source and its `Γ`-derivatives.
pub fn verify_pointwise_decay(f: &TestField, t: f64, probes: &[[f64; 3]], res: &Resolution) -> Evaluation {
    let (lhs, flagged) = pointwise_decay_lhs(f, t, probes);
    let mut e = Evaluation::new(lhs, pointwise_decay_rhs(f, t, res));
    e.flagged = flagged;
    e
}

/// Weighted space-time `L²` norms of `v` on `[0, t]` against the data
/// energy plus `∫₀ᵗ ‖□v‖₂`, with `□v` computed from `v`.
pub fn verify_spacetime_l2(v: &TestField, t: f64, res: &Resolution) -> Evaluation {
    let basic = |n: &Node, s: f64| -> (f64, [f64; 4], f64) {
        if matches!(v, TestField::Zero) {
            return (0.0, [0.0; 4], 0.0);
        }
        let j = field_jet(v, s, n);
        let h = j.hessian();
        (j.value(), j.gradient(), h[0][0] - h[1][1] - h[2][2] - h[3][3])
    };
    let mut acc_du = 0.0;
    let mut acc_u = 0.0;
    let mut duhamel = 0.0;
    for (s, ws) in time_rule(0.0, t, res.h, &[]) {
        let rule = space_rule(&[v], s, res, &[], Angles::Invariant);
        let ints = rule.integrate(3, |n| {
            let (u, du, g) = basic(n, s);
            let w = 1.0 + n.r();
            let du2: f64 = du.iter().map(|d| d * d).sum();
            vec![du2 / (w * w), u * u / w.powi(4), g * g]
        });
        acc_du += ws * ints[0];
        acc_u += ws * ints[1];
        duhamel += ws * ints[2].sqrt();
    }
    let rule0 = space_rule(&[v], 0.0, res, &[], Angles::Invariant);
    let data = rule0
        .integrate(1, |n| {
            let (_, du, _) = basic(n, 0.0);
            vec![du.iter().map(|d| d * d).sum()]
        })[0]
        .sqrt();
    let lhs = acc_du.sqrt() + acc_u.sqrt();
    Evaluation::new(lhs, data + duhamel)
        .with("weighted_du", acc_du.sqrt())
        .with("weighted_u", acc_u.sqrt())
        .with("data", data)
        .with("duhamel", duhamel)
}

/// Coefficients of a cubic form `C_{abc}` (64 entries, `a*16 + b*4 + c`,
/// acting as `C_{abc} ∂_c u ∂_a∂_b v`) or a quadratic form `B_{ab}` (16
/// entries, `a*4 + b`, acting as `B_{ab} ∂_a u ∂_b v`).
#[derive(Debug, Clone, PartialEq)]
pub enum NullForm {
    Cubic(Vec<BigRational>),
    Quadratic(Vec<BigRational>),
}

impl NullForm {
    /// `c⁻²∂ₜu∂ₜv − ∇u·∇v`.
    pub fn q0(speed: &BigRational) -> Self {
        let mut b = vec![BigRational::zero(); 16];
        b[0] = (speed * speed).recip();
        for j in 1..4 {
            b[j * 4 + j] = -BigRational::one();
        }
        NullForm::Quadratic(b)
    }

    /// `(∂ₜu)(∂ₜv)`, which fails the null condition at every speed.
    pub fn time_derivatives() -> Self {
        let mut b = vec![BigRational::zero(); 16];
        b[0] = BigRational::one();
        NullForm::Quadratic(b)
    }

    /// The cubic form of `c⁻²∂ₜu ∂ₜ∂₁v − ∇u·∇∂₁v`, symmetrized in the two
    /// derivatives falling on `v`.
    pub fn q0_of_derivative(speed: &BigRational) -> Self {
        let mut c = vec![BigRational::zero(); 64];
        let half = rational::frac(1, 2);
        let idx = |a: usize, b: usize, cc: usize| a * 16 + b * 4 + cc;
        let t = (speed * speed).recip() * &half;
        c[idx(0, 1, 0)] += &t;
        c[idx(1, 0, 0)] += &t;
        for j in 1..4 {
            c[idx(j, 1, j)] -= &half;
            c[idx(1, j, j)] -= &half;
        }
        NullForm::Cubic(c)
    }

    fn cone_form(&self) -> ConeForm<'_> {
        match self {
            NullForm::Cubic(c) => ConeForm::Cubic(c),
            NullForm::Quadratic(b) => ConeForm::Quadratic(b),
        }
    }

    /// Exact null check for the given speed.
    pub fn is_null(&self, speed: &BigRational) -> bool {
        form_is_null(self.cone_form(), speed)
    }

    fn numeric(&self) -> (bool, Vec<f64>) {
        match self {
            NullForm::Cubic(c) => (true, c.iter().map(rational::to_f64).collect()),
            NullForm::Quadratic(b) => (false, b.iter().map(rational::to_f64).collect()),
        }
    }
}

/// `|form(u, v)|` and its two-term bound from local derivatives at radius
/// `r`.
fn null_form_sides(cubic: bool, k: &[f64], speed: f64, lu: &Local, lv: &Local, t: f64, r: f64) -> (f64, f64) {
    let cone = japanese(speed * t - r) / japanese(t + r);
    if cubic {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    s += k[a * 16 + b * 4 + c] * lu.du[c] * lv.ddu[a][b];
                }
            }
        }
        let near = (lu.abs_gamma_u() * lv.abs_ddu() + lu.abs_du() * lv.abs_d_gamma_u()) / japanese(r);
        (s.abs(), near + cone * lu.abs_du() * lv.abs_ddu())
    } else {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += k[a * 4 + b] * lu.du[a] * lv.du[b];
            }
        }
        let near = (lu.abs_gamma_u() * lv.abs_du() + lu.abs_du() * lv.abs_gamma_u()) / japanese(r);
        (s.abs(), near + cone * lu.abs_du() * lv.abs_du())
    }
}

/// `(|form(u, v)|, bound)` at a single point of analytic fields.
pub fn null_form_sides_at(form: &NullForm, speed: f64, u: &TestField, v: &TestField, t: f64, x: [f64; 3]) -> (f64, f64) {
    let (cubic, k) = form.numeric();
    let n = Node { x, w: 0.0, index: None };
    null_form_sides(cubic, &k, speed, &local(u, t, &n), &local(v, t, &n), t, n.r())
}

/// Pointwise sup of `|form(u, v)|` over its two-term bound on `r > r_min`.
/// Rejects forms failing the null condition at `speed`.
pub fn verify_null_form_bound(
    form: &NullForm,
    speed: &BigRational,
    u: &TestField,
    v: &TestField,
    t: f64,
    res: &Resolution,
    r_min: f64,
) -> Result<Evaluation, EstimateError> {
    if !form.is_null(speed) {
        return Err(EstimateError::NotNull(rational::to_text(speed)));
    }
    Ok(null_form_ratio(form, rational::to_f64(speed), u, v, t, res, r_min))
}

/// The sup ratio without the null-condition precondition; used to show how
/// the bound fails for forms that are not null.
pub fn null_form_ratio(
    form: &NullForm,
    speed: f64,
    u: &TestField,
    v: &TestField,
    t: f64,
    res: &Resolution,
    r_min: f64,
) -> Evaluation {
    let (cubic, k) = form.numeric();
    let rule = space_rule(&[u, v], t, res, &[speed * t], Angles::Resolved);
    let values: Vec<Option<(f64, f64)>> = rule.map(|n| {
        (n.r() > r_min).then(|| null_form_sides(cubic, &k, speed, &local(u, t, n), &local(v, t, n), t, n.r()))
    });
    let max_rhs = values.iter().flatten().map(|p| p.1).fold(0.0, f64::max);
    let admissible = |p: &(f64, f64)| p.1 > RHS_FLOOR * max_rhs || (p.1 == 0.0 && p.0 > 0.0);
    let mut ranked: Vec<(usize, (f64, f64))> = values
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.filter(|p| admissible(p)).map(|p| (i, p)))
        .collect();
    if ranked.is_empty() {
        return Evaluation::new(0.0, max_rhs);
    }
    ranked.sort_by(|a, b| ratio(b.1 .0, b.1 .1).total_cmp(&ratio(a.1 .0, a.1 .1)).then(a.0.cmp(&b.0)));
    let best_sampled = ranked[0].1;
    if u.is_snapshot() || v.is_snapshot() {
        return Evaluation::new(best_sampled.0, best_sampled.1);
    }
    let at = |x: [f64; 3]| -> Option<(f64, f64)> {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if r <= r_min {
            return None;
        }
        let n = Node { x, w: 0.0, index: None };
        let p = null_form_sides(cubic, &k, speed, &local(u, t, &n), &local(v, t, &n), t, r);
        admissible(&p).then_some(p)
    };
    let refined: Vec<(f64, f64)> = ranked
        .iter()
        .take(SUP_STARTS)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|&(i, p)| climb(&at, rule.nodes[i].x, p, 0.25 * res.h))
        .collect();
    let best = refined
        .into_iter()
        .fold(best_sampled, |a, b| if ratio(b.0, b.1) > ratio(a.0, a.1) { b } else { a });
    Evaluation::new(best.0, best.1)
}

/// Sampled nodes from which the pointwise sup is refined.
pub const SUP_STARTS: usize = 16;
/// Smallest pattern-search step relative to the initial one.
const CLIMB_SHRINK: f64 = 1e-4;
/// Cap on pattern-search sweeps per start.
const CLIMB_SWEEPS: usize = 400;

/// Compass search for a local maximum of `lhs/rhs` from `x`: steps along
/// the coordinate axes, doubled after a successful sweep up to `step` and
/// halved after a failed one.
fn climb<F>(f: &F, mut x: [f64; 3], mut p: (f64, f64), step: f64) -> (f64, f64)
where
    F: Fn([f64; 3]) -> Option<(f64, f64)>,
{
    let mut s = step;
    for _ in 0..CLIMB_SWEEPS {
        if s <= CLIMB_SHRINK * step {
            break;
        }
        let mut moved = false;
        for axis in 0..3 {
            for sign in [1.0, -1.0] {
                let mut y = x;
                y[axis] += sign * s;
                if let Some(q) = f(y) {
                    if ratio(q.0, q.1) > ratio(p.0, p.1) {
                        x = y;
                        p = q;
                        moved = true;
                    }
                }
            }
        }
        s = if moved { (2.0 * s).min(step) } else { 0.5 * s };
    }
    p
}

/// Weighted `L²` bound on `∇h'` and the `L⁶` bound away from the cone, one
/// evaluation per `δ`.
pub fn verify_ks_bounds(h: &TestField, t: f64, deltas: &[f64], res: &Resolution) -> (Evaluation, Vec<Evaluation>) {
    let mut breaks = vec![t];
    for d in deltas {
        breaks.extend([(1.0 - d) * t, (1.0 + d) * t]);
    }
    let rule = space_rule(&[h], t, res, &breaks, Angles::Polynomial);
    let dim = GAMMA + 3 + deltas.len();
    let ints = rule.integrate(dim, |n| {
        let l = local(h, t, n);
        let r = n.r();
        let mut out = bracket_integrands(&l, 1.0, t, r).to_vec();
        out.push((japanese(t - r) * l.abs_grad_du()).powi(2));
        let du6 = l.abs_du().powi(6);
        for d in deltas {
            let outside = r < (1.0 - d) * t || r > (1.0 + d) * t;
            out.push(if outside { du6 } else { 0.0 });
        }
        out
    });
    let b = bracket_from(&ints);
    let local_energy = Evaluation::new(ints[GAMMA + 2].sqrt(), b).with("bracket", b);
    let off_cone = deltas
        .iter()
        .enumerate()
        .map(|(i, d)| {
            Evaluation::new(ints[GAMMA + 3 + i].powf(1.0 / 6.0), b / japanese(t))
                .with("delta", *d)
                .with("bracket", b)
        })
        .collect();
    (local_energy, off_cone)
}

/// Interaction of waves of speeds `c₁ ≠ c₂`; also recomputes the left side
/// split at `|c₁t − r| = δt` with `δ = |c₁ − c₂|/4`.
pub fn verify_different_speed(
    u: &TestField,
    v: &TestField,
    c1: f64,
    c2: f64,
    t: f64,
    res: &Resolution,
) -> Result<Evaluation, EstimateError> {
    if c1 == c2 {
        return Err(EstimateError::EqualSpeeds(c1));
    }
    let delta = (c1 - c2).abs() / 4.0;
    let breaks = [c1 * t - delta * t, c1 * t + delta * t, c2 * t];
    let rule = space_rule(&[u, v], t, res, &breaks, Angles::Polynomial);
    let n_b = GAMMA + 2;
    let ints = rule.integrate(4 + 2 * n_b, |n| {
        let lu = local(u, t, n);
        let lv = local(v, t, n);
        let r = n.r();
        let jx = japanese(r);
        let integrand = lu.abs_ddu() * lv.abs_du() / jx;
        let near = (c1 * t - r).abs() < delta * t;
        let mut out = vec![
            integrand,
            if near { integrand } else { 0.0 },
            if near { 0.0 } else { integrand },
            (lv.abs_du() / jx).powi(2),
        ];
        out.extend(bracket_integrands(&lu, c1, t, r));
        out.extend(bracket_integrands(&lv, c2, t, r));
        out
    });
    let bu = bracket_from(&ints[4..]);
    let bv = bracket_from(&ints[4 + n_b..]);
    let jt = japanese(t);
    let first = bu * ints[3].sqrt() / jt;
    let second = bu * bv / jt.powf(4.0 / 3.0);
    Ok(Evaluation::new(ints[0], first + second)
        .with("near_cone", ints[1])
        .with("away_from_cone", ints[2])
        .with("split_defect", (ints[0] - ints[1] - ints[2]).abs())
        .with("first_term", first)
        .with("second_term", second))
}

/// The three same-speed interaction bounds, in order: second derivatives
/// against values, first derivatives with the logarithmic factor, and the
/// cone-weighted second derivatives.
pub fn verify_same_speed(u: &TestField, v: &TestField, t: f64, res: &Resolution) -> [Evaluation; 3] {
    let rule = space_rule(&[u, v], t, res, &[t], Angles::Polynomial);
    let ints = rule.integrate(7 + GAMMA + 2, |n| {
        let lu = local(u, t, n);
        let lv = local(v, t, n);
        let r = n.r();
        let jx = japanese(r);
        let mut out = vec![
            lu.abs_ddu() * lv.value.abs() / (jx * jx),
            lu.abs_du() * lv.abs_du() / (jx * jx),
            japanese(t - r) / japanese(t + r) * lu.abs_ddu() * lv.abs_du() / jx,
            (lv.value / (jx * jx)).powi(2),
            lv.abs_du().powi(2),
            (lv.abs_du() / jx).powi(2),
            lu.abs_du().powi(2),
        ];
        out.extend(bracket_integrands(&lu, 1.0, t, r));
        out
    });
    let bu = bracket_from(&ints[7..]);
    let jt = japanese(t);
    let v_w2 = ints[3].sqrt();
    let dv = ints[4].sqrt();
    let dv_w1 = ints[5].sqrt();
    let du = ints[6].sqrt();
    let log = (2.0 + t).ln();
    [
        Evaluation::new(ints[0], bu * v_w2 / jt + bu * dv / jt.powf(4.0 / 3.0)),
        Evaluation::new(ints[1], log * bu * dv_w1 / jt + du * dv / (jt * jt)),
        Evaluation::new(ints[2], bu * dv_w1 / jt),
    ]
}

/// Spatial multi-indices `β` with `|β| ≤ 2`, as lists of axes `1..=3`.
const BETAS: [&[usize]; 10] = [&[], &[1], &[2], &[3], &[1, 1], &[1, 2], &[1, 3], &[2, 2], &[2, 3], &[3, 3]];

/// `Ω^α ∂ₓ^β v` for `|α| + |β| ≤ 2`, rotations applied last.
pub fn omega_partials(j: &Jet, t: &Jet, x: &[Jet; 3]) -> Vec<f64> {
    let mut out = Vec::with_capacity(31);
    for beta in BETAS {
        let mut jb = *j;
        for &a in beta {
            jb = jb.deriv(a);
        }
        out.push(jb.value());
        if beta.len() < 2 {
            for z1 in ROTATIONS {
                let j1 = apply_gamma(z1, &jb, t, x);
                out.push(j1.value());
                if beta.is_empty() {
                    for z2 in ROTATIONS {
                        out.push(apply_gamma(z2, &j1, t, x).value());
                    }
                }
            }
        }
    }
    out
}

/// Number of terms produced by [`omega_partials`].
pub const OMEGA_PARTIAL_TERMS: usize = 31;

/// Weighted `L²` norm of a product against the two-term bound.
pub fn verify_product_bound(u: &TestField, v: &TestField, t: f64, res: &Resolution) -> Evaluation {
    let rule = space_rule(&[u, v], t, res, &[], Angles::Polynomial);
    let v_is_zero = matches!(v, TestField::Zero);
    let ints = rule.integrate(2 + OMEGA_PARTIAL_TERMS, |n| {
        let r = n.r();
        let uu = if matches!(u, TestField::Zero) { 0.0 } else { field_jet(u, t, n).value() };
        let mut out = Vec::with_capacity(2 + OMEGA_PARTIAL_TERMS);
        if v_is_zero {
            out.extend([0.0, uu * uu]);
            out.extend([0.0; OMEGA_PARTIAL_TERMS]);
            return out;
        }
        let jv = field_jet(v, t, n);
        let (tj, xj) = Jet::coordinates(t, n.x);
        out.push((japanese(t + r) * uu * jv.value()).powi(2));
        out.push(uu * uu);
        out.extend(omega_partials(&jv, &tj, &xj).into_iter().map(|w| w * w));
        out
    });
    let mut sup = rule
        .map(|n| if v_is_zero { 0.0 } else { field_jet(v, t, n).value().abs() })
        .into_iter()
        .fold(0.0, f64::max);
    if !v_is_zero && !v.is_snapshot() {
        sup = sup.max(v.value(t, [0.0; 3]).abs());
    }
    let u_l2 = ints[1].sqrt();
    let sobolev: f64 = ints[2..].iter().map(|w| w.sqrt()).sum();
    let first = u_l2 * japanese(t) * sup;
    let second = u_l2 * sobolev;
    Evaluation::new(ints[0].sqrt(), first + second)
        .with("u_l2", u_l2)
        .with("v_sup", sup)
        .with("first_term", first)
        .with("second_term", second)
}
