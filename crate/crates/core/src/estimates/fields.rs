//! Test fields evaluated as jets, the commuting vector fields acting on
//! jets, and the pointwise quantities the estimates are built from.

use std::sync::Arc;

use super::jet::{slot, Jet, MAX_ORDER};
use crate::grid::Slab;

/// Profile `(1 − q²)⁶` on `|q| < 1`, zero outside; `C⁵` across the edge.
const BUMP_POWER: i32 = 6;

/// A solver state at one time, with one level on either side.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSnapshot {
    pub slab: Slab,
}

impl GridSnapshot {
    pub fn new(slab: Slab) -> Self {
        Self { slab }
    }

    /// Order-2 jet at node `idx` from centered differences.
    pub fn jet_at(&self, idx: usize) -> Jet {
        let g = &self.slab.grid;
        let h = g.h;
        let dt = self.slab.dt;
        let mid = self.slab.half();
        let lv = &self.slab.levels;
        let at = |m: isize, off: [isize; 3]| -> f64 {
            let mut p = idx as isize;
            for (a, o) in off.iter().enumerate() {
                p += o * g.stride(a) as isize;
            }
            lv[(mid as isize + m) as usize][p as usize]
        };
        let unit = |a: usize| {
            let mut e = [0isize; 3];
            e[a] = 1;
            e
        };
        let neg = |e: [isize; 3]| e.map(|v| -v);
        let add = |a: [isize; 3], b: [isize; 3]| [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
        // step sizes and offsets per axis: axis 0 is time
        let shift = |a: usize, s: isize| -> (isize, [isize; 3]) {
            if a == 0 {
                (s, [0; 3])
            } else if s > 0 {
                (0, unit(a - 1))
            } else {
                (0, neg(unit(a - 1)))
            }
        };
        let step = |a: usize| if a == 0 { dt } else { h };
        let mut c = [0.0; 15];
        c[0] = at(0, [0; 3]);
        for a in 0..4 {
            let (mp, op) = shift(a, 1);
            let (mm, om) = shift(a, -1);
            let mut e = [0; 4];
            e[a] = 1;
            c[slot(e).expect("first order")] = (at(mp, op) - at(mm, om)) / (2.0 * step(a));
            e[a] = 2;
            c[slot(e).expect("second order")] = (at(mp, op) - 2.0 * c[0] + at(mm, om)) / (2.0 * step(a) * step(a));
            for b in a + 1..4 {
                let mut e = [0; 4];
                e[a] = 1;
                e[b] = 1;
                let mut sum = 0.0;
                for (sa, sb, sign) in [(1, 1, 1.0), (1, -1, -1.0), (-1, 1, -1.0), (-1, -1, 1.0)] {
                    let (ma, oa) = shift(a, sa);
                    let (mb, ob) = shift(b, sb);
                    sum += sign * at(ma + mb, add(oa, ob));
                }
                c[slot(e).expect("second order")] = sum / (4.0 * step(a) * step(b));
            }
        }
        Jet::from_coefficients(&c, 2)
    }
}

/// Fields on `ℝ × ℝ³` used as inputs to the estimates.
#[derive(Debug, Clone, PartialEq)]
pub enum TestField {
    Zero,
    /// `A·exp(−|x − x₀|²/w²)`, constant in time.
    Gaussian { amp: f64, width: f64, center: [f64; 3] },
    /// `φ(r ∓ ct)/r` with `φ(s) = A(1 − ((s − s₀)/w)²)⁶`; an exact free
    /// wave of speed `c` while `φ` vanishes near `r = 0`.
    Pulse {
        amp: f64,
        s0: f64,
        width: f64,
        speed: f64,
        incoming: bool,
    },
    /// `A(1 − |x − x₀ − vt|²/w²)⁶`, optionally times a time window
    /// `(1 − ((t − t_c)/τ)²)⁴` given as `(t_c, τ)`.
    Bump {
        amp: f64,
        width: f64,
        center: [f64; 3],
        velocity: [f64; 3],
        window: Option<(f64, f64)>,
    },
    /// `A(½ + x₁/w + x₂x₃/w²)(1 − |x|²/w²)⁶`, constant in time.
    Windowed { amp: f64, width: f64 },
    /// `A(1 − ((r − R)/w)²)⁶`, constant in time.
    Shell { amp: f64, radius: f64, width: f64 },
    /// `6t·χ(|x|)` with `χ` a smooth step from 1 on `r ≤ r_in` to 0 on
    /// `r ≥ r_out`.
    Plateau { r_in: f64, r_out: f64 },
    Scaled(Box<TestField>, f64),
    /// `f(t, x)(1 − ((t − t_c)/τ)²)⁴` on `|t − t_c| < τ`, zero otherwise.
    TimeWindowed(Box<TestField>, f64, f64),
    /// `f(t, x + shift)`.
    Translated(Box<TestField>, [f64; 3]),
    /// `f(t, Rᵀx)` for a rotation `R` given by rows.
    Rotated(Box<TestField>, [[f64; 3]; 3]),
    Snapshot(Arc<GridSnapshot>),
}

fn norm(x: [f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

fn rho(x: &[Jet; 3]) -> Jet {
    x[0].mul(&x[0]).add(&x[1].mul(&x[1])).add(&x[2].mul(&x[2]))
}

/// `A(1 − q²)⁶` for `|q| < 1`, else zero.
fn bump_of(q: &Jet, amp: f64) -> Jet {
    if q.value().abs() >= 1.0 {
        return Jet::zero(q.order());
    }
    q.mul(q).scale(-1.0).add_const(1.0).powi(BUMP_POWER).scale(amp)
}

fn smooth_edge(a: &Jet) -> Jet {
    // exp(−1/a) for a > 0
    if a.value() <= 0.0 {
        return Jet::zero(a.order());
    }
    a.recip().scale(-1.0).exp()
}

impl TestField {
    pub fn scaled(self, s: f64) -> Self {
        TestField::Scaled(Box::new(self), s)
    }

    pub fn time_windowed(self, tc: f64, tau: f64) -> Self {
        TestField::TimeWindowed(Box::new(self), tc, tau)
    }

    pub fn translated(self, shift: [f64; 3]) -> Self {
        TestField::Translated(Box::new(self), shift)
    }

    pub fn rotated(self, rows: [[f64; 3]; 3]) -> Self {
        TestField::Rotated(Box::new(self), rows)
    }

    pub fn outgoing(amp: f64, s0: f64, width: f64, speed: f64) -> Self {
        TestField::Pulse {
            amp,
            s0,
            width,
            speed,
            incoming: false,
        }
    }

    pub fn incoming(amp: f64, s0: f64, width: f64, speed: f64) -> Self {
        TestField::Pulse {
            amp,
            s0,
            width,
            speed,
            incoming: true,
        }
    }

    pub fn is_snapshot(&self) -> bool {
        match self {
            TestField::Snapshot(_) => true,
            TestField::Scaled(f, _)
            | TestField::TimeWindowed(f, _, _)
            | TestField::Translated(f, _)
            | TestField::Rotated(f, _) => f.is_snapshot(),
            _ => false,
        }
    }

    /// True when the field depends on `|x|` only.
    pub fn is_radial(&self) -> bool {
        match self {
            TestField::Zero | TestField::Pulse { .. } | TestField::Shell { .. } | TestField::Plateau { .. } => true,
            TestField::Gaussian { center, .. } => *center == [0.0; 3],
            TestField::Bump { center, velocity, .. } => *center == [0.0; 3] && *velocity == [0.0; 3],
            TestField::Windowed { .. } | TestField::Snapshot(_) => false,
            TestField::Scaled(f, _) | TestField::TimeWindowed(f, _, _) | TestField::Rotated(f, _) => f.is_radial(),
            TestField::Translated(f, s) => *s == [0.0; 3] && f.is_radial(),
        }
    }

    /// A radius about the origin outside which the field vanishes at time
    /// `t` (to below `1e-15` relative for Gaussians).
    pub fn support_radius(&self, t: f64) -> f64 {
        match self {
            TestField::Zero => 0.0,
            TestField::Gaussian { width, center, .. } => norm(*center) + 6.0 * width,
            TestField::Pulse {
                s0,
                width,
                speed,
                incoming,
                ..
            } => {
                if *incoming {
                    (s0 + width - speed * t).max(0.0)
                } else {
                    s0 + width + speed * t
                }
            }
            TestField::Bump {
                width,
                center,
                velocity,
                ..
            } => {
                let c = [0, 1, 2].map(|i| center[i] + velocity[i] * t);
                norm(c) + width
            }
            TestField::Windowed { width, .. } => *width,
            TestField::Shell { radius, width, .. } => radius + width,
            TestField::Plateau { r_out, .. } => *r_out,
            TestField::Scaled(f, _) | TestField::TimeWindowed(f, _, _) | TestField::Rotated(f, _) => {
                f.support_radius(t)
            }
            TestField::Translated(f, s) => f.support_radius(t) + norm(*s),
            TestField::Snapshot(s) => s.slab.grid.l * 3f64.sqrt(),
        }
    }

    /// Radii `[lo, hi]` outside which the field vanishes at time `t`.
    pub fn support_band(&self, t: f64) -> (f64, f64) {
        match self {
            TestField::Pulse {
                s0,
                width,
                speed,
                incoming,
                ..
            } => {
                let shift = if *incoming { -speed * t } else { speed * t };
                ((s0 - width + shift).max(0.0), (s0 + width + shift).max(0.0))
            }
            TestField::Shell { radius, width, .. } => ((radius - width).max(0.0), radius + width),
            TestField::Scaled(f, _) | TestField::TimeWindowed(f, _, _) | TestField::Rotated(f, _) => {
                f.support_band(t)
            }
            _ => (0.0, self.support_radius(t)),
        }
    }

    /// A cube `center ± half` containing the support at time `t`.
    pub fn support_box(&self, t: f64) -> ([f64; 3], f64) {
        match self {
            TestField::Gaussian { width, center, .. } => (*center, 6.0 * width),
            TestField::Bump {
                width,
                center,
                velocity,
                ..
            } => ([0, 1, 2].map(|i| center[i] + velocity[i] * t), *width),
            TestField::Scaled(f, _) | TestField::TimeWindowed(f, _, _) => f.support_box(t),
            TestField::Translated(f, s) => {
                let (c, half) = f.support_box(t);
                ([0, 1, 2].map(|i| c[i] - s[i]), half)
            }
            TestField::Rotated(f, m) => {
                let (c, half) = f.support_box(t);
                let rc = [0, 1, 2].map(|i| m[i][0] * c[0] + m[i][1] * c[1] + m[i][2] * c[2]);
                (rc, half * 3f64.sqrt())
            }
            TestField::Snapshot(s) => ([0.0; 3], s.slab.grid.l),
            _ => ([0.0; 3], self.support_radius(t)),
        }
    }

    /// Times outside which the field vanishes, when bounded.
    pub fn time_support(&self) -> Option<(f64, f64)> {
        match self {
            TestField::Bump {
                window: Some((tc, tau)),
                ..
            } => Some((tc - tau, tc + tau)),
            TestField::TimeWindowed(f, tc, tau) => {
                let (a, b) = f.time_support().unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
                Some((a.max(tc - tau), b.min(tc + tau)))
            }
            TestField::Scaled(f, _) | TestField::Translated(f, _) | TestField::Rotated(f, _) => f.time_support(),
            _ => None,
        }
    }

    /// Smallest length scale, used to size quadrature.
    pub fn feature_scale(&self) -> f64 {
        match self {
            TestField::Zero => f64::INFINITY,
            TestField::Gaussian { width, .. }
            | TestField::Pulse { width, .. }
            | TestField::Bump { width, .. }
            | TestField::Windowed { width, .. }
            | TestField::Shell { width, .. } => *width,
            TestField::Plateau { r_in, r_out } => r_out - r_in,
            TestField::Scaled(f, _)
            | TestField::TimeWindowed(f, _, _)
            | TestField::Translated(f, _)
            | TestField::Rotated(f, _) => f.feature_scale(),
            TestField::Snapshot(s) => s.slab.grid.h,
        }
    }

    /// Evaluates the field on coordinate jets.
    ///
    /// # Panics
    /// For grid snapshots, which are only available at their nodes.
    pub fn eval(&self, t: &Jet, x: &[Jet; 3]) -> Jet {
        let order = t.order().min(x[0].order());
        match self {
            TestField::Zero => Jet::zero(order),
            TestField::Gaussian { amp, width, center } => {
                let d: Vec<Jet> = (0..3).map(|i| x[i].add_const(-center[i])).collect();
                let r2 = d[0].mul(&d[0]).add(&d[1].mul(&d[1])).add(&d[2].mul(&d[2]));
                r2.scale(-1.0 / (width * width)).exp().scale(*amp)
            }
            TestField::Pulse {
                amp,
                s0,
                width,
                speed,
                incoming,
            } => {
                let xv = [x[0].value(), x[1].value(), x[2].value()];
                let r_val = norm(xv);
                let sign = if *incoming { 1.0 } else { -1.0 };
                let s_val = r_val + sign * speed * t.value();
                if ((s_val - s0) / width).abs() >= 1.0 {
                    return Jet::zero(order);
                }
                let r = rho(x).sqrt();
                let q = r.add(&t.scale(sign * speed)).add_const(-s0).scale(1.0 / width);
                bump_of(&q, *amp).mul(&r.recip())
            }
            TestField::Bump {
                amp,
                width,
                center,
                velocity,
                window,
            } => {
                let d: Vec<Jet> = (0..3)
                    .map(|i| x[i].sub(&t.scale(velocity[i])).add_const(-center[i]))
                    .collect();
                let q2 = d[0].mul(&d[0]).add(&d[1].mul(&d[1])).add(&d[2].mul(&d[2]));
                if q2.value() >= width * width {
                    return Jet::zero(order);
                }
                let space = q2.scale(-1.0 / (width * width)).add_const(1.0).powi(BUMP_POWER).scale(*amp);
                match window {
                    None => space,
                    Some((tc, tau)) => {
                        let q = t.add_const(-tc).scale(1.0 / tau);
                        if q.value().abs() >= 1.0 {
                            return Jet::zero(order);
                        }
                        space.mul(&q.mul(&q).scale(-1.0).add_const(1.0).powi(4))
                    }
                }
            }
            TestField::Windowed { amp, width } => {
                let q2 = rho(x).scale(1.0 / (width * width));
                if q2.value() >= 1.0 {
                    return Jet::zero(order);
                }
                let poly = x[0]
                    .scale(1.0 / width)
                    .add(&x[1].mul(&x[2]).scale(1.0 / (width * width)))
                    .add_const(0.5);
                poly.mul(&q2.scale(-1.0).add_const(1.0).powi(BUMP_POWER)).scale(*amp)
            }
            TestField::Shell { amp, radius, width } => {
                let xv = [x[0].value(), x[1].value(), x[2].value()];
                if ((norm(xv) - radius) / width).abs() >= 1.0 {
                    return Jet::zero(order);
                }
                let q = rho(x).sqrt().add_const(-radius).scale(1.0 / width);
                bump_of(&q, *amp)
            }
            TestField::Plateau { r_in, r_out } => {
                let a = rho(x).scale(-1.0).add_const(r_out * r_out).scale(1.0 / (r_out * r_out - r_in * r_in));
                let chi = if a.value() >= 1.0 {
                    Jet::constant(1.0, order)
                } else if a.value() <= 0.0 {
                    Jet::zero(order)
                } else {
                    let ga = smooth_edge(&a);
                    let gb = smooth_edge(&a.scale(-1.0).add_const(1.0));
                    ga.mul(&ga.add(&gb).recip())
                };
                chi.mul(&t.scale(6.0))
            }
            TestField::Scaled(f, s) => f.eval(t, x).scale(*s),
            TestField::TimeWindowed(f, tc, tau) => {
                let q = t.add_const(-tc).scale(1.0 / tau);
                if q.value().abs() >= 1.0 {
                    return Jet::zero(order);
                }
                f.eval(t, x).mul(&q.mul(&q).scale(-1.0).add_const(1.0).powi(4))
            }
            TestField::Translated(f, s) => {
                let y = [0, 1, 2].map(|i| x[i].add_const(s[i]));
                f.eval(t, &y)
            }
            TestField::Rotated(f, m) => {
                // (Rᵀx)_i = Σ_j m[j][i] x_j
                let y = [0, 1, 2].map(|i| {
                    x[0].scale(m[0][i])
                        .add(&x[1].scale(m[1][i]))
                        .add(&x[2].scale(m[2][i]))
                });
                f.eval(t, &y)
            }
            TestField::Snapshot(_) => panic!("grid snapshots are evaluated at nodes"),
        }
    }

    /// Jet of order 3 at `(t, x)`.
    pub fn jet(&self, t: f64, x: [f64; 3]) -> Jet {
        let (tj, xj) = Jet::coordinates(t, x);
        self.eval(&tj, &xj)
    }

    /// Plain value at `(t, x)`.
    pub fn value(&self, t: f64, x: [f64; 3]) -> f64 {
        let tj = Jet::constant(t, 0);
        let xj = x.map(|v| Jet::constant(v, 0));
        self.eval(&tj, &xj).value()
    }
}

/// Number of commuting fields: `∂ₜ, ∂₁, ∂₂, ∂₃, Ω₁₂, Ω₁₃, Ω₂₃, S`.
pub const GAMMA: usize = 8;
/// Indices of the rotations within the eight fields.
pub const ROTATIONS: [usize; 3] = [4, 5, 6];

/// Applies field `z` to `f`; `t`, `x` are the coordinate jets at the point.
pub fn apply_gamma(z: usize, f: &Jet, t: &Jet, x: &[Jet; 3]) -> Jet {
    match z {
        0..=3 => f.deriv(z),
        4 => x[0].mul(&f.deriv(2)).sub(&x[1].mul(&f.deriv(1))),
        5 => x[0].mul(&f.deriv(3)).sub(&x[2].mul(&f.deriv(1))),
        6 => x[1].mul(&f.deriv(3)).sub(&x[2].mul(&f.deriv(2))),
        7 => {
            let mut s = t.mul(&f.deriv(0));
            for i in 0..3 {
                s = s.add(&x[i].mul(&f.deriv(i + 1)));
            }
            s
        }
        _ => panic!("vector field index {z} out of range"),
    }
}

/// First and second derivatives of a field at a point, with the commuting
/// fields applied once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Local {
    pub value: f64,
    /// `w' = (∂ₜw, ∇w)`.
    pub du: [f64; 4],
    pub ddu: [[f64; 4]; 4],
    /// `Z w` per field.
    pub gamma_u: [f64; GAMMA],
    /// `Z ∂_a w` per field and component.
    pub gamma_du: [[f64; 4]; GAMMA],
    /// `∂_a Z w` per field and component.
    pub d_gamma_u: [[f64; 4]; GAMMA],
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl Local {
    /// Needs a jet of order at least 2.
    pub fn from_jet(j: &Jet, t: &Jet, x: &[Jet; 3]) -> Self {
        debug_assert!(j.order() >= 2 && j.order() <= MAX_ORDER);
        let d: [Jet; 4] = [0, 1, 2, 3].map(|a| j.deriv(a));
        let mut gamma_u = [0.0; GAMMA];
        let mut gamma_du = [[0.0; 4]; GAMMA];
        let mut d_gamma_u = [[0.0; 4]; GAMMA];
        for z in 0..GAMMA {
            let zj = apply_gamma(z, j, t, x);
            gamma_u[z] = zj.value();
            d_gamma_u[z] = zj.gradient();
            for a in 0..4 {
                gamma_du[z][a] = apply_gamma(z, &d[a], t, x).value();
            }
        }
        Self {
            value: j.value(),
            du: j.gradient(),
            ddu: j.hessian(),
            gamma_u,
            gamma_du,
            d_gamma_u,
        }
    }

    pub fn zero() -> Self {
        Self {
            value: 0.0,
            du: [0.0; 4],
            ddu: [[0.0; 4]; 4],
            gamma_u: [0.0; GAMMA],
            gamma_du: [[0.0; 4]; GAMMA],
            d_gamma_u: [[0.0; 4]; GAMMA],
        }
    }

    /// `|w'|`.
    pub fn abs_du(&self) -> f64 {
        euclid(&self.du)
    }

    /// `|∂²w|` over all space-time pairs.
    pub fn abs_ddu(&self) -> f64 {
        euclid(self.ddu.as_flattened())
    }

    /// `|∇w'|`: spatial derivatives of the space-time gradient.
    pub fn abs_grad_du(&self) -> f64 {
        euclid(self.ddu[1..].as_flattened())
    }

    /// `|Γw|`: `Γ^α w` over `|α| ≤ 1`, so `w` itself is included.
    pub fn abs_gamma_u(&self) -> f64 {
        (self.value * self.value + euclid(&self.gamma_u).powi(2)).sqrt()
    }

    /// `|∂Γw|`: `∂Γ^α w` over `|α| ≤ 1`, so `∂w` is included.
    pub fn abs_d_gamma_u(&self) -> f64 {
        (euclid(&self.du).powi(2) + euclid(self.d_gamma_u.as_flattened()).powi(2)).sqrt()
    }

    /// `|Z w'|` for field `z`.
    pub fn abs_gamma_du(&self, z: usize) -> f64 {
        euclid(&self.gamma_du[z])
    }

    /// `(∂ₜ² − c²Δ)w`.
    pub fn wave(&self, c: f64) -> f64 {
        self.ddu[0][0] - c * c * (self.ddu[1][1] + self.ddu[2][2] + self.ddu[3][3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn outgoing_pulse_is_a_free_wave() {
        let f = TestField::outgoing(1.0, 3.0, 1.5, 1.0);
        for &(t, r) in &[(0.0, 2.5), (2.0, 5.0), (6.0, 9.2)] {
            let x = [r * 0.6, r * 0.0, r * 0.8];
            let (tj, xj) = Jet::coordinates(t, x);
            let l = Local::from_jet(&f.eval(&tj, &xj), &tj, &xj);
            assert!(l.abs_du() > 1e-3);
            assert!(l.wave(1.0).abs() < 1e-12 * l.abs_ddu().max(1.0));
        }
    }

    #[test]
    fn two_speed_pulse_solves_its_own_equation() {
        let f = TestField::outgoing(1.0, 3.0, 1.5, 2.0);
        let (tj, xj) = Jet::coordinates(1.5, [5.2, 3.9, 0.0]);
        let l = Local::from_jet(&f.eval(&tj, &xj), &tj, &xj);
        assert!(l.wave(2.0).abs() < 1e-12 * l.abs_ddu());
        assert!(l.wave(1.0).abs() > 1e-3);
    }

    #[test]
    fn scaling_field_on_homogeneous_function() {
        // S(t² − |x|²) = 2(t² − |x|²)
        let (tj, xj) = Jet::coordinates(1.3, [0.2, -0.4, 0.9]);
        let f = tj.mul(&tj).sub(&rho(&xj));
        let sf = apply_gamma(7, &f, &tj, &xj);
        assert_relative_eq!(sf.value(), 2.0 * f.value(), epsilon = 1e-14);
    }

    #[test]
    fn rotations_annihilate_radial_fields() {
        let f = TestField::Shell {
            amp: 1.0,
            radius: 3.0,
            width: 1.0,
        };
        let (tj, xj) = Jet::coordinates(0.0, [1.0, 2.0, 1.5]);
        let j = f.eval(&tj, &xj);
        for z in ROTATIONS {
            assert!(apply_gamma(z, &j, &tj, &xj).value().abs() < 1e-13);
        }
    }

    #[test]
    fn rotated_field_agrees_with_direct_evaluation() {
        let f = TestField::Windowed { amp: 1.0, width: 2.0 };
        let c = 0.6f64;
        let s = 0.8f64;
        let m = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
        let g = f.clone().rotated(m);
        let x = [0.3, 0.5, -0.2];
        let rt_x = [c * x[0] + s * x[1], -s * x[0] + c * x[1], x[2]];
        assert_relative_eq!(g.value(0.0, x), f.value(0.0, rt_x), epsilon = 1e-15);
    }

    #[test]
    fn plateau_is_one_inside_and_zero_outside() {
        let f = TestField::Plateau { r_in: 2.0, r_out: 4.0 };
        assert_relative_eq!(f.value(0.5, [0.5, 0.5, 0.5]), 3.0);
        assert_eq!(f.value(0.5, [4.5, 0.0, 0.0]), 0.0);
        let mid = f.value(1.0, [3.0, 0.0, 0.0]);
        assert!(mid > 0.0 && mid < 6.0);
    }
}
