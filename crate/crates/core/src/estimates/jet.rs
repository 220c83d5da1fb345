//! Truncated Taylor polynomials in `(t, x₁, x₂, x₃)` up to total degree 3.
//!
//! A jet stores `∂^β f(p) / β!` for `|β| ≤ order` at a fixed point `p`, so
//! arithmetic on jets propagates exact derivatives through analytic
//! expressions. Differentiating lowers the order by one.

use std::sync::OnceLock;

/// Highest total degree carried.
pub const MAX_ORDER: usize = 3;
/// Number of multi-indices with `|β| ≤ 3` in four variables.
pub const LEN: usize = 35;
/// Coefficients of total degree at most `k` occupy the first `PREFIX[k]` slots.
const PREFIX: [usize; 4] = [1, 5, 15, 35];

struct Tables {
    exps: Vec<[usize; 4]>,
    degree: Vec<usize>,
    /// Slot of each exponent, `exps` index by `((b0*4+b1)*4+b2)*4+b3`.
    slot: Vec<Option<usize>>,
    /// `(i, j, target)` with `deg i + deg j ≤ 3`, sorted by target degree.
    products: Vec<(usize, usize, usize)>,
    /// Products whose target degree is at most `k`.
    products_upto: [usize; 4],
    /// `β!`.
    factorial: Vec<f64>,
}

fn key(e: [usize; 4]) -> usize {
    ((e[0] * 4 + e[1]) * 4 + e[2]) * 4 + e[3]
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut exps = Vec::with_capacity(LEN);
        for d in 0..=MAX_ORDER {
            for b0 in (0..=d).rev() {
                for b1 in (0..=d - b0).rev() {
                    for b2 in (0..=d - b0 - b1).rev() {
                        exps.push([b0, b1, b2, d - b0 - b1 - b2]);
                    }
                }
            }
        }
        assert_eq!(exps.len(), LEN);
        let degree: Vec<usize> = exps.iter().map(|e| e.iter().sum()).collect();
        let mut slot = vec![None; 256];
        for (i, e) in exps.iter().enumerate() {
            slot[key(*e)] = Some(i);
        }
        let mut products = Vec::new();
        for i in 0..LEN {
            for j in 0..LEN {
                if degree[i] + degree[j] <= MAX_ORDER {
                    let e = [0, 1, 2, 3].map(|a| exps[i][a] + exps[j][a]);
                    products.push((i, j, slot[key(e)].expect("in range")));
                }
            }
        }
        products.sort_by_key(|&(_, _, k)| degree[k]);
        let mut products_upto = [0; 4];
        for (k, upto) in products_upto.iter_mut().enumerate() {
            *upto = products.iter().filter(|p| degree[p.2] <= k).count();
        }
        let fact = |n: usize| (1..=n).product::<usize>() as f64;
        let factorial = exps.iter().map(|e| e.iter().map(|&b| fact(b)).product()).collect();
        Tables {
            exps,
            degree,
            slot,
            products,
            products_upto,
            factorial,
        }
    })
}

/// Slot of the exponent `e`, when `|e| ≤ 3`.
pub fn slot(e: [usize; 4]) -> Option<usize> {
    if e.iter().sum::<usize>() > MAX_ORDER {
        return None;
    }
    tables().slot[key(e)]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [f64; LEN],
    order: usize,
}

impl Jet {
    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = [0.0; LEN];
        c[0] = v;
        Self { c, order }
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(0.0, order)
    }

    /// The coordinate function `y_axis` at value `v` (axis 0 is time).
    pub fn var(axis: usize, v: f64, order: usize) -> Self {
        let mut j = Self::constant(v, order);
        if order >= 1 {
            let mut e = [0; 4];
            e[axis] = 1;
            j.c[slot(e).expect("degree one")] = 1.0;
        }
        j
    }

    /// The four coordinate jets at `(t, x)`.
    pub fn coordinates(t: f64, x: [f64; 3]) -> (Jet, [Jet; 3]) {
        (
            Jet::var(0, t, MAX_ORDER),
            [
                Jet::var(1, x[0], MAX_ORDER),
                Jet::var(2, x[1], MAX_ORDER),
                Jet::var(3, x[2], MAX_ORDER),
            ],
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Taylor coefficients in slot order.
    pub fn coefficients(&self) -> &[f64] {
        &self.c[..PREFIX[self.order]]
    }

    /// Builds a jet from Taylor coefficients in slot order.
    pub fn from_coefficients(coeffs: &[f64], order: usize) -> Self {
        let mut c = [0.0; LEN];
        c[..PREFIX[order]].copy_from_slice(&coeffs[..PREFIX[order]]);
        Self { c, order }
    }

    /// `∂^β f(p)`; zero beyond the carried order.
    pub fn partial(&self, e: [usize; 4]) -> f64 {
        match slot(e) {
            Some(i) if tables().degree[i] <= self.order => self.c[i] * tables().factorial[i],
            _ => 0.0,
        }
    }

    /// `(∂ₜf, ∂₁f, ∂₂f, ∂₃f)` at the point.
    pub fn gradient(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|a| {
            let mut e = [0; 4];
            e[a] = 1;
            self.partial(e)
        })
    }

    pub fn hessian(&self) -> [[f64; 4]; 4] {
        let mut h = [[0.0; 4]; 4];
        for (a, row) in h.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                let mut e = [0; 4];
                e[a] += 1;
                e[b] += 1;
                *v = self.partial(e);
            }
        }
        h
    }

    /// Truncates to a lower order.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut c = [0.0; LEN];
        c[..PREFIX[order]].copy_from_slice(&self.c[..PREFIX[order]]);
        Self { c, order }
    }

    pub fn add(&self, o: &Jet) -> Jet {
        let order = self.order.min(o.order);
        let mut c = [0.0; LEN];
        for i in 0..PREFIX[order] {
            c[i] = self.c[i] + o.c[i];
        }
        Jet { c, order }
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        self.add(&o.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut c = self.c;
        for v in c.iter_mut().take(PREFIX[self.order]) {
            *v *= s;
        }
        Jet { c, order: self.order }
    }

    pub fn add_const(&self, v: f64) -> Jet {
        let mut j = *self;
        j.c[0] += v;
        j
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let order = self.order.min(o.order);
        let t = tables();
        let mut c = [0.0; LEN];
        for &(i, j, k) in &t.products[..t.products_upto[order]] {
            c[k] += self.c[i] * o.c[j];
        }
        Jet { c, order }
    }

    /// `g ∘ f` given `g` and its first three derivatives at `f(p)`.
    pub fn compose(&self, g: [f64; 4]) -> Jet {
        let mut delta = *self;
        delta.c[0] = 0.0;
        let mut out = Jet::constant(g[0], self.order);
        let mut power = Jet::constant(1.0, self.order);
        let mut fact = 1.0;
        for (k, gk) in g.iter().enumerate().take(self.order + 1).skip(1) {
            power = power.mul(&delta);
            fact *= k as f64;
            out = out.add(&power.scale(gk / fact));
        }
        out
    }

    pub fn powi(&self, n: i32) -> Jet {
        let a = self.value();
        let nf = n as f64;
        let p = |k: i32| if n - k >= 0 || a != 0.0 { a.powi(n - k) } else { 0.0 };
        self.compose([p(0), nf * p(1), nf * (nf - 1.0) * p(2), nf * (nf - 1.0) * (nf - 2.0) * p(3)])
    }

    pub fn sqrt(&self) -> Jet {
        let a = self.value();
        let s = a.sqrt();
        self.compose([s, 0.5 / s, -0.25 / (a * s), 0.375 / (a * a * s)])
    }

    pub fn recip(&self) -> Jet {
        let a = self.value();
        let r = 1.0 / a;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose([e; 4])
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s])
    }

    /// `∂_axis f`, one order lower.
    pub fn deriv(&self, axis: usize) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let t = tables();
        let order = self.order - 1;
        let mut c = [0.0; LEN];
        for (i, v) in c.iter_mut().enumerate().take(PREFIX[order]) {
            let mut e = t.exps[i];
            e[axis] += 1;
            let j = t.slot[key(e)].expect("degree within range");
            *v = e[axis] as f64 * self.c[j];
        }
        Jet { c, order }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn slot_layout_is_graded() {
        let t = tables();
        for w in t.degree.windows(2) {
            assert!(w[0] <= w[1]);
        }
        assert_eq!(slot([0, 0, 0, 0]), Some(0));
        assert_eq!(slot([1, 1, 1, 1]), None);
    }

    #[test]
    fn product_rule_on_polynomials() {
        let (t, x) = Jet::coordinates(0.5, [1.0, -2.0, 0.25]);
        // f = t² x₁ x₂
        let f = t.mul(&t).mul(&x[0]).mul(&x[1]);
        assert_relative_eq!(f.value(), 0.25 * -2.0);
        assert_relative_eq!(f.partial([1, 0, 0, 0]), 2.0 * 0.5 * -2.0);
        assert_relative_eq!(f.partial([2, 1, 0, 0]), 2.0 * -2.0);
        assert_relative_eq!(f.partial([1, 1, 1, 0]), 2.0 * 0.5);
        assert_eq!(f.partial([0, 0, 0, 1]), 0.0);
    }

    #[test]
    fn elementary_functions_match_closed_forms() {
        let x = Jet::var(1, 0.7, 3);
        let e = x.scale(2.0).exp();
        assert_relative_eq!(e.partial([0, 3, 0, 0]), 8.0 * (1.4f64).exp(), epsilon = 1e-12);
        let s = x.sin();
        assert_relative_eq!(s.partial([0, 2, 0, 0]), -(0.7f64).sin(), epsilon = 1e-14);
        let r = x.recip();
        assert_relative_eq!(r.partial([0, 3, 0, 0]), -6.0 / 0.7f64.powi(4), epsilon = 1e-12);
        let q = x.sqrt();
        assert_relative_eq!(q.partial([0, 2, 0, 0]), -0.25 * 0.7f64.powf(-1.5), epsilon = 1e-13);
        let p = x.add_const(-1.0).powi(6);
        assert_relative_eq!(p.partial([0, 3, 0, 0]), 120.0 * (-0.3f64).powi(3), epsilon = 1e-13);
    }

    #[test]
    fn derivative_lowers_order() {
        let (_, x) = Jet::coordinates(0.0, [0.3, 0.0, 0.0]);
        let f = x[0].powi(3);
        let d = f.deriv(1);
        assert_eq!(d.order(), 2);
        assert_relative_eq!(d.value(), 3.0 * 0.09, epsilon = 1e-15);
        assert_relative_eq!(d.partial([0, 2, 0, 0]), 6.0, epsilon = 1e-14);
    }
}
