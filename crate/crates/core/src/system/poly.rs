//! Polynomials in the unit direction `ω = (ω₁, ω₂, ω₃)` with exact rational
//! coefficients, and their reduction modulo the sphere ideal `|ω|² − 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{self, RatText};

/// Exponent triple of a monomial `ω₁^e₁ ω₂^e₂ ω₃^e₃`.
pub type Exponents = [u8; 3];

/// Sparse polynomial in `(ω₁, ω₂, ω₃)`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpherePoly {
    terms: BTreeMap<Exponents, BigRational>,
}

impl SpherePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(exp: Exponents, coeff: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// `ω_axis` for `axis ∈ 0..3`.
    pub fn variable(axis: usize) -> Self {
        let mut exp = [0u8; 3];
        exp[axis] = 1;
        Self::monomial(exp, BigRational::one())
    }

    /// `ω₁² + ω₂² + ω₃² − 1`.
    pub fn sphere() -> Self {
        let mut p = Self::constant(-BigRational::one());
        for axis in 0..3 {
            let mut exp = [0u8; 3];
            exp[axis] = 2;
            p.add_term(exp, BigRational::one());
        }
        p
    }

    pub fn add_term(&mut self, exp: Exponents, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn coeff(&self, exp: Exponents) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * factor);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[BigRational; 3]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for axis in 0..3 {
                for _ in 0..e[axis] {
                    term *= &point[axis];
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, point: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                rational::to_f64(c)
                    * point[0].powi(e[0] as i32)
                    * point[1].powi(e[1] as i32)
                    * point[2].powi(e[2] as i32)
            })
            .sum()
    }

    /// Division with remainder by `|ω|² − 1`, eliminating `ω₃²`.
    ///
    /// Returns `(q, r)` with `self = q·(|ω|² − 1) + r` where every monomial of
    /// `r` has `ω₃`-degree at most one. The remainder is the canonical
    /// representative of the class of `self` in the coordinate ring of the
    /// sphere, so `self` vanishes on `|ω| = 1` exactly when `r` is zero.
    pub fn reduce_mod_sphere(&self) -> (Self, Self) {
        let mut quotient = Self::zero();
        let mut rem = self.clone();
        loop {
            let Some((&exp, coeff)) = rem.terms.iter().rev().find(|(e, _)| e[2] >= 2) else {
                break;
            };
            let coeff = coeff.clone();
            // c·m·ω₃^k = c·m·ω₃^(k−2)·(|ω|² − 1) + c·m·ω₃^(k−2)·(1 − ω₁² − ω₂²)
            let lowered = [exp[0], exp[1], exp[2] - 2];
            quotient.add_term(lowered, coeff.clone());
            rem.add_term(exp, -coeff.clone());
            rem.add_term(lowered, coeff.clone());
            rem.add_term([lowered[0] + 2, lowered[1], lowered[2]], -coeff.clone());
            rem.add_term([lowered[0], lowered[1] + 2, lowered[2]], -coeff);
        }
        (quotient, rem)
    }
}

impl fmt::Display for SpherePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", rational::to_text(c))?;
            for (axis, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "·ω{}", axis + 1)?,
                    _ => write!(f, "·ω{}^{}", axis + 1, p)?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    exponents: Exponents,
    coeff: RatText,
}

impl Serialize for SpherePoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let records: Vec<TermRecord> = self
            .terms
            .iter()
            .map(|(e, c)| TermRecord {
                exponents: *e,
                coeff: RatText(c.clone()),
            })
            .collect();
        records.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpherePoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(deserializer)?;
        let mut p = Self::zero();
        for r in records {
            p.add_term(r.exponents, r.coeff.0);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::rational::{frac, int};

    #[test]
    fn sphere_polynomial_reduces_to_zero_with_unit_quotient() {
        let (q, r) = SpherePoly::sphere().reduce_mod_sphere();
        assert!(r.is_zero());
        assert_eq!(q, SpherePoly::constant(int(1)));
    }

    #[test]
    fn reduction_identity_holds() {
        // ω₃³ + 2ω₁ω₃² − ω₂ + 1/2
        let mut p = SpherePoly::zero();
        p.add_term([0, 0, 3], int(1));
        p.add_term([1, 0, 2], int(2));
        p.add_term([0, 1, 0], int(-1));
        p.add_term([0, 0, 0], frac(1, 2));
        let (q, r) = p.reduce_mod_sphere();
        assert!(r.terms().all(|(e, _)| e[2] <= 1));
        assert_eq!(q.mul(&SpherePoly::sphere()).add(&r), p);
        assert!(q.degree() <= 1);
    }

    #[test]
    fn exact_evaluation() {
        let p = SpherePoly::sphere();
        let pt = [frac(1, 3), frac(2, 3), frac(2, 3)];
        assert!(p.eval(&pt).is_zero());
    }
}
