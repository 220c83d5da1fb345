//! Exact decision procedures for the symmetry condition on `C` and the null
//! conditions on the quasilinear and semilinear coefficients.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::SpherePoly;
use super::rational::{frac, int, RatText};
use super::{SystemError, WaveSystem};

/// Which coefficient tensor a finding refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TensorId {
    C,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryViolationKind {
    /// `C^{IJK}_{abc} ≠ C^{IJK}_{bac}`
    SwapAB,
    /// `C^{IJK}_{abc} ≠ C^{KJI}_{abc}`
    SwapIK,
}

/// One failing pair of the symmetry condition. Families are one-based,
/// space-time slots zero-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryViolation {
    pub kind: SymmetryViolationKind,
    /// `[I, J, K, a, b, c]`
    pub index: [usize; 6],
    pub value: RatText,
    pub mirrored: RatText,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub symmetric: bool,
    pub violations: Vec<SymmetryViolation>,
}

/// Checks `C^{IJK}_{abc} = C^{IJK}_{bac} = C^{KJI}_{abc}` exactly, reporting
/// every violating pair once.
pub fn check_symmetry(sys: &WaveSystem) -> SymmetryReport {
    let d = sys.families();
    let mut violations = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for a in 0..4 {
                    for b in 0..4 {
                        for c in 0..4 {
                            let v = sys.c(i, j, k, a, b, c);
                            let index = [i + 1, j + 1, k + 1, a, b, c];
                            if a < b {
                                let m = sys.c(i, j, k, b, a, c);
                                if v != m {
                                    violations.push(SymmetryViolation {
                                        kind: SymmetryViolationKind::SwapAB,
                                        index,
                                        value: RatText(v.clone()),
                                        mirrored: RatText(m.clone()),
                                    });
                                }
                            }
                            if i < k {
                                let m = sys.c(k, j, i, a, b, c);
                                if v != m {
                                    violations.push(SymmetryViolation {
                                        kind: SymmetryViolationKind::SwapIK,
                                        index,
                                        value: RatText(v.clone()),
                                        mirrored: RatText(m.clone()),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    SymmetryReport {
        symmetric: violations.is_empty(),
        violations,
    }
}

/// Coefficients of a cubic (`a*16 + b*4 + c`, 64 entries) or quadratic
/// (`a*4 + b`, 16 entries) form in `ξ = (ξ₀, ξ₁, ξ₂, ξ₃)`.
#[derive(Debug, Clone, Copy)]
pub enum ConeForm<'a> {
    Cubic(&'a [BigRational]),
    Quadratic(&'a [BigRational]),
}

impl ConeForm<'_> {
    pub fn tensor(&self) -> TensorId {
        match self {
            ConeForm::Cubic(_) => TensorId::C,
            ConeForm::Quadratic(_) => TensorId::B,
        }
    }
}

/// Substitutes the cone direction `ξ = (sign·c, ω₁, ω₂, ω₃)` into the form.
pub fn restrict_to_cone(form: ConeForm<'_>, speed: &BigRational, sign: i8) -> SpherePoly {
    let xi0 = if sign >= 0 {
        speed.clone()
    } else {
        -speed.clone()
    };
    let slot = |a: usize| -> SpherePoly {
        if a == 0 {
            SpherePoly::constant(xi0.clone())
        } else {
            SpherePoly::variable(a - 1)
        }
    };
    let mut out = SpherePoly::zero();
    match form {
        ConeForm::Cubic(coeffs) => {
            assert_eq!(coeffs.len(), 64, "cubic form needs 64 coefficients");
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        let v = &coeffs[a * 16 + b * 4 + c];
                        if v.is_zero() {
                            continue;
                        }
                        let term = slot(a).mul(&slot(b)).mul(&slot(c)).scale(v);
                        out = out.add(&term);
                    }
                }
            }
        }
        ConeForm::Quadratic(coeffs) => {
            assert_eq!(coeffs.len(), 16, "quadratic form needs 16 coefficients");
            for a in 0..4 {
                for b in 0..4 {
                    let v = &coeffs[a * 4 + b];
                    if v.is_zero() {
                        continue;
                    }
                    out = out.add(&slot(a).mul(&slot(b)).scale(v));
                }
            }
        }
    }
    out
}

/// Outcome of [`vanishes_on_sphere`].
#[derive(Debug, Clone, PartialEq)]
pub enum SphereVerdict {
    /// `p = quotient · (|ω|² − 1)`.
    Vanishes { quotient: SpherePoly },
    /// `p(witness) = value ≠ 0` at an exactly unit rational direction.
    Nonzero {
        witness: [BigRational; 3],
        value: BigRational,
    },
}

impl SphereVerdict {
    pub fn vanishes(&self) -> bool {
        matches!(self, SphereVerdict::Vanishes { .. })
    }
}

/// Fixed witness set of exactly-unit rational directions: the six coordinate
/// directions followed by all sign/permutation images of `(1,2,2)/3` and
/// `(2,3,6)/7`.
pub fn witness_directions() -> &'static [[BigRational; 3]] {
    static DIRS: OnceLock<Vec<[BigRational; 3]>> = OnceLock::new();
    DIRS.get_or_init(|| {
        let mut dirs = Vec::new();
        for axis in 0..3 {
            for s in [1, -1] {
                let mut v = [int(0), int(0), int(0)];
                v[axis] = int(s);
                dirs.push(v);
            }
        }
        for (base, den) in [([1i64, 2, 2], 3i64), ([2, 3, 6], 7)] {
            let mut seen: Vec<[i64; 3]> = Vec::new();
            for perm in [
                [0, 1, 2],
                [0, 2, 1],
                [1, 0, 2],
                [1, 2, 0],
                [2, 0, 1],
                [2, 1, 0],
            ] {
                for signs in 0..8 {
                    let mut v = [0i64; 3];
                    for p in 0..3 {
                        let s = if signs & (1 << p) != 0 { -1 } else { 1 };
                        v[p] = s * base[perm[p]];
                    }
                    if !seen.contains(&v) {
                        seen.push(v);
                        dirs.push([frac(v[0], den), frac(v[1], den), frac(v[2], den)]);
                    }
                }
            }
        }
        dirs
    })
}

/// Decides whether `p` vanishes identically on the unit sphere.
///
/// The decision is made by exact reduction modulo `|ω|² − 1`; the witness
/// search only runs once the remainder is known to be nonzero.
pub fn vanishes_on_sphere(p: &SpherePoly) -> Result<SphereVerdict, SystemError> {
    let degree = p.degree();
    if degree > 3 {
        return Err(SystemError::DegreeTooHigh(degree));
    }
    let (quotient, rem) = p.reduce_mod_sphere();
    if rem.is_zero() {
        return Ok(SphereVerdict::Vanishes { quotient });
    }
    for dir in witness_directions() {
        let value = p.eval(dir);
        if !value.is_zero() {
            return Ok(SphereVerdict::Nonzero {
                witness: dir.clone(),
                value,
            });
        }
    }
    unreachable!("witness set is unisolvent for reduced cubics on the sphere")
}

/// A cone direction on which a nonlinear form fails to vanish.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeWitness {
    pub tensor: TensorId,
    /// One-based `(I, J, K)`.
    pub families: [usize; 3],
    /// `ξ = (±c, ω)` with `ξ₀²/c² − |ω|² = 0`.
    pub xi: [RatText; 4],
    pub residual: RatText,
}

/// Quotient certifying that a restricted form is a multiple of `|ω|² − 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullCertificate {
    pub tensor: TensorId,
    pub families: [usize; 3],
    pub sign: i8,
    pub quotient: SpherePoly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullReport {
    pub symmetric: bool,
    pub null_quasilinear: bool,
    pub null_semilinear: bool,
    pub symmetry_violations: Vec<SymmetryViolation>,
    pub witnesses: Vec<ConeWitness>,
    pub certificates: Vec<NullCertificate>,
}

impl NullReport {
    /// Symmetric and null in both the quasilinear and semilinear parts.
    pub fn accepted(&self) -> bool {
        self.symmetric && self.null_quasilinear && self.null_semilinear
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}

/// Runs the class-wise null check on a single form for one speed, both sheets.
pub fn form_is_null(form: ConeForm<'_>, speed: &BigRational) -> bool {
    [1i8, -1].iter().all(|&sign| {
        vanishes_on_sphere(&restrict_to_cone(form, speed, sign))
            .map(|v| v.vanishes())
            .unwrap_or(false)
    })
}

/// Checks every same-speed pair `(J, K)` of every speed class against every
/// `I` and both cone sheets, for both tensors.
pub fn check_null_condition(sys: &WaveSystem) -> NullReport {
    let symmetry = check_symmetry(sys);
    let classes = sys.speed_classes();
    let d = sys.families();
    let mut witnesses = Vec::new();
    let mut certificates = Vec::new();
    for (members, speed) in classes.partition.iter().zip(&classes.class_speed) {
        for &j in members {
            for &k in members {
                for i in 0..d {
                    let forms = [
                        ConeForm::Cubic(sys.cubic_block(i, j, k)),
                        ConeForm::Quadratic(sys.quadratic_block(i, j, k)),
                    ];
                    for form in forms {
                        for sign in [1i8, -1] {
                            let p = restrict_to_cone(form, speed, sign);
                            let families = [i + 1, j + 1, k + 1];
                            match vanishes_on_sphere(&p).expect("cone restriction has degree ≤ 3") {
                                SphereVerdict::Vanishes { quotient } => {
                                    certificates.push(NullCertificate {
                                        tensor: form.tensor(),
                                        families,
                                        sign,
                                        quotient,
                                    })
                                }
                                SphereVerdict::Nonzero { witness, value } => {
                                    let xi0 = if sign > 0 {
                                        speed.clone()
                                    } else {
                                        -speed.clone()
                                    };
                                    let [w1, w2, w3] = witness;
                                    witnesses.push(ConeWitness {
                                        tensor: form.tensor(),
                                        families,
                                        xi: [RatText(xi0), RatText(w1), RatText(w2), RatText(w3)],
                                        residual: RatText(value),
                                    })
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let null_quasilinear = !witnesses.iter().any(|w| w.tensor == TensorId::C);
    let null_semilinear = !witnesses.iter().any(|w| w.tensor == TensorId::B);
    NullReport {
        symmetric: symmetry.symmetric,
        null_quasilinear,
        null_semilinear,
        symmetry_violations: symmetry.violations,
        witnesses,
        certificates,
    }
}

/// `ξ₀²/c² − |ξ⃗|²` evaluated exactly.
pub fn cone_defect(xi: &[BigRational; 4], speed: &BigRational) -> BigRational {
    let spatial: BigRational = xi[1..].iter().map(|x| x * x).sum();
    &xi[0] * &xi[0] / (speed * speed) - spatial
}

/// `C` symmetrized by averaging over the group generated by `a ↔ b` and
/// `I ↔ K`.
pub fn symmetrize(sys: &WaveSystem) -> WaveSystem {
    let d = sys.families();
    let mut out = sys.clone();
    let quarter = frac(1, 4);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for a in 0..4 {
                    for b in 0..4 {
                        for c in 0..4 {
                            let s = sys.c(i, j, k, a, b, c)
                                + sys.c(i, j, k, b, a, c)
                                + sys.c(k, j, i, a, b, c)
                                + sys.c(k, j, i, b, a, c);
                            out.set_c([i, j, k, a, b, c], s * &quarter);
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::rational::{frac, int};

    fn q0_block(speed: &BigRational) -> Vec<BigRational> {
        let mut b = vec![int(0); 16];
        b[0] = int(1) / (speed * speed);
        for j in 1..4 {
            b[j * 4 + j] = int(-1);
        }
        b
    }

    #[test]
    fn standard_null_form_restricts_to_one_minus_omega_squared() {
        let c = frac(3, 2);
        let p = restrict_to_cone(ConeForm::Quadratic(&q0_block(&c)), &c, 1);
        assert_eq!(p, SpherePoly::sphere().scale(&int(-1)));
    }

    #[test]
    fn time_square_restricts_to_speed_squared() {
        let c = int(2);
        let mut b = vec![int(0); 16];
        b[0] = int(1);
        let p = restrict_to_cone(ConeForm::Quadratic(&b), &c, -1);
        assert_eq!(p, SpherePoly::constant(int(4)));
    }

    #[test]
    fn antisymmetric_form_restricts_to_zero() {
        let mut b = vec![int(0); 16];
        b[1] = int(1);
        b[4] = int(-1);
        b[2 * 4 + 3] = frac(5, 7);
        b[3 * 4 + 2] = frac(-5, 7);
        assert!(restrict_to_cone(ConeForm::Quadratic(&b), &int(1), 1).is_zero());
    }

    #[test]
    fn sphere_kernel_examples() {
        let v = vanishes_on_sphere(&SpherePoly::sphere().scale(&int(-1))).unwrap();
        assert_eq!(
            v,
            SphereVerdict::Vanishes {
                quotient: SpherePoly::constant(int(-1))
            }
        );

        match vanishes_on_sphere(&SpherePoly::constant(int(9))).unwrap() {
            SphereVerdict::Nonzero { witness, value } => {
                assert_eq!(value, int(9));
                let n: BigRational = witness.iter().map(|w| w * w).sum();
                assert_eq!(n, int(1));
            }
            other => panic!("expected a witness, got {other:?}"),
        }

        let p = SpherePoly::variable(0).mul(&SpherePoly::sphere().scale(&int(-1)));
        match vanishes_on_sphere(&p).unwrap() {
            SphereVerdict::Vanishes { quotient } => {
                assert_eq!(quotient, SpherePoly::variable(0).scale(&int(-1)))
            }
            other => panic!("expected vanishing, got {other:?}"),
        }
    }

    #[test]
    fn degree_four_is_rejected() {
        let p = SpherePoly::sphere().mul(&SpherePoly::sphere());
        assert_eq!(
            vanishes_on_sphere(&p).unwrap_err(),
            SystemError::DegreeTooHigh(4)
        );
    }

    #[test]
    fn witness_directions_are_unit_and_numerous() {
        let dirs = witness_directions();
        assert!(dirs.len() >= 25);
        for d in dirs {
            let n: BigRational = d.iter().map(|w| w * w).sum();
            assert_eq!(n, int(1));
        }
    }

    /// The reduced basis `{ω₁^i ω₂^j ω₃^k : k ≤ 1, i+j+k ≤ 3}` has 16 elements;
    /// full rank of its evaluation matrix on the witness set means no nonzero
    /// reduced cubic can vanish on every witness direction.
    #[test]
    fn witness_set_is_unisolvent_for_reduced_cubics() {
        let mut basis = Vec::new();
        for k in 0..=1u8 {
            for i in 0..=3u8 {
                for j in 0..=3u8 {
                    if i + j + k <= 3 {
                        basis.push([i, j, k]);
                    }
                }
            }
        }
        assert_eq!(basis.len(), 16);
        let mut rows: Vec<Vec<BigRational>> = witness_directions()
            .iter()
            .map(|d| {
                basis
                    .iter()
                    .map(|e| SpherePoly::monomial(*e, int(1)).eval(d))
                    .collect()
            })
            .collect();
        // Exact Gaussian elimination.
        let mut rank = 0;
        for col in 0..basis.len() {
            let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank][col].clone();
            for r in 0..rows.len() {
                if r != rank && !rows[r][col].is_zero() {
                    let f = &rows[r][col] / &pivot;
                    for c in 0..basis.len() {
                        let sub = &rows[rank][c] * &f;
                        rows[r][c] -= sub;
                    }
                }
            }
            rank += 1;
        }
        assert_eq!(rank, 16);
    }

    #[test]
    fn cone_defect_of_witness_direction_is_zero() {
        let c = frac(5, 3);
        let xi = [c.clone(), frac(2, 7), frac(3, 7), frac(6, 7)];
        assert!(cone_defect(&xi, &c).is_zero());
    }
}
