//! Coefficient tensors of a multi-speed quasilinear wave system and the exact
//! decision procedures for its symmetry and null conditions.
//!
//! A system with `D` wave families reads
//!
//! ```text
//! ∂ₜ²u^I − c_I² Δu^I = C^{IJK}_{abc} ∂_c u^J ∂_a∂_b u^K + B^{IJK}_{ab} ∂_a u^J ∂_b u^K
//! ```
//!
//! with `a, b, c ∈ 0..4` (index 0 is time). All coefficients are kept as exact
//! rationals so that the null and symmetry verdicts are algebraic identities
//! rather than tolerance checks.

mod io;
mod null;
mod poly;
pub mod rational;

pub use io::{parse_system, system_to_json, SystemFile};
pub use null::{
    check_null_condition, check_symmetry, cone_defect, form_is_null, restrict_to_cone, symmetrize,
    vanishes_on_sphere, witness_directions, ConeForm, ConeWitness, NullCertificate, NullReport, SphereVerdict, SymmetryReport,
    SymmetryViolation, SymmetryViolationKind, TensorId,
};
pub use poly::SpherePoly;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Errors raised while building or querying a [`WaveSystem`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error("system must have at least one wave family")]
    NoFamilies,
    #[error("expected {expected} speeds, found {found}")]
    SpeedCount { expected: usize, found: usize },
    #[error("wave speed c_{index} = {value} is not strictly positive")]
    NonPositiveSpeed { index: usize, value: String },
    #[error("tensor {tensor} has {found} entries, expected {expected}")]
    TensorShape {
        tensor: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("index out of range in {tensor} entry: {detail}")]
    IndexOutOfRange { tensor: &'static str, detail: String },
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("non-finite floating point coefficient")]
    NonFinite,
    #[error("polynomial of degree {0} exceeds the supported degree 3")]
    DegreeTooHigh(usize),
    #[error("duplicate {tensor} entry {detail}")]
    Duplicate { tensor: &'static str, detail: String },
    #[error("malformed system file at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// Number of space-time indices `a ∈ {0,1,2,3}`.
pub const SPACETIME: usize = 4;

/// The coefficient data of a quasilinear system.
///
/// Indices are zero-based internally: families `I, J, K ∈ 0..D` and
/// space-time slots `a, b, c ∈ 0..4`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveSystem {
    speeds: Vec<BigRational>,
    c: Vec<BigRational>,
    b: Vec<BigRational>,
}

impl WaveSystem {
    /// A system with the given speeds and all coefficients zero.
    pub fn linear(speeds: Vec<BigRational>) -> Result<Self, SystemError> {
        let d = speeds.len();
        Self::new(
            speeds,
            vec![BigRational::zero(); d * d * d * 64],
            vec![BigRational::zero(); d * d * d * 16],
        )
    }

    pub fn new(
        speeds: Vec<BigRational>,
        c: Vec<BigRational>,
        b: Vec<BigRational>,
    ) -> Result<Self, SystemError> {
        let d = speeds.len();
        if d == 0 {
            return Err(SystemError::NoFamilies);
        }
        for (index, s) in speeds.iter().enumerate() {
            if !s.is_positive() {
                return Err(SystemError::NonPositiveSpeed {
                    index: index + 1,
                    value: s.to_string(),
                });
            }
        }
        let (nc, nb) = (d * d * d * 64, d * d * d * 16);
        if c.len() != nc {
            return Err(SystemError::TensorShape {
                tensor: "C",
                expected: nc,
                found: c.len(),
            });
        }
        if b.len() != nb {
            return Err(SystemError::TensorShape {
                tensor: "B",
                expected: nb,
                found: b.len(),
            });
        }
        Ok(Self { speeds, c, b })
    }

    /// Number of wave families `D`.
    pub fn families(&self) -> usize {
        self.speeds.len()
    }

    pub fn speeds(&self) -> &[BigRational] {
        &self.speeds
    }

    fn c_index(&self, i: usize, j: usize, k: usize, a: usize, b: usize, c: usize) -> usize {
        let d = self.families();
        ((((i * d + j) * d + k) * 4 + a) * 4 + b) * 4 + c
    }

    fn b_index(&self, i: usize, j: usize, k: usize, a: usize, b: usize) -> usize {
        let d = self.families();
        (((i * d + j) * d + k) * 4 + a) * 4 + b
    }

    /// `C^{IJK}_{abc}`.
    pub fn c(&self, i: usize, j: usize, k: usize, a: usize, b: usize, c: usize) -> &BigRational {
        &self.c[self.c_index(i, j, k, a, b, c)]
    }

    /// `B^{IJK}_{ab}`.
    pub fn b(&self, i: usize, j: usize, k: usize, a: usize, b: usize) -> &BigRational {
        &self.b[self.b_index(i, j, k, a, b)]
    }

    pub fn set_c(&mut self, idx: [usize; 6], value: BigRational) {
        let [i, j, k, a, b, c] = idx;
        let n = self.c_index(i, j, k, a, b, c);
        self.c[n] = value;
    }

    pub fn set_b(&mut self, idx: [usize; 5], value: BigRational) {
        let [i, j, k, a, b] = idx;
        let n = self.b_index(i, j, k, a, b);
        self.b[n] = value;
    }

    /// The 64 coefficients of the cubic form `ξ ↦ C^{IJK}_{abc} ξ_a ξ_b ξ_c`,
    /// laid out as `a*16 + b*4 + c`.
    pub fn cubic_block(&self, i: usize, j: usize, k: usize) -> &[BigRational] {
        let start = self.c_index(i, j, k, 0, 0, 0);
        &self.c[start..start + 64]
    }

    /// The 16 coefficients of the quadratic form `ξ ↦ B^{IJK}_{ab} ξ_a ξ_b`,
    /// laid out as `a*4 + b`.
    pub fn quadratic_block(&self, i: usize, j: usize, k: usize) -> &[BigRational] {
        let start = self.b_index(i, j, k, 0, 0);
        &self.b[start..start + 16]
    }

    /// Multiplies every nonlinear coefficient by `factor`.
    pub fn scaled(&self, factor: &BigRational) -> Self {
        Self {
            speeds: self.speeds.clone(),
            c: self.c.iter().map(|x| x * factor).collect(),
            b: self.b.iter().map(|x| x * factor).collect(),
        }
    }

    /// Relabels the families: new family `p` is old family `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let d = self.families();
        assert_eq!(perm.len(), d, "permutation length must equal D");
        let mut out = Self::linear(perm.iter().map(|&p| self.speeds[p].clone()).collect())
            .expect("permuting a valid system keeps it valid");
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for a in 0..4 {
                        for b in 0..4 {
                            let v = self.b(perm[i], perm[j], perm[k], a, b).clone();
                            out.set_b([i, j, k, a, b], v);
                            for c in 0..4 {
                                let v = self.c(perm[i], perm[j], perm[k], a, b, c).clone();
                                out.set_c([i, j, k, a, b, c], v);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Partition of the families by exact equality of their speeds.
    pub fn speed_classes(&self) -> SpeedClasses {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_speed: Vec<BigRational> = Vec::new();
        for (i, s) in self.speeds.iter().enumerate() {
            match class_speed.iter().position(|cs| cs == s) {
                Some(p) => classes[p].push(i),
                None => {
                    classes.push(vec![i]);
                    class_speed.push(s.clone());
                }
            }
        }
        SpeedClasses {
            partition: classes,
            class_speed,
        }
    }

    /// Floating point view used by the time integrators.
    pub fn numeric(&self) -> NumericSystem {
        let d = self.families();
        let mut c_terms = Vec::new();
        let mut b_terms = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for a in 0..4 {
                        for b in 0..4 {
                            let v = self.b(i, j, k, a, b);
                            if !v.is_zero() {
                                b_terms.push(SemilinearTerm {
                                    i,
                                    j,
                                    k,
                                    a,
                                    b,
                                    value: rational::to_f64(v),
                                });
                            }
                            for c in 0..4 {
                                let v = self.c(i, j, k, a, b, c);
                                if !v.is_zero() {
                                    c_terms.push(QuasilinearTerm {
                                        i,
                                        j,
                                        k,
                                        a,
                                        b,
                                        c,
                                        value: rational::to_f64(v),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        NumericSystem {
            speeds: self.speeds.iter().map(rational::to_f64).collect(),
            quasilinear: c_terms,
            semilinear: b_terms,
        }
    }
}

/// Families grouped by equal propagation speed.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedClasses {
    /// Zero-based family indices of each class, in order of first appearance.
    pub partition: Vec<Vec<usize>>,
    pub class_speed: Vec<BigRational>,
}

impl SpeedClasses {
    pub fn class_of(&self, family: usize) -> Option<usize> {
        self.partition.iter().position(|p| p.contains(&family))
    }
}

/// One nonzero `C^{IJK}_{abc}` entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasilinearTerm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub value: f64,
}

/// One nonzero `B^{IJK}_{ab}` entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemilinearTerm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub a: usize,
    pub b: usize,
    pub value: f64,
}

/// Sparse `f64` image of a [`WaveSystem`].
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSystem {
    pub speeds: Vec<f64>,
    pub quasilinear: Vec<QuasilinearTerm>,
    pub semilinear: Vec<SemilinearTerm>,
}

impl NumericSystem {
    pub fn families(&self) -> usize {
        self.speeds.len()
    }

    pub fn max_speed(&self) -> f64 {
        self.speeds.iter().cloned().fold(0.0, f64::max)
    }

    pub fn is_linear(&self) -> bool {
        self.quasilinear.is_empty() && self.semilinear.is_empty()
    }

    /// Right-hand side `N^I` at one point from first derivatives
    /// `du[J][a] = ∂_a u^J` and second derivatives `ddu[K][a][b]`.
    pub fn nonlinearity(&self, du: &[[f64; 4]], ddu: &[[[f64; 4]; 4]], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for t in &self.semilinear {
            out[t.i] += t.value * du[t.j][t.a] * du[t.k][t.b];
        }
        for t in &self.quasilinear {
            out[t.i] += t.value * du[t.j][t.c] * ddu[t.k][t.a][t.b];
        }
    }

    /// Semilinear part only, `F^I = B^{IJK}_{ab} ∂_a u^J ∂_b u^K`.
    pub fn semilinear_part(&self, du: &[[f64; 4]], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for t in &self.semilinear {
            out[t.i] += t.value * du[t.j][t.a] * du[t.k][t.b];
        }
    }

    /// Metric perturbation `γ^{IK,ab} = −Σ_J Σ_c C^{IJK}_{abc} ∂_c u^J`,
    /// written into `gamma[(I*D + K)*16 + a*4 + b]`.
    pub fn metric_perturbation(&self, du: &[[f64; 4]], gamma: &mut [f64]) {
        let d = self.families();
        gamma.iter_mut().for_each(|g| *g = 0.0);
        for t in &self.quasilinear {
            gamma[(t.i * d + t.k) * 16 + t.a * 4 + t.b] -= t.value * du[t.j][t.c];
        }
    }

    /// Smallness threshold `½ min_I min(1, c_I²)`.
    pub fn smallness_threshold(&self) -> f64 {
        0.5 * self
            .speeds
            .iter()
            .map(|c| (c * c).min(1.0))
            .fold(f64::INFINITY, f64::min)
    }
}

