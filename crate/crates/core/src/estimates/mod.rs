//! Empirical checks of the weighted decay, energy and product estimates.
//!
//! Each inequality is evaluated on a family of test fields at several
//! quadrature resolutions. The report records every ratio `LHS/RHS`, the
//! empirical constant per resolution and a verdict.

pub mod fields;
pub mod inequalities;
pub mod jet;
pub mod quad;

use std::fmt::Write as _;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::Grid3;
use crate::solver::{Boundary3, DataSlot, InitialData, Profile, Solver3, SolverConfig};
use crate::system::{rational, WaveSystem};
pub use fields::{GridSnapshot, TestField};
pub use inequalities::{Evaluation, NullForm, Resolution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimateError {
    #[error("unknown inequality id `{0}`; valid ids: {list}", list = InequalityId::ALL.map(|i| i.as_str()).join(", "))]
    UnknownId(String),
    #[error("unknown family `{0}`; valid families: standard, {list}", list = Generator::ALL.map(|g| g.as_str()).join(", "))]
    UnknownFamily(String),
    #[error("bad family parameters `{0}`")]
    BadParameters(String),
    #[error("family `{family}` does not apply to `{id}`")]
    NotApplicable { id: String, family: String },
    #[error("form does not satisfy the null condition at speed {0}")]
    NotNull(String),
    #[error("the two speeds must differ, both are {0}")]
    EqualSpeeds(f64),
    #[error("simulated snapshot failed: {0}")]
    Simulation(String),
    #[error("at least one resolution level is required")]
    NoLevels,
}

/// The inequalities under test, keyed by stable id strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InequalityId {
    /// Pointwise `t|w|` decay of zero-data solutions.
    PointwiseDecay,
    /// Weighted space-time `L²` bound.
    SpacetimeL2,
    /// Cubic null forms against the two-term pointwise bound.
    CubicNullForm,
    /// Quadratic null forms against the two-term pointwise bound.
    QuadraticNullForm,
    /// Weighted `L²` bound on `∇h'`.
    LocalEnergy,
    /// `L⁶` bound away from the light cone.
    OffConeL6,
    /// Interaction of waves with different speeds.
    DifferentSpeed,
    /// Same-speed interaction with two derivatives on `u` and none on `v`.
    SameSpeedValue,
    /// Same-speed interaction of first derivatives.
    SameSpeedGradient,
    /// Same-speed interaction with the cone weight.
    SameSpeedConeWeight,
    /// Weighted `L²` bound on products.
    Product,
}

impl InequalityId {
    pub const ALL: [InequalityId; 11] = [
        InequalityId::PointwiseDecay,
        InequalityId::SpacetimeL2,
        InequalityId::CubicNullForm,
        InequalityId::QuadraticNullForm,
        InequalityId::LocalEnergy,
        InequalityId::OffConeL6,
        InequalityId::DifferentSpeed,
        InequalityId::SameSpeedValue,
        InequalityId::SameSpeedGradient,
        InequalityId::SameSpeedConeWeight,
        InequalityId::Product,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            InequalityId::PointwiseDecay => "prop-2.1",
            InequalityId::SpacetimeL2 => "prop-2.2",
            InequalityId::CubicNullForm => "eq-3.1",
            InequalityId::QuadraticNullForm => "eq-3.2",
            InequalityId::LocalEnergy => "eq-3.3",
            InequalityId::OffConeL6 => "eq-3.4",
            InequalityId::DifferentSpeed => "eq-3.5",
            InequalityId::SameSpeedValue => "eq-3.6",
            InequalityId::SameSpeedGradient => "eq-3.7",
            InequalityId::SameSpeedConeWeight => "eq-3.8",
            InequalityId::Product => "eq-3.9",
        }
    }

    pub fn parse(s: &str) -> Result<Self, EstimateError> {
        Self::ALL
            .into_iter()
            .find(|i| i.as_str() == s)
            .ok_or_else(|| EstimateError::UnknownId(s.to_string()))
    }
}

impl std::fmt::Display for InequalityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Generators of test families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    GaussianBump,
    OutgoingPulse,
    IncomingPulse,
    TwoSpeedPair,
    PolynomialWindowed,
    SimulatedRunSnapshot,
}

impl Generator {
    pub const ALL: [Generator; 6] = [
        Generator::GaussianBump,
        Generator::OutgoingPulse,
        Generator::IncomingPulse,
        Generator::TwoSpeedPair,
        Generator::PolynomialWindowed,
        Generator::SimulatedRunSnapshot,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Generator::GaussianBump => "gaussian-bump",
            Generator::OutgoingPulse => "outgoing-pulse",
            Generator::IncomingPulse => "incoming-pulse",
            Generator::TwoSpeedPair => "two-speed-pair",
            Generator::PolynomialWindowed => "polynomial-windowed",
            Generator::SimulatedRunSnapshot => "simulated-run-snapshot",
        }
    }
}

/// `standard`, or a generator with optional parameters: `outgoing-pulse:2`
/// (speed), `incoming-pulse:2`, `two-speed-pair:1,2`.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Standard,
    Generated { generator: Generator, params: Vec<f64> },
}

impl FamilySpec {
    pub fn parse(s: &str) -> Result<Self, EstimateError> {
        let s = s.trim();
        if s == "standard" {
            return Ok(FamilySpec::Standard);
        }
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (s, None),
        };
        let generator = Generator::ALL
            .into_iter()
            .find(|g| g.as_str() == name)
            .ok_or_else(|| EstimateError::UnknownFamily(s.to_string()))?;
        let params = match rest {
            None => Vec::new(),
            Some(r) => r
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| EstimateError::BadParameters(s.to_string()))?,
        };
        let allowed = match generator {
            Generator::OutgoingPulse | Generator::IncomingPulse => 1,
            Generator::TwoSpeedPair => 2,
            _ => 0,
        };
        if params.len() > allowed || params.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(EstimateError::BadParameters(s.to_string()));
        }
        Ok(FamilySpec::Generated { generator, params })
    }

    pub fn name(&self) -> String {
        match self {
            FamilySpec::Standard => "standard".to_string(),
            FamilySpec::Generated { generator, params } if params.is_empty() => generator.as_str().to_string(),
            FamilySpec::Generated { generator, params } => {
                let p: Vec<String> = params.iter().map(|v| v.to_string()).collect();
                format!("{}:{}", generator.as_str(), p.join(","))
            }
        }
    }
}

/// Setup of the simulated snapshots: a small-data run of the scalar
/// `Q₀` equation on `[−L, L]³`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRun {
    pub l: f64,
    /// Points per axis at level 0; level `k` uses `2^k (n0 − 1) + 1`.
    pub n0: usize,
    pub amplitude: f64,
    pub width: f64,
}

impl Default for SnapshotRun {
    fn default() -> Self {
        Self {
            l: 8.0,
            n0: 33,
            amplitude: 0.1,
            width: 2.0,
        }
    }
}

impl SnapshotRun {
    /// Runs to time `t` and keeps one level on either side of it.
    pub fn snapshot(&self, level: usize, t: f64) -> Result<GridSnapshot, EstimateError> {
        let fail = |e: &dyn std::fmt::Display| EstimateError::Simulation(e.to_string());
        let n = ((self.n0 - 1) << level) + 1;
        let grid = Grid3::new(self.l, n).map_err(|e| fail(&e))?;
        let mut sys = WaveSystem::linear(vec![BigRational::one()]).map_err(|e| fail(&e))?;
        sys.set_b([0, 0, 0, 0, 0], BigRational::one());
        for j in 1..4 {
            sys.set_b([0, 0, 0, j, j], -BigRational::one());
        }
        let data = InitialData::new(Profile::Bump { power: 4 }, self.amplitude, self.width, DataSlot::Displacement);
        let cfg = SolverConfig {
            t_end: t,
            ..SolverConfig::default()
        };
        let mut solver =
            Solver3::new(grid, &sys.numeric(), &data, cfg, 1, Boundary3::Fixed, None).map_err(|e| fail(&e))?;
        while !solver.finished() {
            solver.step();
        }
        solver.step();
        let w = solver.window(1).map_err(|e| fail(&e))?;
        let slab = w.families.into_iter().next().expect("one family");
        Ok(GridSnapshot::new(slab))
    }
}

/// A field fixed analytically, or a simulated state depending on the level.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Analytic(TestField),
    Simulated(SnapshotRun),
}

impl FieldSpec {
    fn resolve(&self, level: usize, t: f64) -> Result<TestField, EstimateError> {
        match self {
            FieldSpec::Analytic(f) => Ok(f.clone()),
            FieldSpec::Simulated(run) => Ok(TestField::Snapshot(Arc::new(run.snapshot(level, t)?))),
        }
    }

    fn feature_scale(&self) -> f64 {
        match self {
            FieldSpec::Analytic(f) => f.feature_scale(),
            FieldSpec::Simulated(run) => run.width,
        }
    }
}

impl From<TestField> for FieldSpec {
    fn from(f: TestField) -> Self {
        FieldSpec::Analytic(f)
    }
}

/// What a member evaluates.
#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    PointwiseDecay { source: TestField, probes: Vec<[f64; 3]> },
    SpacetimeL2 { v: FieldSpec },
    NullForm { form: NullForm, speed: BigRational, u: FieldSpec, v: FieldSpec },
    LocalEnergy { h: FieldSpec },
    OffCone { h: FieldSpec, delta: f64 },
    DifferentSpeed { u: FieldSpec, v: FieldSpec, c1: f64, c2: f64 },
    /// `which` indexes the three same-speed bounds.
    SameSpeed { u: FieldSpec, v: FieldSpec, which: usize },
    Product { u: FieldSpec, v: FieldSpec },
}

/// Inner radius excluded from pointwise null-form ratios.
pub const NULL_FORM_R_MIN: f64 = 1.0;

impl Task {
    fn fields(&self) -> Vec<&FieldSpec> {
        match self {
            Task::PointwiseDecay { .. } => Vec::new(),
            Task::SpacetimeL2 { v } => vec![v],
            Task::LocalEnergy { h } | Task::OffCone { h, .. } => vec![h],
            Task::NullForm { u, v, .. }
            | Task::DifferentSpeed { u, v, .. }
            | Task::SameSpeed { u, v, .. }
            | Task::Product { u, v } => vec![u, v],
        }
    }

    fn feature_scale(&self) -> f64 {
        match self {
            Task::PointwiseDecay { source, .. } => source.feature_scale(),
            _ => self.fields().iter().map(|f| f.feature_scale()).fold(f64::INFINITY, f64::min),
        }
    }

    fn is_simulated(&self) -> bool {
        self.fields().iter().any(|f| matches!(f, FieldSpec::Simulated(_)))
    }

    fn evaluate(&self, t: f64, res: &Resolution) -> Result<Evaluation, EstimateError> {
        use inequalities as iq;
        let r = |f: &FieldSpec| f.resolve(res.level, t);
        Ok(match self {
            Task::PointwiseDecay { source, probes } => iq::verify_pointwise_decay(source, t, probes, res),
            Task::SpacetimeL2 { v } => iq::verify_spacetime_l2(&r(v)?, t, res),
            Task::NullForm { form, speed, u, v } => {
                iq::verify_null_form_bound(form, speed, &r(u)?, &r(v)?, t, res, NULL_FORM_R_MIN)?
            }
            Task::LocalEnergy { h } => iq::verify_ks_bounds(&r(h)?, t, &[], res).0,
            Task::OffCone { h, delta } => iq::verify_ks_bounds(&r(h)?, t, &[*delta], res).1.remove(0),
            Task::DifferentSpeed { u, v, c1, c2 } => iq::verify_different_speed(&r(u)?, &r(v)?, *c1, *c2, t, res)?,
            Task::SameSpeed { u, v, which } => {
                let [a, b, c] = iq::verify_same_speed(&r(u)?, &r(v)?, t, res);
                [a, b, c].into_iter().nth(*which).expect("three same-speed bounds")
            }
            Task::Product { u, v } => iq::verify_product_bound(&r(u)?, &r(v)?, t, res),
        })
    }
}

/// One test case.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub label: String,
    /// Members sharing a series form a ladder ordered by `ladder`.
    pub series: String,
    pub t: f64,
    pub ladder: f64,
    pub task: Task,
}

impl Member {
    fn new(label: impl Into<String>, series: impl Into<String>, t: f64, task: Task) -> Self {
        Self {
            label: label.into(),
            series: series.into(),
            t,
            ladder: t,
            task,
        }
    }

    fn ladder(mut self, v: f64) -> Self {
        self.ladder = v;
        self
    }

    pub fn is_simulated(&self) -> bool {
        self.task.is_simulated()
    }

    /// Level-0 panel width: a quarter of the smallest feature, within
    /// `[0.05, 0.5]`.
    pub fn base_width(&self) -> f64 {
        (self.task.feature_scale() / 4.0).clamp(0.05, 0.5)
    }

    pub fn resolution(&self, level: usize) -> Resolution {
        Resolution::new(self.base_width(), level)
    }

    /// Evaluates at each level; the pointwise decay left side does not
    /// depend on the level and is computed once.
    pub fn evaluate(&self, levels: &[usize]) -> Result<Vec<Evaluation>, EstimateError> {
        if let Task::PointwiseDecay { source, probes } = &self.task {
            let (lhs, flagged) = inequalities::pointwise_decay_lhs(source, self.t, probes);
            return Ok(levels
                .iter()
                .map(|&k| {
                    let rhs = inequalities::pointwise_decay_rhs(source, self.t, &self.resolution(k));
                    Evaluation {
                        lhs,
                        rhs,
                        ratio: inequalities::ratio(lhs, rhs),
                        flagged,
                        parts: Vec::new(),
                    }
                })
                .collect());
        }
        levels.iter().map(|&k| self.task.evaluate(self.t, &self.resolution(k))).collect()
    }

    /// Spacing reported for level `k`: the panel width, or the grid spacing
    /// for simulated members.
    pub fn h_scale(&self, level: usize) -> f64 {
        let sim = self.task.fields().into_iter().find_map(|f| match f {
            FieldSpec::Simulated(run) => Some(*run),
            _ => None,
        });
        match sim {
            Some(run) => 2.0 * run.l / (((run.n0 - 1) << level) as f64),
            None => self.resolution(level).h,
        }
    }
}

const RAY: [f64; 3] = [0.6, 0.0, 0.8];

/// Points on a ray from the source's center at the middle of its time
/// window, around the distance the emitted wave has travelled by `t`.
fn decay_probes(source: &TestField, t: f64) -> Vec<[f64; 3]> {
    let tc = source.time_support().map_or(0.0, |(a, b)| 0.5 * (a + b));
    let (center, _) = source.support_box(tc);
    [-1.5, -0.75, 0.0, 0.75, 1.5]
        .into_iter()
        .map(|d| t - tc + d)
        .filter(|rho| *rho >= 0.0)
        .map(|rho| [0, 1, 2].map(|i| center[i] + RAY[i] * rho))
        .collect()
}

fn pulse() -> TestField {
    TestField::outgoing(1.0, 3.0, 1.5, 1.0)
}

fn gaussian(width: f64) -> TestField {
    TestField::Gaussian {
        amp: 1.0,
        width,
        center: [0.0; 3],
    }
}

fn windowed() -> TestField {
    TestField::Windowed { amp: 1.0, width: 2.0 }
}

fn bump_source(velocity: [f64; 3]) -> TestField {
    TestField::Bump {
        amp: 1.0,
        width: 1.5,
        center: [0.0; 3],
        velocity,
        window: Some((2.0, 1.5)),
    }
}

/// Pairs `(label, series, t, u, v)` shared by the single-time bounds.
type Pair = (String, String, f64, FieldSpec, FieldSpec);

fn pair(label: &str, series: &str, t: f64, u: impl Into<FieldSpec>, v: impl Into<FieldSpec>) -> Pair {
    (label.to_string(), series.to_string(), t, u.into(), v.into())
}

fn ladder_pairs(name: &str, ts: &[f64], u: &TestField, v: &TestField) -> Vec<Pair> {
    ts.iter()
        .map(|&t| pair(&format!("{name}@t={t}"), name, t, u.clone(), v.clone()))
        .collect()
}

/// Outgoing pulses of speeds `c1` and `c2` that coincide at each time of
/// the ladder: the second pulse is launched from `3 + (c1 − c2)t`.
fn catching_pairs(name: &str, c1: f64, c2: f64) -> Vec<Pair> {
    [4.0, 8.0, 16.0]
        .into_iter()
        .map(|t| {
            let u = TestField::outgoing(1.0, 3.0, 1.5, c1);
            let v = TestField::outgoing(1.0, 3.0 + (c1 - c2) * t, 1.5, c2);
            pair(&format!("{name}@t={t}"), name, t, u, v)
        })
        .collect()
}

/// Deltas for the off-cone `L⁶` bound.
pub const OFF_CONE_DELTAS: [f64; 3] = [0.1, 0.2, 0.4];

/// Members for the single-time bounds built from `(u, v)` pairs; `speed`
/// is the null-form speed and `speeds` the pair used by the
/// different-speed bound.
fn pair_members(id: InequalityId, pairs: Vec<Pair>, speed: &BigRational, speeds: (f64, f64)) -> Vec<Member> {
    let mut out = Vec::new();
    for (label, series, t, u, v) in pairs {
        match id {
            InequalityId::CubicNullForm | InequalityId::QuadraticNullForm => {
                let form = if id == InequalityId::CubicNullForm {
                    NullForm::q0_of_derivative(speed)
                } else {
                    NullForm::q0(speed)
                };
                out.push(Member::new(label, series, t, Task::NullForm { form, speed: speed.clone(), u, v }));
            }
            InequalityId::LocalEnergy => out.push(Member::new(label, series, t, Task::LocalEnergy { h: u })),
            InequalityId::OffConeL6 => {
                for delta in OFF_CONE_DELTAS {
                    out.push(Member::new(
                        format!("{label}/delta={delta}"),
                        format!("{series}/delta={delta}"),
                        t,
                        Task::OffCone { h: u.clone(), delta },
                    ));
                }
            }
            InequalityId::DifferentSpeed => {
                let (c1, c2) = speeds;
                out.push(Member::new(label, series, t, Task::DifferentSpeed { u, v, c1, c2 }));
            }
            InequalityId::SameSpeedValue | InequalityId::SameSpeedGradient | InequalityId::SameSpeedConeWeight => {
                let which = match id {
                    InequalityId::SameSpeedValue => 0,
                    InequalityId::SameSpeedGradient => 1,
                    _ => 2,
                };
                out.push(Member::new(label, series, t, Task::SameSpeed { u, v, which }));
            }
            InequalityId::Product => out.push(Member::new(label, series, t, Task::Product { u, v })),
            InequalityId::PointwiseDecay | InequalityId::SpacetimeL2 => {}
        }
    }
    out
}

/// The standard family for `id`.
pub fn standard_family(id: InequalityId) -> Vec<Member> {
    let one = BigRational::one();
    let p = pulse();
    match id {
        InequalityId::PointwiseDecay => {
            let sources = [
                ("bump-source", bump_source([0.0; 3])),
                ("translated-source", bump_source([0.0; 3]).translated([0.0, 0.0, 3.0])),
                ("moving-source", bump_source([0.5, 0.0, 0.0])),
            ];
            let mut out = Vec::new();
            for (name, f) in sources {
                for t in [4.0, 8.0] {
                    out.push(Member::new(
                        format!("{name}@t={t}"),
                        name,
                        t,
                        Task::PointwiseDecay {
                            source: f.clone(),
                            probes: decay_probes(&f, t),
                        },
                    ));
                }
            }
            out
        }
        InequalityId::SpacetimeL2 => {
            let moving = TestField::Bump {
                amp: 1.0,
                width: 1.5,
                center: [0.0; 3],
                velocity: [0.5, 0.0, 0.0],
                window: None,
            };
            let mut out = Vec::new();
            for (name, v) in [("free-pulse", p.clone()), ("moving-bump", moving)] {
                for t in [5.0, 10.0, 20.0] {
                    out.push(Member::new(
                        format!("{name}@t={t}"),
                        name,
                        t,
                        Task::SpacetimeL2 { v: v.clone().into() },
                    ));
                }
            }
            out
        }
        InequalityId::CubicNullForm | InequalityId::QuadraticNullForm => {
            let incoming = TestField::incoming(1.0, 20.0, 1.5, 1.0);
            let mut pairs = ladder_pairs("outgoing-pulse", &[2.0, 4.0, 8.0, 16.0], &p, &p);
            pairs.push(pair("windowed@t=1", "windowed", 1.0, windowed(), windowed()));
            pairs.extend(ladder_pairs("incoming-pulse", &[2.0, 4.0, 8.0], &incoming, &incoming));
            pair_members(id, pairs, &one, (1.0, 2.0))
        }
        InequalityId::LocalEnergy => {
            let incoming = TestField::incoming(1.0, 20.0, 1.5, 1.0);
            let g = gaussian(1.0);
            let mut pairs = ladder_pairs("outgoing-pulse", &[2.0, 4.0, 8.0, 16.0], &p, &p);
            pairs.extend(ladder_pairs("static-gaussian", &[0.0, 4.0], &g, &g));
            pairs.push(pair("windowed@t=1", "windowed", 1.0, windowed(), windowed()));
            pairs.extend(ladder_pairs("incoming-pulse", &[2.0, 4.0, 8.0], &incoming, &incoming));
            pair_members(id, pairs, &one, (1.0, 2.0))
        }
        InequalityId::OffConeL6 => {
            pair_members(id, ladder_pairs("outgoing-pulse", &[2.0, 4.0, 8.0, 16.0], &p, &p), &one, (1.0, 2.0))
        }
        InequalityId::DifferentSpeed => {
            let mut out = pair_members(id, catching_pairs("two-speed-pair", 1.0, 2.0), &one, (1.0, 2.0));
            out.extend(pair_members(
                id,
                catching_pairs("two-speed-pair-swapped", 2.0, 1.0),
                &one,
                (2.0, 1.0),
            ));
            out
        }
        InequalityId::SameSpeedValue | InequalityId::SameSpeedGradient | InequalityId::SameSpeedConeWeight => {
            let mut pairs = ladder_pairs("outgoing-pulse", &[2.0, 4.0, 8.0, 16.0], &p, &p);
            pairs.extend(ladder_pairs("pulse-on-static-gaussian", &[2.0, 4.0, 8.0], &p, &gaussian(1.0)));
            pair_members(id, pairs, &one, (1.0, 2.0))
        }
        InequalityId::Product => {
            let g = gaussian(1.0);
            let mut pairs = vec![pair("gaussian-pair@t=0", "gaussian-pair", 0.0, g.clone(), g)];
            let mut out = Vec::new();
            for radius in [3.0, 6.0, 12.0] {
                let u = TestField::Shell {
                    amp: 1.0,
                    radius,
                    width: 2.0,
                };
                let v = TestField::Shell {
                    amp: 1.0,
                    radius,
                    width: 1.0,
                };
                out.push(
                    Member::new(
                        format!("thin-shell@R={radius}"),
                        "thin-shell",
                        0.0,
                        Task::Product { u: u.into(), v: v.into() },
                    )
                    .ladder(radius),
                );
            }
            pairs.extend(ladder_pairs("outgoing-pulse", &[2.0, 4.0, 8.0], &p, &p));
            let mut all = pair_members(id, pairs, &one, (1.0, 2.0));
            all.extend(out);
            all
        }
    }
}

/// Members from a generator, or an error when the generator does not apply.
pub fn generated_family(id: InequalityId, generator: Generator, params: &[f64]) -> Result<Vec<Member>, EstimateError> {
    let not_applicable = || EstimateError::NotApplicable {
        id: id.to_string(),
        family: generator.as_str().to_string(),
    };
    let c = params.first().copied().unwrap_or(1.0);
    let speed_q = rational::from_f64(c).map_err(|_| EstimateError::BadParameters(c.to_string()))?;
    let (u, v, c1, c2, ts): (TestField, TestField, f64, f64, Vec<f64>) = match generator {
        Generator::GaussianBump => (gaussian(1.0), gaussian(1.5), 1.0, 2.0, vec![0.0, 2.0, 4.0]),
        Generator::OutgoingPulse => (
            TestField::outgoing(1.0, 3.0, 1.5, c),
            TestField::outgoing(1.0, 3.0, 1.5, c),
            c,
            2.0 * c,
            vec![2.0, 4.0, 8.0],
        ),
        Generator::IncomingPulse => (
            TestField::incoming(1.0, 20.0, 1.5, c),
            TestField::incoming(1.0, 20.0, 1.5, c),
            c,
            2.0 * c,
            vec![2.0, 4.0, 8.0],
        ),
        Generator::TwoSpeedPair => {
            let c1 = params.first().copied().unwrap_or(1.0);
            let c2 = params.get(1).copied().unwrap_or(2.0);
            (
                TestField::outgoing(1.0, 3.0, 1.5, c1),
                TestField::outgoing(1.0, 3.0, 1.5, c2),
                c1,
                c2,
                vec![4.0, 8.0, 16.0],
            )
        }
        Generator::PolynomialWindowed => (windowed(), windowed(), 1.0, 2.0, vec![0.0, 1.0, 2.0]),
        Generator::SimulatedRunSnapshot => {
            if matches!(id, InequalityId::PointwiseDecay | InequalityId::SpacetimeL2) {
                return Err(not_applicable());
            }
            let run = SnapshotRun::default();
            let mut out = Vec::new();
            for t in [1.0, 2.0] {
                let sim = FieldSpec::Simulated(run);
                let pairs = vec![pair(&format!("q0-run@t={t}"), "q0-run", t, sim.clone(), sim)];
                if id == InequalityId::DifferentSpeed {
                    return Err(not_applicable());
                }
                out.extend(pair_members(id, pairs, &BigRational::one(), (1.0, 2.0)));
            }
            return Ok(out);
        }
    };
    let name = generator.as_str();
    Ok(match id {
        InequalityId::PointwiseDecay => {
            let source = u.time_windowed(2.0, 1.5);
            [4.0, 8.0]
                .into_iter()
                .map(|t| {
                    Member::new(
                        format!("{name}@t={t}"),
                        name,
                        t,
                        Task::PointwiseDecay {
                            source: source.clone(),
                            probes: decay_probes(&source, t),
                        },
                    )
                })
                .collect()
        }
        InequalityId::SpacetimeL2 => [5.0, 10.0]
            .into_iter()
            .map(|t| Member::new(format!("{name}@t={t}"), name, t, Task::SpacetimeL2 { v: u.clone().into() }))
            .collect(),
        InequalityId::DifferentSpeed if c1 == c2 => return Err(EstimateError::EqualSpeeds(c1)),
        InequalityId::DifferentSpeed if generator == Generator::TwoSpeedPair => {
            pair_members(id, catching_pairs(name, c1, c2), &speed_q, (c1, c2))
        }
        _ => pair_members(id, ladder_pairs(name, &ts, &u, &v), &speed_q, (c1, c2)),
    })
}

/// Members of `family` for `id`.
pub fn family_members(id: InequalityId, family: &FamilySpec) -> Result<Vec<Member>, EstimateError> {
    match family {
        FamilySpec::Standard => Ok(standard_family(id)),
        FamilySpec::Generated { generator, params } => generated_family(id, *generator, params),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Bounded,
    Growing,
    Violated,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Bounded => "bounded",
            Verdict::Growing => "growing",
            Verdict::Violated => "violated",
        })
    }
}

/// Largest relative change of the empirical constant between consecutive
/// levels that still counts as converged.
pub const REFINEMENT_TOLERANCE: f64 = 0.10;
/// Growth of the constant between consecutive levels treated as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1.5;
/// Growth of the ratio from one rung of a ladder to the next treated as
/// unbounded.
pub const LADDER_GROWTH: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelResult {
    pub level: usize,
    pub h_scale: f64,
    pub evaluation: Evaluation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberReport {
    pub label: String,
    pub series: String,
    pub t: f64,
    pub ladder: f64,
    pub levels: Vec<LevelResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub id: String,
    pub family: String,
    pub levels: Vec<usize>,
    pub members: Vec<MemberReport>,
    /// Largest ratio at each level.
    pub trend: Vec<f64>,
    /// Largest ratio at the finest level.
    pub c_emp: f64,
    /// Relative change of the largest ratio between the last two levels.
    pub refinement_change: f64,
    /// Largest ratio of consecutive rungs over all ladders, finest level.
    pub ladder_growth: f64,
    pub any_flagged: bool,
    pub verdict: Verdict,
}

impl EstimateReport {
    fn assemble(id: InequalityId, family: String, levels: &[usize], members: Vec<MemberReport>) -> Self {
        let trend: Vec<f64> = (0..levels.len())
            .map(|k| {
                members
                    .iter()
                    .map(|m| m.levels[k].evaluation.ratio)
                    .fold(0.0, |a: f64, r| if r.is_nan() || a.is_nan() { f64::NAN } else { a.max(r) })
            })
            .collect();
        let c_emp = *trend.last().expect("at least one level");
        let refinement_change = match trend.len() {
            0 | 1 => 0.0,
            n => relative_change(trend[n - 2], trend[n - 1]),
        };
        let ladder_growth = ladder_growth(&members);
        let diverging = trend.iter().any(|r| !r.is_finite())
            || trend.windows(2).any(|w| w[0] > 0.0 && w[1] / w[0] > DIVERGENCE_FACTOR);
        let verdict = if diverging {
            Verdict::Violated
        } else if refinement_change > REFINEMENT_TOLERANCE || ladder_growth > LADDER_GROWTH {
            Verdict::Growing
        } else {
            Verdict::Bounded
        };
        let any_flagged = members.iter().any(|m| m.levels.iter().any(|l| l.evaluation.flagged));
        Self {
            id: id.to_string(),
            family,
            levels: levels.to_vec(),
            members,
            trend,
            c_emp,
            refinement_change,
            ladder_growth,
            any_flagged,
            verdict,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub const CSV_HEADER: &'static str = "id,family,member,series,t,level,h_scale,lhs,rhs,ratio,flagged";

    /// One row per member and level, without the header.
    pub fn csv_rows(&self) -> String {
        let mut s = String::new();
        for m in &self.members {
            for l in &m.levels {
                let e = &l.evaluation;
                writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    self.id, self.family, m.label, m.series, m.t, l.level, l.h_scale, e.lhs, e.rhs, e.ratio, e.flagged
                )
                .expect("writing to a string");
            }
        }
        s
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}", Self::CSV_HEADER, self.csv_rows())
    }
}

fn relative_change(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (b - a).abs() / a.abs().max(b.abs())
    }
}

fn ladder_growth(members: &[MemberReport]) -> f64 {
    let mut series: Vec<&str> = members.iter().map(|m| m.series.as_str()).collect();
    series.dedup();
    let mut worst: f64 = 0.0;
    for s in series {
        let mut rungs: Vec<(f64, f64)> = members
            .iter()
            .filter(|m| m.series == s)
            .map(|m| (m.ladder, m.levels.last().expect("at least one level").evaluation.ratio))
            .collect();
        rungs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in rungs.windows(2) {
            if w[0].1 > 0.0 {
                worst = worst.max(w[1].1 / w[0].1);
            }
        }
    }
    worst
}

/// Evaluates every member of `family` for `id` at `levels`, members in
/// parallel, results in family order.
pub fn verify(id: InequalityId, family: &FamilySpec, levels: &[usize]) -> Result<EstimateReport, EstimateError> {
    if levels.is_empty() {
        return Err(EstimateError::NoLevels);
    }
    let members = family_members(id, family)?;
    let reports = members
        .par_iter()
        .map(|m| {
            let evals = m.evaluate(levels)?;
            Ok(MemberReport {
                label: m.label.clone(),
                series: m.series.clone(),
                t: m.t,
                ladder: m.ladder,
                levels: levels
                    .iter()
                    .zip(evals)
                    .map(|(&level, evaluation)| LevelResult {
                        level,
                        h_scale: m.h_scale(level),
                        evaluation,
                    })
                    .collect(),
            })
        })
        .collect::<Result<Vec<_>, EstimateError>>()?;
    Ok(EstimateReport::assemble(id, family.name(), levels, reports))
}

/// Reports for every id, in catalogue order. Ids the family does not apply
/// to are skipped when `family` is a generator.
pub fn verify_all(family: &FamilySpec, levels: &[usize]) -> Result<Vec<EstimateReport>, EstimateError> {
    let mut out = Vec::new();
    for id in InequalityId::ALL {
        match verify(id, family, levels) {
            Ok(r) => out.push(r),
            Err(EstimateError::NotApplicable { .. }) if *family != FamilySpec::Standard => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Sup ratio of the quadratic bound for `(∂ₜu)²` on the outgoing pulse at
/// each time; the form is not null, so the ratio is not bounded in `t`.
pub fn time_derivative_square_ratios(ts: &[f64], level: usize) -> Vec<f64> {
    let p = pulse();
    let res = Resolution::new((p.feature_scale() / 4.0).clamp(0.05, 0.5), level);
    ts.iter()
        .map(|&t| {
            inequalities::null_form_ratio(&NullForm::time_derivatives(), 1.0, &p, &p, t, &res, NULL_FORM_R_MIN).ratio
        })
        .collect()
}

/// Rejection of `(∂ₜu)²` by the null-form bound's precondition.
pub fn time_derivative_square_rejection() -> Result<Evaluation, EstimateError> {
    let p = pulse();
    let res = Resolution::new(0.375, 0);
    inequalities::verify_null_form_bound(
        &NullForm::time_derivatives(),
        &BigRational::one(),
        &p,
        &p,
        4.0,
        &res,
        NULL_FORM_R_MIN,
    )
}
