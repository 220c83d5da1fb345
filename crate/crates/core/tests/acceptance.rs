//! The ten acceptance criteria, one pass/fail line each. Exits nonzero when
//! any criterion fails.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use nullwave::diagnostics::{positivity_margin_point, DiagnosticsSpec};
use nullwave::estimates::{self, EstimateError, FamilySpec, InequalityId, Verdict};
use nullwave::grid::kirchhoff::{kirchhoff_solve, KirchhoffOptions};
use nullwave::grid::{Grid3, Slab, VectorField};
use nullwave::runner::{run_radial, run_rung, GridSpec, RunOutcome, ScenarioConfig};
use nullwave::solver::{
    Boundary3, Forcing3, InitialData, RadialBoundary, RadialForcing, RadialForm, RunStatus, Solver3, SolverConfig,
};
use nullwave::system::rational::{frac, int};
use nullwave::system::{check_null_condition, check_symmetry, symmetrize, WaveSystem};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn scenario(name: &str) -> (ScenarioConfig, WaveSystem) {
    let path: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    let (cfg, base) = ScenarioConfig::load(&path).expect("scenario loads");
    let (sys, _) = cfg.load_system(&base).expect("system loads");
    (cfg, sys)
}

fn q0_system(speed: &BigRational, b00: BigRational) -> WaveSystem {
    let mut sys = WaveSystem::linear(vec![speed.clone()]).unwrap();
    sys.set_b([0, 0, 0, 0, 0], b00);
    for a in 1..4 {
        sys.set_b([0, 0, 0, a, a], int(-1));
    }
    sys
}

fn null_decisions() -> Outcome {
    let start = Instant::now();
    let speeds = [int(1), int(2), frac(1, 2), frac(3, 2)];
    let mut failures = Vec::new();
    for c in &speeds {
        let b00 = int(1) / (c * c);
        if !check_null_condition(&q0_system(c, b00.clone())).accepted() {
            failures.push(format!("Q0 rejected at its own speed {c}"));
        }
        for other in speeds.iter().filter(|s| *s != c) {
            let r = check_null_condition(&q0_system(other, b00.clone()));
            if r.accepted() || r.witnesses.is_empty() {
                failures.push(format!("Q0 for speed {c} accepted at speed {other}"));
            }
        }
        let mut only_time = WaveSystem::linear(vec![c.clone()]).unwrap();
        only_time.set_b([0, 0, 0, 0, 0], int(1));
        let r = check_null_condition(&only_time);
        if r.accepted() || r.witnesses.is_empty() {
            failures.push(format!("B00-only system accepted at speed {c}"));
        }
        let mut anti = WaveSystem::linear(vec![c.clone()]).unwrap();
        anti.set_b([0, 0, 0, 0, 1], int(1));
        anti.set_b([0, 0, 0, 1, 0], int(-1));
        anti.set_b([0, 0, 0, 2, 3], frac(5, 3));
        anti.set_b([0, 0, 0, 3, 2], frac(-5, 3));
        if !check_null_condition(&anti).accepted() {
            failures.push(format!("antisymmetric form rejected at speed {c}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures.is_empty() && secs < 1.0,
        format!("{} wrong verdicts, {secs:.3} s {}", failures.len(), failures.join("; ")),
    )
}

fn symmetry_corpus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e756c6c);
    let mut wrong = 0;
    for case in 0..50 {
        let d = rng.gen_range(1..=3);
        let mut sys = WaveSystem::linear(vec![int(1); d]).unwrap();
        for _ in 0..8 {
            let idx = [
                rng.gen_range(0..d),
                rng.gen_range(0..d),
                rng.gen_range(0..d),
                rng.gen_range(0..4),
                rng.gen_range(0..4),
                rng.gen_range(0..4),
            ];
            sys.set_c(idx, frac(rng.gen_range(-9..=9), rng.gen_range(1..=5)));
        }
        let mut sys = symmetrize(&sys);
        let perturbed = case % 2 == 1;
        if perturbed {
            let (i, k) = (rng.gen_range(0..d), rng.gen_range(0..d));
            let (a, b) = if i != k && rng.gen_bool(0.5) {
                let a = rng.gen_range(0..4);
                (a, a)
            } else {
                let a = rng.gen_range(0..3);
                (a, rng.gen_range(a + 1..4))
            };
            let idx = [i, rng.gen_range(0..d), k, a, b, rng.gen_range(0..4)];
            let cur = sys.c(idx[0], idx[1], idx[2], idx[3], idx[4], idx[5]).clone();
            sys.set_c(idx, cur + frac(rng.gen_range(1..=7), rng.gen_range(1..=4)));
        }
        if check_symmetry(&sys).symmetric == perturbed {
            wrong += 1;
        }
    }
    outcome(wrong == 0, format!("50 cases, {wrong} wrong verdicts"))
}

fn bump(t: f64, x: [f64; 3]) -> f64 {
    let d = [x[0] - 0.4, x[1] + 0.3, x[2] - 0.2];
    (-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / 2.25).exp() * (0.8 * t).cos()
}

fn commutator_norms(n: usize) -> (f64, f64) {
    let g = Grid3::new(4.0, n).unwrap();
    let s = Slab::from_fn(g, 0.5, 0.5 * g.h, 3, bump);
    let box_ = |x: &Slab| x.wave_operator_composed(1.0).unwrap();
    let a = box_(&s.apply(VectorField::Omega3).unwrap());
    let b = box_(&s).apply(VectorField::Omega3).unwrap();
    let rot = g.sup(a.sub(&b).center(), 4);
    let bs = box_(&s.apply(VectorField::Scaling).unwrap());
    let sb = box_(&s).apply(VectorField::Scaling).unwrap();
    let two_box = box_(&s).map(|_, _, v| 2.0 * v);
    let scale = g.sup(bs.sub(&sb).sub(&two_box).center(), 4);
    (rot, scale)
}

fn commutators() -> Outcome {
    let t0 = Instant::now();
    let (r1, s1) = commutator_norms(33);
    let t1 = t0.elapsed().as_secs_f64();
    let (r2, s2) = commutator_norms(65);
    let t2 = t0.elapsed().as_secs_f64() - t1;
    let (fr, fs) = (r1 / r2, s1 / s2);
    let band = 3.4..=4.6;
    outcome(
        band.contains(&fr) && band.contains(&fs) && t1 < 60.0 && t2 < 60.0,
        format!("rotation factor {fr:.3}, scaling factor {fs:.3}, levels {t1:.1} s and {t2:.1} s"),
    )
}

fn source(t: f64, x: [f64; 3]) -> f64 {
    let d = [x[0] - 0.3, x[1] + 0.2, x[2] - 0.1];
    let r2 = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / 2.25;
    if r2 >= 1.0 {
        0.0
    } else {
        (1.0 - r2).powi(6) * (1.0 + t).cos()
    }
}

/// Largest pointwise gap to the Kirchhoff value at grid nodes near `probes`,
/// with `h² + dt²`.
fn kirchhoff_gap(n: usize, t_end: f64, probes: &[[f64; 3]]) -> (f64, f64) {
    let sys = WaveSystem::linear(vec![int(1)]).unwrap().numeric();
    let g = Grid3::new(4.0, n).unwrap();
    let cfg = SolverConfig { t_end, ..Default::default() };
    let forcing: Forcing3 = Arc::new(|_, t, x| source(t, x));
    let mut s = Solver3::new(g, &sys, &InitialData::zero(), cfg, 1, Boundary3::Fixed, Some(forcing)).unwrap();
    while !s.finished() {
        s.step();
    }
    let u = &s.newest()[0];
    let opts = KirchhoffOptions {
        rel_tol: 1e-10,
        abs_tol: 1e-13,
        ..Default::default()
    };
    let gap = probes
        .iter()
        .map(|x| {
            let ijk = x.map(|c| ((c + 4.0) / g.h).round() as usize);
            let p = g.index(ijk[0], ijk[1], ijk[2]);
            (u[p] - kirchhoff_solve(source, 1.0, t_end, g.point(p), &opts).value).abs()
        })
        .fold(0.0, f64::max);
    (gap, g.h * g.h + s.dt() * s.dt())
}

fn kirchhoff_agreement() -> Outcome {
    let t_end = 1.5;
    let probes = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, -1.0, 1.0], [2.0, 1.0, 0.0], [0.5, 0.5, -0.5]];
    // sup |F| = 1
    let (gap48, scale48) = kirchhoff_gap(48, t_end, &probes);
    // nodes at multiples of 1/3 are shared by n = 25, 49, 97
    let shared = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, -1.0, 1.0], [2.0, 1.0, 0.0], [1.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0]];
    let gaps: Vec<f64> = [25, 49, 97].iter().map(|&n| kirchhoff_gap(n, t_end, &shared).0).collect();
    let orders: Vec<f64> = gaps.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let pass = gap48 <= 3.0 * scale48 && orders.iter().all(|p| (1.7..=2.3).contains(p));
    outcome(
        pass,
        format!(
            "48³ gap {gap48:.3e} vs bound {:.3e}; orders {:.3}, {:.3}",
            3.0 * scale48,
            orders[0],
            orders[1]
        ),
    )
}

fn energy() -> Outcome {
    let (cfg, sys) = scenario("energy-linear.json");
    let out = run_rung(&cfg, &sys, 0).expect("linear run");
    let drift = out.energy_drift();
    let mut rng = ChaCha8Rng::seed_from_u64(0x656e6572);
    let mut violations = 0;
    let mut closest = f64::INFINITY;
    for _ in 0..10_000 {
        let d = rng.gen_range(1..=3);
        let speeds: Vec<f64> = (0..d).map(|_| rng.gen_range(0.2..3.0)).collect();
        let threshold = 0.5 * speeds.iter().map(|c| (c * c).min(1.0)).fold(f64::INFINITY, f64::min);
        let raw: Vec<f64> = (0..d * d * 16).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let total: f64 = raw.iter().map(|v| v.abs()).sum();
        let fill = rng.gen_range(0.0..=1.0);
        let gamma: Vec<f64> = raw.iter().map(|v| v * fill * threshold / total).collect();
        let du: Vec<[f64; 4]> = (0..d).map(|_| [0; 4].map(|_| rng.gen_range(-5.0..5.0))).collect();
        let norm2: f64 = du.iter().flatten().map(|v| v * v).sum();
        let margin = positivity_margin_point(&du, &speeds, &gamma);
        closest = closest.min(margin / norm2);
        if margin < -1e-12 * norm2 {
            violations += 1;
        }
    }
    outcome(
        drift < 1e-3 && violations == 0 && out.status == RunStatus::Completed,
        format!("flat energy drift {drift:.3e}; {violations} positivity violations in 10⁴ samples (smallest margin/|∇u|² {closest:.3e})"),
    )
}

fn energy_inequality() -> Outcome {
    let forcing: RadialForcing = Arc::new(|t: f64, r: f64| (-r * r).exp() * (1.0 + t).cos());
    let cfg = SolverConfig {
        t_end: 10.0,
        dump_every: 5,
        ..Default::default()
    };
    let forced = run_radial(
        RadialForm::linear(1.0),
        30.0,
        1200,
        RadialBoundary::Outgoing,
        &InitialData::zero(),
        &cfg,
        &DiagnosticsSpec::radial(),
        Some(forcing),
        1e-8,
    )
    .expect("forced radial run");
    let forced_c = forced.cemp_max();
    let (cfg, sys) = scenario("quasilinear-null.json");
    let at = |n: usize| {
        let mut c = cfg.clone();
        c.grid = c.grid.with_resolution(n);
        run_rung(&c, &sys, 0).expect("quasilinear run")
    };
    let (coarse, fine) = (at(33), at(49));
    let (c1, c2) = (coarse.cemp_max(), fine.cemp_max());
    let change = (c1 - c2).abs() / c2;
    let pass = forced_c <= 1.1 && c1.is_finite() && c2.is_finite() && c2 > 0.0 && change <= 0.10;
    outcome(
        pass,
        format!("forced radial C_emp {forced_c:.4}; quasilinear C_emp {c1:.4} (n=33), {c2:.4} (n=49), change {:.1}%", 100.0 * change),
    )
}

fn decay_at(out: &RunOutcome, t: f64) -> f64 {
    out.decay
        .windows(2)
        .find(|w| w[0].t <= t && w[1].t >= t)
        .map(|w| {
            let s = (t - w[0].t) / (w[1].t - w[0].t);
            (1.0 + t) * (w[0].sup_du + s * (w[1].sup_du - w[0].sup_du))
        })
        .unwrap_or(f64::NAN)
}

fn dichotomy() -> Outcome {
    let start = Instant::now();
    let (john, john_sys) = scenario("dichotomy-john.json");
    let (null, null_sys) = scenario("dichotomy-null.json");
    let t_star: Vec<Option<f64>> = (0..john.ladder.len())
        .map(|k| run_rung(&john, &john_sys, k).expect("john run").status.blowup_time())
        .collect();
    let mut pass = matches!(t_star[0], Some(t) if t < 50.0);
    let mut ratios = Vec::new();
    for w in t_star.windows(2) {
        match (w[0], w[1]) {
            (Some(a), Some(b)) => {
                ratios.push(b / a);
                pass &= b > a && b / a >= 1.5;
            }
            _ => pass = false,
        }
    }
    let mut decay = Vec::new();
    for k in 0..null.ladder.len() {
        let out = run_rung(&null, &null_sys, k).expect("null run");
        let sup = out.decay.iter().map(|s| (1.0 + s.t) * s.sup_du).fold(0.0, f64::max);
        let ratio = sup / decay_at(&out, 1.0);
        pass &= out.status == RunStatus::Completed && ratio <= 10.0;
        decay.push(ratio);
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 300.0;
    let t_text: Vec<String> = t_star.iter().map(|t| t.map_or("none".into(), |t| format!("{t:.3}"))).collect();
    outcome(
        pass,
        format!(
            "t* = [{}], ratios {ratios:.3?}; Q0 sup (1+t)|∂u| / value at t=1: {decay:.3?}; {secs:.0} s",
            t_text.join(", ")
        ),
    )
}

fn two_speed() -> Outcome {
    let (cfg, sys) = scenario("two-speed-cross.json");
    assert!(matches!(cfg.grid, GridSpec::Cube { n: 48, .. }));
    let out = run_rung(&cfg, &sys, 0).expect("two-speed run");
    let exponent = out.monitor.exponent;
    outcome(
        out.status == RunStatus::Completed && out.monitor.finite && exponent < 0.2,
        format!(
            "{}; A2_emp·ε = {exponent:.4} (A1 {:.4}, misfit {:.3})",
            out.status.label(),
            out.monitor.a1,
            out.monitor.misfit
        ),
    )
}

fn estimate_lab() -> Outcome {
    let start = Instant::now();
    let reports = estimates::verify_all(&FamilySpec::Standard, &[0, 1]).expect("standard families");
    let mut pass = reports.len() == InequalityId::ALL.len();
    let mut worst: (f64, String) = (0.0, String::new());
    for r in &reports {
        pass &= r.verdict == Verdict::Bounded && r.refinement_change < 0.10;
        if r.refinement_change >= worst.0 {
            worst = (r.refinement_change, r.id.clone());
        }
    }
    let rejected = matches!(estimates::time_derivative_square_rejection(), Err(EstimateError::NotNull(_)));
    pass &= rejected;
    let bounded = reports.iter().filter(|r| r.verdict == Verdict::Bounded).count();
    outcome(
        pass,
        format!(
            "{bounded}/{} bounded, largest refinement change {:.2}% ({}), counterexample rejected: {rejected}; {:.0} s",
            reports.len(),
            100.0 * worst.0,
            worst.1,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn scalars(out: &RunOutcome) -> Vec<f64> {
    let mut v = vec![out.monitor.a0, out.monitor.a1, out.monitor.a2, out.energy_drift(), out.cemp_max()];
    for r in &out.series.rows {
        let s = &r.snapshot;
        v.extend([s.t, s.e_flat, s.e_pert, s.sup_gamma, s.q1, r.q0, r.acc_du, r.acc_u, r.cemp_energy]);
        v.extend(&s.sobolev);
    }
    v
}

fn determinism() -> Outcome {
    let (cfg, sys) = scenario("q0-self-convergence.json");
    let run = |threads| in_pool(threads, || run_rung(&cfg, &sys, 0).expect("q0 run"));
    let verify = |threads| in_pool(threads, || estimates::verify(InequalityId::Product, &FamilySpec::Standard, &[0, 1]).unwrap());
    let (a, b) = (run(4), run(4));
    let same_run_csv = a.series.to_csv() == b.series.to_csv();
    let (ra, rb) = (verify(4), verify(4));
    let same_report_csv = ra.to_csv() == rb.to_csv();
    let single = run(1);
    let rel = |x: f64, y: f64| if x == y { 0.0 } else { (x - y).abs() / x.abs().max(y.abs()) };
    let run_gap = scalars(&a).iter().zip(scalars(&single)).map(|(x, y)| rel(*x, y)).fold(0.0, f64::max);
    let r1 = verify(1);
    let ratios = |r: &estimates::EstimateReport| -> Vec<f64> {
        r.members.iter().flat_map(|m| m.levels.iter().map(|l| l.evaluation.ratio)).chain([r.c_emp]).collect()
    };
    let report_gap = ratios(&ra).iter().zip(ratios(&r1)).map(|(x, y)| rel(*x, y)).fold(0.0, f64::max);
    let same_length = scalars(&a).len() == scalars(&single).len();
    outcome(
        same_run_csv && same_report_csv && same_length && run_gap <= 1e-12 && report_gap <= 1e-12,
        format!(
            "rerun CSVs identical: run {same_run_csv}, report {same_report_csv}; 1 vs 4 threads max relative gap: run {run_gap:.1e}, report {report_gap:.1e}"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("null-condition decisions", null_decisions),
        ("symmetry checker corpus", symmetry_corpus),
        ("discrete commutators", commutators),
        ("linear solver vs Kirchhoff", kirchhoff_agreement),
        ("energy conservation and positivity", energy),
        ("energy-inequality residual", energy_inequality),
        ("dichotomy experiment", dichotomy),
        ("two-speed exemption", two_speed),
        ("estimate lab", estimate_lab),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let label = format!("criterion {}", k + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.ends_with(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{label} [{}] {name}: {} ({:.1} s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
