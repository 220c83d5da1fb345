use nullwave::grid::kirchhoff::{kirchhoff_solve, KirchhoffOptions};
use nullwave::grid::{Grid3, Slab, VectorField};

fn bump(t: f64, x: [f64; 3]) -> f64 {
    let d = [x[0] - 0.4, x[1] + 0.3, x[2] - 0.2];
    (-(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / 2.25).exp() * (0.8 * t).cos()
}

fn sup_interior(g: &Grid3, f: &[f64]) -> f64 {
    g.sup(f, 4)
}

/// `(‖[□_h, Ω₁₂]f‖_∞, ‖([□_h, S] − 2□_h)f‖_∞)` for the composed operator,
/// and the rotation commutator for the compact operator.
fn commutators(n: usize) -> (f64, f64, f64) {
    let g = Grid3::new(4.0, n).unwrap();
    let dt = 0.5 * g.h;
    let s = Slab::from_fn(g, 0.5, dt, 3, bump);
    let box_ = |x: &Slab| x.wave_operator_composed(1.0).unwrap();
    let rot = VectorField::Omega3;
    let a = box_(&s.apply(rot).unwrap());
    let b = box_(&s).apply(rot).unwrap();
    let c_rot = sup_interior(&g, a.sub(&b).center());
    let bs = box_(&s.apply(VectorField::Scaling).unwrap());
    let sb = box_(&s).apply(VectorField::Scaling).unwrap();
    let two_box = box_(&s).map(|_, _, v| 2.0 * v);
    let c_s = sup_interior(&g, bs.sub(&sb).sub(&two_box).center());
    let compact = |x: &Slab| x.wave_operator(1.0).unwrap();
    let a = compact(&s.apply(rot).unwrap());
    let b = compact(&s).apply(rot).unwrap();
    let c_compact = sup_interior(&g, a.sub(&b).center());
    (c_rot, c_s, c_compact)
}

#[test]
fn commutators_vanish_at_second_order() {
    let (r1, s1, k1) = commutators(33);
    let (r2, s2, k2) = commutators(65);
    let (fr, fs) = (r1 / r2, s1 / s2);
    assert!((3.4..=4.6).contains(&fr), "rotation factor {fr} ({r1}, {r2})");
    assert!((3.4..=4.6).contains(&fs), "scaling factor {fs} ({s1}, {s2})");
    // the compact seven-point Laplacian commutes with Ω_h exactly
    assert!(k1 < 1e-9 && k2 < 1e-9, "{k1} {k2}");
}

#[test]
fn rotations_annihilate_radial_functions() {
    let err = |n: usize| {
        let g = Grid3::new(3.0, n).unwrap();
        let s = Slab::from_fn(g, 0.0, 0.1, 0, |_, x| {
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            (-r2).exp() * (1.0 + r2)
        });
        (0..3)
            .map(|i| g.sup(s.rotation(i).center(), 1))
            .fold(0.0, f64::max)
    };
    let (a, b) = (err(17), err(33));
    assert!(a < 0.1 && (3.0..=5.0).contains(&(a / b)), "{a} {b}");
}

#[test]
fn rotation_of_product_converges_to_symbolic_value() {
    // Ω₁₂(x₁x₂) = x₁² − x₂², exact for centered differences on quadratics
    let g = Grid3::new(2.0, 12).unwrap();
    let s = Slab::from_fn(g, 0.0, 0.1, 0, |_, x| x[0] * x[1]);
    let o = s.rotation(2);
    for i in 0..g.len() {
        let x = g.point(i);
        assert!((o.center()[i] - (x[0] * x[0] - x[1] * x[1])).abs() < 1e-10);
    }
}

#[test]
fn time_derivative_needs_history() {
    let g = Grid3::new(2.0, 10).unwrap();
    let s = Slab::from_fn(g, 0.0, 0.1, 0, |_, x| x[0]);
    assert!(s.partial(0).is_err());
    assert!(s.partial(1).is_ok());
}

#[test]
fn kirchhoff_is_linear_in_the_source() {
    let opts = KirchhoffOptions {
        feature_scale: Some(0.5),
        ..KirchhoffOptions::default()
    };
    let f1 = |s: f64, y: [f64; 3]| (-(y[0] * y[0] + y[1] * y[1] + y[2] * y[2])).exp() * s;
    let f2 = |_: f64, y: [f64; 3]| (-((y[0] - 0.5).powi(2) + y[1] * y[1] + y[2] * y[2]) * 2.0).exp();
    let x = [0.6, 0.2, -0.4];
    let t = 1.5;
    let a = kirchhoff_solve(f1, 1.0, t, x, &opts);
    let b = kirchhoff_solve(f2, 1.0, t, x, &opts);
    let ab = kirchhoff_solve(|s, y| 2.0 * f1(s, y) - 3.0 * f2(s, y), 1.0, t, x, &opts);
    assert!(a.converged && b.converged && ab.converged);
    let want = 2.0 * a.value - 3.0 * b.value;
    assert!((ab.value - want).abs() < 1e-7 * want.abs().max(1e-3), "{} vs {want}", ab.value);
}

