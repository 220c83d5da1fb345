use nullwave::diagnostics::{energy_form, flat_energy, positivity_margin_point, weighted_sobolev_norm};
use nullwave::grid::{Grid3, Slab};
use nullwave::system::rational::{frac, int};
use nullwave::system::WaveSystem;
use proptest::prelude::*;

fn gaussian(center: [f64; 3], widths: [f64; 3]) -> impl Fn([f64; 3]) -> f64 {
    move |x| {
        (0..3)
            .map(|a| ((x[a] - center[a]) / widths[a]).powi(2))
            .sum::<f64>()
            .mul_add(-1.0, 0.0)
            .exp()
    }
}

#[test]
fn weighted_norm_of_unit_gaussian_matches_closed_form() {
    // ‖e^{-|x|²}‖₂ = (π/2)^{3/4} and ‖⟨x⟩∂ⱼe^{-|x|²}‖₂ = (3/2)(π/2)^{3/4}
    let g = Grid3::new(6.0, 97).unwrap();
    let f = g.sample(gaussian([0.0; 3], [1.0; 3]));
    let base = std::f64::consts::FRAC_PI_2.powf(0.75);
    let m0 = weighted_sobolev_norm(&g, &f, 0).unwrap();
    let m1 = weighted_sobolev_norm(&g, &f, 1).unwrap();
    assert!((m0 / base - 1.0).abs() < 1e-6, "{m0}");
    assert!((m1 / (5.5 * base) - 1.0).abs() < 0.01, "{m1} vs {}", 5.5 * base);
}

#[test]
fn vanishing_metric_perturbation_gives_the_flat_energy_bitwise() {
    let sys = WaveSystem::linear(vec![int(1), frac(3, 2)]).unwrap().numeric();
    let g = Grid3::new(3.0, 25).unwrap();
    let slab = |s: f64| {
        Slab::from_fn(g, 0.2, 0.05, 1, move |t, x| {
            gaussian([0.3 * s, -0.2, 0.1], [1.0, 1.3, 0.9])(x) * (1.0 + s * t).cos()
        })
    };
    let fams = [slab(1.0), slab(2.0)];
    let pert = energy_form(&fams, &sys, true).unwrap();
    let flat = flat_energy(&fams, &sys).unwrap();
    assert!(flat > 0.0);
    assert_eq!(pert.energy.to_bits(), flat.to_bits());
    assert_eq!(pert.smallness_violations, 0);
}

fn small_gamma(d: usize, raw: &[f64], threshold: f64, fill: f64) -> Vec<f64> {
    let gamma: Vec<f64> = raw.iter().take(d * d * 16).copied().collect();
    let total: f64 = gamma.iter().map(|g| g.abs()).sum();
    if total == 0.0 {
        return gamma;
    }
    gamma.iter().map(|g| g * fill * threshold / total).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weighted_norms_grow_with_the_order(
        cx in -1.0f64..1.0, cy in -1.0f64..1.0,
        wx in 0.6f64..1.5, wy in 0.6f64..1.5, wz in 0.6f64..1.5,
    ) {
        let g = Grid3::new(4.0, 21).unwrap();
        let f = g.sample(gaussian([cx, cy, 0.0], [wx, wy, wz]));
        let mut last = 0.0;
        for m in 0..=3 {
            let v = weighted_sobolev_norm(&g, &f, m).unwrap();
            prop_assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn weighted_norms_are_invariant_under_axis_permutations(
        wx in 0.6f64..1.5, wy in 0.6f64..1.5, wz in 0.6f64..1.5,
        m in 0usize..3,
    ) {
        let g = Grid3::new(4.0, 21).unwrap();
        let f = g.sample(gaussian([0.0; 3], [wx, wy, wz]));
        let permuted = g.build(|p| {
            let [i, j, k] = g.ijk(p);
            f[g.index(j, k, i)]
        });
        let flipped = g.build(|p| {
            let [i, j, k] = g.ijk(p);
            f[g.index(g.n - 1 - i, j, k)]
        });
        let a = weighted_sobolev_norm(&g, &f, m).unwrap();
        for h in [permuted, flipped] {
            let b = weighted_sobolev_norm(&g, &h, m).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a, "{} vs {}", a, b);
        }
    }

    #[test]
    fn energy_density_stays_positive_under_small_perturbations(
        d in 1usize..4,
        speeds in prop::collection::vec(0.2f64..3.0, 3),
        du in prop::collection::vec(-5.0f64..5.0, 12),
        raw in prop::collection::vec(-1.0f64..1.0, 144),
        fill in 0.0f64..=1.0,
    ) {
        let speeds = &speeds[..d];
        let threshold = 0.5 * speeds.iter().map(|c| (c * c).min(1.0)).fold(f64::INFINITY, f64::min);
        let gamma = small_gamma(d, &raw, threshold, fill);
        let du: Vec<[f64; 4]> = du.chunks(4).take(d).map(|c| [c[0], c[1], c[2], c[3]]).collect();
        let norm2: f64 = du.iter().flatten().map(|v| v * v).sum();
        prop_assert!(positivity_margin_point(&du, speeds, &gamma) >= -1e-12 * norm2.max(1.0));
    }
}
