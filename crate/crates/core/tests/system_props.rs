use nullwave::system::rational::{frac, int};
use nullwave::system::{
    check_null_condition, check_symmetry, symmetrize, vanishes_on_sphere, SpherePoly, WaveSystem,
};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
enum Entry {
    /// Antisymmetric semilinear pair `B_{ab} = v = −B_{ba}`.
    AntiB([usize; 5], i64),
    /// A multiple of the standard null form for the speed of family `k`.
    NullB([usize; 3], i64),
    /// Arbitrary semilinear entry.
    RawB([usize; 5], i64),
    /// Arbitrary quasilinear entry.
    RawC([usize; 6], i64),
}

fn entry(d: usize) -> impl Strategy<Value = Entry> {
    let fam = 0..d;
    let slot = 0..4usize;
    let v = -3i64..=3;
    prop_oneof![
        3 => (fam.clone(), fam.clone(), fam.clone(), slot.clone(), slot.clone(), v.clone())
            .prop_map(|(i, j, k, a, b, v)| Entry::AntiB([i, j, k, a, b], v)),
        3 => (fam.clone(), fam.clone(), fam.clone(), v.clone())
            .prop_map(|(i, j, k, v)| Entry::NullB([i, j, k], v)),
        1 => (fam.clone(), fam.clone(), fam.clone(), slot.clone(), slot.clone(), v.clone())
            .prop_map(|(i, j, k, a, b, v)| Entry::RawB([i, j, k, a, b], v)),
        1 => (fam.clone(), fam.clone(), fam, slot.clone(), slot.clone(), slot, v)
            .prop_map(|(i, j, k, a, b, c, v)| Entry::RawC([i, j, k, a, b, c], v)),
    ]
}

fn add_b(sys: &mut WaveSystem, idx: [usize; 5], v: BigRational) {
    let [i, j, k, a, b] = idx;
    let cur = sys.b(i, j, k, a, b).clone();
    sys.set_b(idx, cur + v);
}

fn build(speeds: &[BigRational], entries: &[Entry]) -> WaveSystem {
    let mut sys = WaveSystem::linear(speeds.to_vec()).unwrap();
    for e in entries {
        match e {
            Entry::AntiB([i, j, k, a, b], v) => {
                add_b(&mut sys, [*i, *j, *k, *a, *b], int(*v));
                add_b(&mut sys, [*i, *j, *k, *b, *a], int(-*v));
            }
            Entry::NullB([i, j, k], v) => {
                let c = &speeds[*k];
                add_b(&mut sys, [*i, *j, *k, 0, 0], int(*v) / (c * c));
                for s in 1..4 {
                    add_b(&mut sys, [*i, *j, *k, s, s], int(-*v));
                }
            }
            Entry::RawB(idx, v) => add_b(&mut sys, *idx, int(*v)),
            Entry::RawC([i, j, k, a, b, c], v) => {
                let cur = sys.c(*i, *j, *k, *a, *b, *c).clone();
                sys.set_c([*i, *j, *k, *a, *b, *c], cur + int(*v));
            }
        }
    }
    sys
}

fn verdicts(sys: &WaveSystem) -> (bool, bool, bool) {
    let r = check_null_condition(sys);
    (r.symmetric, r.null_quasilinear, r.null_semilinear)
}

/// Stereographic image of a rational point: an exactly unit rational vector.
fn unit_from(s: &BigRational, t: &BigRational) -> [BigRational; 3] {
    let one = int(1);
    let den = &one + s * s + t * t;
    [
        int(2) * s / &den,
        int(2) * t / &den,
        (s * s + t * t - &one) / &den,
    ]
}

fn random_unit(rng: &mut ChaCha8Rng) -> [BigRational; 3] {
    let s = frac(rng.gen_range(-200..=200), rng.gen_range(1..=97));
    let t = frac(rng.gen_range(-200..=200), rng.gen_range(1..=97));
    unit_from(&s, &t)
}

fn linear_poly(c: [i64; 4]) -> SpherePoly {
    let mut q = SpherePoly::constant(int(c[0]));
    for axis in 0..3 {
        q = q.add(&SpherePoly::variable(axis).scale(&int(c[axis + 1])));
    }
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdicts_invariant_under_relabeling_within_a_class(
        entries in prop::collection::vec(entry(3), 0..8)
    ) {
        let speeds = vec![int(1), frac(3, 2), int(1)];
        let sys = build(&speeds, &entries);
        // families 0 and 2 share speed 1
        let swapped = sys.permuted(&[2, 1, 0]);
        prop_assert_eq!(verdicts(&sys), verdicts(&swapped));
    }

    #[test]
    fn verdicts_invariant_under_scaling(
        entries in prop::collection::vec(entry(2), 0..8),
        num in prop_oneof![-7i64..=-1, 1i64..=7],
        den in 1i64..=9,
    ) {
        let sys = build(&[int(1), int(2)], &entries);
        prop_assert_eq!(verdicts(&sys), verdicts(&sys.scaled(&frac(num, den))));
    }

    #[test]
    fn symmetrized_tensors_are_symmetric(
        entries in prop::collection::vec(entry(2), 0..10)
    ) {
        let sys = build(&[int(1), int(1)], &entries);
        prop_assert!(check_symmetry(&symmetrize(&sys)).symmetric);
    }

    #[test]
    fn sphere_multiples_vanish_and_others_do_not(
        q in prop::array::uniform4(-5i64..=5),
        extra in prop::array::uniform4(-5i64..=5),
    ) {
        let p = linear_poly(q).mul(&SpherePoly::sphere());
        prop_assert!(vanishes_on_sphere(&p).unwrap().vanishes());
        let r = linear_poly(extra);
        let verdict = vanishes_on_sphere(&p.add(&r)).unwrap();
        prop_assert_eq!(verdict.vanishes(), extra == [0, 0, 0, 0]);
    }
}

#[test]
fn vanishing_verdict_survives_ten_thousand_random_unit_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut polys = Vec::new();
    for _ in 0..4 {
        let q: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-9..=9));
        polys.push(linear_poly(q).mul(&SpherePoly::sphere()));
    }
    for p in &polys {
        assert!(vanishes_on_sphere(p).unwrap().vanishes());
    }
    for _ in 0..10_000 {
        let w = random_unit(&mut rng);
        let norm = &w[0] * &w[0] + &w[1] * &w[1] + &w[2] * &w[2];
        assert_eq!(norm, int(1));
        for p in &polys {
            assert!(p.eval(&w).is_zero());
        }
    }
}

#[test]
fn nonvanishing_cubic_has_exact_witness() {
    // ω₁ω₂ω₃ vanishes on all coordinate directions, but not on (1,2,2)/3
    let p = SpherePoly::monomial([1, 1, 1], int(1));
    match vanishes_on_sphere(&p).unwrap() {
        nullwave::system::SphereVerdict::Nonzero { witness, value } => {
            assert!(!value.is_zero());
            assert_eq!(p.eval(&witness), value);
        }
        other => panic!("expected witness, got {other:?}"),
    }
}
