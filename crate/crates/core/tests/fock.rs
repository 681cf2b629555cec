mod common;

use common::*;
use lobsim::optics::{bs, circulator_exchange, delay_with_overlap, hwp, pbs, ring_exchange};
use lobsim::{ModeLabel, Occupation, Path, PhotonicState, TransferMap};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Isometry from `n_in` labelled inputs to `n_out >= n_in` labelled outputs.
fn random_isometry(n_in: usize, n_out: usize, rng: &mut ChaCha8Rng) -> TransferMap {
    let u = random_unitary(n_out, rng);
    let m = u.columns(0, n_in).into_owned();
    let ins = (0..n_in).map(|i| ModeLabel::h(&format!("i{i}"))).collect();
    let outs = (0..n_out).map(|i| ModeLabel::v(&format!("o{i}"))).collect();
    TransferMap::new(ins, outs, m).unwrap()
}

fn random_state(
    map: &TransferMap,
    photons: usize,
    terms: usize,
    rng: &mut ChaCha8Rng,
) -> PhotonicState {
    let ins = map.modes_in();
    let parts: Vec<(Occupation, Complex64)> = (0..terms)
        .map(|_| {
            let ms: Vec<&ModeLabel> = (0..photons)
                .map(|_| &ins[rng.random_range(0..ins.len())])
                .collect();
            (
                Occupation::from_modes(ms),
                c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
            )
        })
        .collect();
    PhotonicState::new(parts).unwrap()
}

fn max_diff(
    state: &PhotonicState,
    oracle: &std::collections::BTreeMap<Occupation, Complex64>,
) -> f64 {
    let mut worst: f64 = 0.0;
    for (occ, amp) in oracle {
        worst = worst.max((state.amplitude(occ) - amp).norm());
    }
    for (occ, amp) in state.terms() {
        if !oracle.contains_key(occ) {
            worst = worst.max(amp.norm());
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_matches_permanent_oracle(seed in any::<u64>(), n_in in 1usize..=4, extra in 0usize..=2, photons in 1usize..=4, terms in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_isometry(n_in, n_in + extra, &mut rng);
        let state = random_state(&map, photons, terms, &mut rng);
        let out = map.apply(&state);
        let oracle = oracle_apply(&map, &state);
        prop_assert!(max_diff(&out, &oracle) < 1e-10);
    }

    #[test]
    fn norm_is_preserved(seed in any::<u64>(), n_in in 1usize..=4, extra in 0usize..=2, photons in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_isometry(n_in, n_in + extra, &mut rng);
        let state = random_state(&map, photons, 3, &mut rng);
        prop_assert!((map.apply(&state).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn apply_is_linear(seed in any::<u64>(), n in 1usize..=4, photons in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_isometry(n, n + 1, &mut rng);
        let s1 = random_state(&map, photons, 2, &mut rng);
        let s2 = random_state(&map, photons, 2, &mut rng);
        let (a, b) = (c(rng.random(), rng.random()), c(rng.random(), -rng.random::<f64>()));
        let Ok(mix) = PhotonicState::linear_combination(&[(a, &s1), (b, &s2)]) else {
            return Ok(());
        };
        let lhs = map.apply(&mix);
        let rhs = PhotonicState::linear_combination(&[(a, &map.apply(&s1)), (b, &map.apply(&s2))]).unwrap();
        let keys: std::collections::BTreeSet<Occupation> =
            lhs.terms().chain(rhs.terms()).map(|(o, _)| o.clone()).collect();
        for k in keys {
            prop_assert!((lhs.amplitude(&k) - rhs.amplitude(&k)).norm() < 1e-12);
        }
    }

    #[test]
    fn composition_equals_sequential_application(seed in any::<u64>(), n in 1usize..=4, photons in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let first = random_isometry(n, n + 1, &mut rng);
        let u = random_unitary(n + 1, &mut rng);
        let second = TransferMap::new(first.modes_out().to_vec(), modes(&["p", "q", "r"])[..n + 1].to_vec(), u).unwrap();
        let state = random_state(&first, photons, 2, &mut rng);
        let sequential = second.apply(&first.apply(&state));
        let composed = first.then(&second).unwrap().apply(&state);
        let keys: std::collections::BTreeSet<Occupation> =
            sequential.terms().chain(composed.terms()).map(|(o, _)| o.clone()).collect();
        for k in keys {
            prop_assert!((sequential.amplitude(&k) - composed.amplitude(&k)).norm() < 1e-12);
        }
    }

    #[test]
    fn outcome_probabilities_are_complete(seed in any::<u64>(), n in 1usize..=4, photons in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_isometry(n, n + 2, &mut rng);
        let state = map.apply(&random_state(&map, photons, 3, &mut rng));
        let total: f64 = state
            .terms()
            .map(|(occ, _)| state.pattern_probability(occ, false).unwrap())
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn factory_maps_are_isometric(theta in -360.0f64..360.0, gamma in 0.0f64..=1.0) {
        let (a, b, x, y) = (Path::new("a"), Path::new("b"), Path::new("x"), Path::new("y"));
        let maps = [
            hwp(theta, &a).unwrap(),
            delay_with_overlap(gamma, &a).unwrap(),
            pbs([&a, &b], [&x, &y]).unwrap(),
            bs([&a, &b], [&x, &y]).unwrap(),
            circulator_exchange(&a, &b).unwrap(),
            ring_exchange(&[a.clone(), b.clone(), x.clone()]).unwrap(),
        ];
        for m in maps {
            prop_assert!(m.isometry_deviation() < 1e-12);
        }
        let twice = hwp(theta, &a).unwrap().then(&hwp(theta, &a).unwrap()).unwrap();
        for from in twice.modes_in() {
            for to in twice.modes_out() {
                let expected = if from == to { 1.0 } else { 0.0 };
                prop_assert!((twice.coefficient(from, to) - expected).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn permanent_oracle_sanity() {
    let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
    assert_eq!(permanent(&m), c(10.0, 0.0));
}

#[test]
fn hong_ou_mandel_bunching_matches_oracle() {
    let (a, b, x, y) = (
        Path::new("a"),
        Path::new("b"),
        Path::new("x"),
        Path::new("y"),
    );
    let map = bs([&a, &b], [&x, &y]).unwrap();
    let input = operator_state(&[("a_H b_H", c(1.0, 0.0))]);
    let out = map.apply(&input);
    let coincidence = Occupation::from_modes(&[ModeLabel::h("x"), ModeLabel::h("y")]);
    assert!(out.amplitude(&coincidence).norm() < 1e-15);
    assert!(max_diff(&out, &oracle_apply(&map, &input)) < 1e-14);
}

#[test]
fn non_isometric_matrix_is_rejected() {
    let m = DMatrix::from_element(2, 2, c(1.0, 0.0));
    assert!(TransferMap::new(modes(&["a"]), modes(&["b"]), m).is_err());
}
