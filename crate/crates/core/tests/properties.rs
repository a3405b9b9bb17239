use proptest::prelude::*;

use qnfl_core::bounds::{bound_average, bound_fixed, bound_lindep, bound_orthogonal, risk};
use qnfl_core::datagen::{
    check_li_hx, check_opr, gen_varying_rank, lindep_inputs, orthogonal_inputs,
    varying_rank_inputs, Tolerances,
};
use qnfl_core::haar::{haar_unitary, random_schmidt_coeffs, random_state, SeededRng};
use qnfl_core::qcore::{apply_on_x, inner, schmidt, tensor, StateVector, DEFAULT_RANK_TOL};
use qnfl_core::qnn::{ansatz_apply, loss, loss_gradient, Ansatz};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        ..ProptestConfig::default()
    }
}

fn dist(a: &[qnfl_core::qcore::C64], b: &[qnfl_core::qcore::C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Rank-`r` state with `r` well-separated coefficients, rotated by local unitaries.
fn rank_r_state(dx: usize, dr: usize, r: usize, rng: &mut SeededRng) -> StateVector {
    let coeffs = random_schmidt_coeffs(r, rng);
    let mut amps = vec![qnfl_core::qcore::C64::new(0.0, 0.0); dx * dr];
    for (k, s) in coeffs.iter().enumerate() {
        amps[k * dr + k] = (*s).into();
    }
    let psi = StateVector::new(amps, dx, dr).unwrap();
    let p = haar_unitary(dx, rng);
    let q = haar_unitary(dr, rng);
    apply_on_x(&tensor(&p, &q), &psi.with_split(dx * dr, 1).unwrap())
        .unwrap()
        .with_split(dx, dr)
        .unwrap()
}

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn schmidt_reconstructs_any_state(seed in any::<u64>(), nx in 0u32..4, nr in 0u32..4) {
        let (dx, dr) = (1usize << nx, 1usize << nr);
        let mut rng = SeededRng::new(seed);
        let psi = random_state(dx, dr, &mut rng).unwrap();
        let dec = schmidt(&psi, DEFAULT_RANK_TOL);
        let total: f64 = dec.coefficients.iter().map(|c| c * c).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        prop_assert!(dec.rank() >= 1 && dec.rank() <= dx.min(dr));
        prop_assert!(dec.coefficients.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(dist(&dec.reconstruct(), psi.amplitudes()) < 1e-8);
    }

    #[test]
    fn local_unitaries_preserve_rank(seed in any::<u64>(), r in 1usize..=4) {
        let (dx, dr) = (4, 4);
        let mut rng = SeededRng::new(seed);
        let psi = rank_r_state(dx, dr, r, &mut rng);
        let before = schmidt(&psi, DEFAULT_RANK_TOL).rank();
        let local = tensor(&haar_unitary(dx, &mut rng), &haar_unitary(dr, &mut rng));
        let moved = apply_on_x(&local, &psi.clone().with_split(dx * dr, 1).unwrap())
            .unwrap()
            .with_split(dx, dr)
            .unwrap();
        prop_assert_eq!(before, r);
        prop_assert_eq!(schmidt(&moved, DEFAULT_RANK_TOL).rank(), before);
    }

    #[test]
    fn joint_unitary_preserves_inner(seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let a = random_state(4, 2, &mut rng).unwrap();
        let b = random_state(4, 2, &mut rng).unwrap();
        let w = haar_unitary(8, &mut rng);
        let wa = apply_on_x(&w, &a.clone().with_split(8, 1).unwrap()).unwrap();
        let wb = apply_on_x(&w, &b.clone().with_split(8, 1).unwrap()).unwrap();
        let before = inner(&a, &b).unwrap();
        let after = inner(&wa, &wb).unwrap();
        prop_assert!((before - after).norm() < 1e-9);
    }

    #[test]
    fn apply_on_x_keeps_norm(seed in any::<u64>(), nx in 0u32..4, nr in 0u32..3) {
        let (dx, dr) = (1usize << nx, 1usize << nr);
        let mut rng = SeededRng::new(seed);
        let psi = random_state(dx, dr, &mut rng).unwrap();
        let out = apply_on_x(&haar_unitary(dx, &mut rng), &psi).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn haar_samples_are_unitary(seed in any::<u64>(), d in 1usize..=16) {
        let mut rng = SeededRng::new(seed);
        let u = haar_unitary(d, &mut rng);
        prop_assert!(u.unitarity_deviation() < 1e-9 * d as f64);
    }

    #[test]
    fn schmidt_coeffs_are_normalized(seed in any::<u64>(), r in 1usize..=64) {
        let mut rng = SeededRng::new(seed);
        let c = random_schmidt_coeffs(r, &mut rng);
        prop_assert_eq!(c.len(), r);
        prop_assert!(c.iter().all(|&x| x > 0.0));
        prop_assert!((c.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(c.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn risk_stays_in_unit_interval(seed in any::<u64>(), d in 1usize..=16) {
        let mut rng = SeededRng::new(seed);
        let u = haar_unitary(d, &mut rng);
        let v = haar_unitary(d, &mut rng);
        let rep = risk(&u, &v).unwrap();
        prop_assert!((0.0..=1.0).contains(&rep.risk));
        prop_assert!(risk(&u, &u).unwrap().risk.abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn varying_rank_hits_mean(seed in any::<u64>(), t in 1usize..=6, r_bar in 1usize..=4) {
        let mut rng = SeededRng::new(seed);
        let inputs = varying_rank_inputs(4, 4, t, r_bar, &mut rng).unwrap();
        let rep = check_li_hx(&inputs, &Tolerances::default()).unwrap();
        prop_assert_eq!(rep.ranks.len(), t);
        prop_assert!((rep.mean_rank - r_bar as f64).abs() < 1e-12);
        prop_assert!(inputs.iter().all(|s| (s.norm() - 1.0).abs() < 1e-10));
    }

    #[test]
    fn orthogonal_inputs_are_orthogonal(seed in any::<u64>(), r in 1usize..=4, t in 1usize..=4) {
        prop_assume!(r * t <= 8);
        let mut rng = SeededRng::new(seed);
        let inputs = orthogonal_inputs(8, t, r, &mut rng).unwrap();
        let rep = check_li_hx(&inputs, &Tolerances::default()).unwrap();
        prop_assert!(rep.pairwise_orthogonal);
        prop_assert!(rep.ranks.iter().all(|&k| k == r));
        prop_assert!(rep.is_li_hx);
    }

    #[test]
    fn lindep_inputs_span_r(seed in any::<u64>(), r in 1usize..=3, extra in 1usize..=3) {
        let t = r + extra;
        let mut rng = SeededRng::new(seed);
        let inputs = lindep_inputs(8, t, r, &mut rng, 100).unwrap();
        let rep = check_li_hx(&inputs, &Tolerances::default()).unwrap();
        prop_assert!(rep.is_opr);
        prop_assert_eq!(rep.d_sx, r);
        prop_assert!(rep.ranks.iter().all(|&k| k == r));
        prop_assert!(check_opr(&inputs, 1e-9).unwrap());
    }

    #[test]
    fn gradient_matches_finite_differences(seed in any::<u64>(), layers in 1usize..=3) {
        let mut rng = SeededRng::new(seed);
        let set = gen_varying_rank(4, 4, 2, 2, &mut rng).unwrap();
        let a = Ansatz::random_init(2, layers, &mut rng).unwrap();
        let g = loss_gradient(&a, &set).unwrap();
        let h = 1e-6;
        for i in 0..a.params().len() {
            let mut p = a.params().to_vec();
            p[i] += h;
            let up = loss(&Ansatz::new(2, layers, p.clone()).unwrap(), &set).unwrap();
            p[i] -= 2.0 * h;
            let down = loss(&Ansatz::new(2, layers, p).unwrap(), &set).unwrap();
            prop_assert!((g[i] - (up - down) / (2.0 * h)).abs() < 1e-6);
        }
    }

    #[test]
    fn ansatz_is_unitary_and_consistent(seed in any::<u64>(), n in 1usize..=3, layers in 0usize..=4) {
        let mut rng = SeededRng::new(seed);
        let params: Vec<f64> = (0..Ansatz::param_count(n, layers))
            .map(|_| rand::Rng::random_range(&mut rng, -3.2..3.2))
            .collect();
        let a = Ansatz::new(n, layers, params).unwrap();
        let u = a.unitary().unwrap();
        prop_assert!(u.unitarity_deviation() < 1e-9);
        let psi = random_state(1 << n, 2, &mut rng).unwrap();
        let direct = ansatz_apply(&a, &psi).unwrap();
        let via = apply_on_x(&u, &psi).unwrap();
        prop_assert!(dist(direct.amplitudes(), via.amplitudes()) < 1e-9);
    }
}

proptest! {
    #[test]
    fn bounds_are_monotone(nq in 1u32..=6, r in 1usize..=8, t in 1usize..=8) {
        let d = 1usize << nq;
        let b = bound_fixed(d, r, t);
        prop_assert!((0.0..=1.0).contains(&b));
        prop_assert!(bound_fixed(d, r + 1, t) <= b);
        prop_assert!(bound_fixed(d, r, t + 1) <= b);
        prop_assert!((bound_average(d, r as f64, t) - b).abs() < 1e-15);
        prop_assert!(bound_orthogonal(d, &vec![r; t]) >= b);
        prop_assert!((bound_orthogonal(d, &[r]) - bound_fixed(d, r, 1)).abs() < 1e-15);
        prop_assert!((bound_lindep(d, r) - bound_fixed(d, r, 1)).abs() < 1e-15);
        prop_assert!(bound_lindep(d, r + 1) <= bound_lindep(d, r));
    }
}
