use qnfl_core::bounds::risk;
use qnfl_core::datagen::io::{read_training_set, write_training_set};
use qnfl_core::datagen::{gen_lindep, gen_orthogonal, hadamard_orthogonal, zz_lindep};
use qnfl_core::exper::{
    aggregate, emit_csv, read_csv, run_experiment, Experiment, ExperimentConfig,
};
use qnfl_core::haar::SeededRng;
use qnfl_core::qcore::{apply_on_x, inner};
use qnfl_core::qnn::{train, Ansatz, TrainConfig};

#[test]
fn generated_set_survives_disk_and_trains() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("set.json");
    let mut rng = SeededRng::new(7);
    let set = gen_orthogonal(4, 2, 2, &mut rng).unwrap();
    write_training_set(&path, &set, Some(7), None).unwrap();
    let (back, file) = read_training_set(&path).unwrap();
    assert_eq!(file.seed, Some(7));
    assert_eq!(back.inputs(), set.inputs());
    assert_eq!(back.outputs(), set.outputs());
    assert_eq!(back.target().matrix(), set.target().matrix());

    let start = Ansatz::random_init(2, 30, &mut rng).unwrap();
    let cfg = TrainConfig {
        target_loss: 1e-10,
        ..TrainConfig::default()
    };
    let res = train(&start, &back, &cfg).unwrap();
    assert!(res.converged, "final loss {}", res.final_loss);
    let v = res.ansatz(&start).unwrap().unitary().unwrap();
    let r = risk(back.target(), &v).unwrap().risk;
    assert!((0.0..=1.0).contains(&r));
}

#[test]
fn lindep_set_is_fit_exactly() {
    let mut rng = SeededRng::new(11);
    let set = gen_lindep(4, 2, 1, &mut rng, 100).unwrap();
    let start = Ansatz::random_init(2, 30, &mut rng).unwrap();
    let cfg = TrainConfig {
        target_loss: 1e-10,
        ..TrainConfig::default()
    };
    let res = train(&start, &set, &cfg).unwrap();
    assert!(res.converged);
    let v = res.ansatz(&start).unwrap().unitary().unwrap();
    for pair in set.pairs() {
        let out = apply_on_x(&v, &pair.input).unwrap();
        assert!(inner(&out, &pair.output).unwrap().norm() > 1.0 - 1e-6);
    }
}

#[test]
fn fixtures_train_to_zero_loss() {
    for set in [hadamard_orthogonal(), zz_lindep()] {
        let n = set.dim_x().trailing_zeros() as usize;
        let mut rng = SeededRng::new(3);
        let start = Ansatz::random_init(n, 10 * n, &mut rng).unwrap();
        let res = train(&start, &set, &TrainConfig::default()).unwrap();
        assert!(res.final_loss < 1e-6, "loss {}", res.final_loss);
    }
}

#[test]
fn experiment_runs_are_deterministic_and_round_trip() {
    let mut cfg = ExperimentConfig::desk_for(Experiment::LinDep, 2);
    cfg.repetitions = 2;
    cfg.layers = 12;
    cfg.trainer.max_iters = 300;
    let a = run_experiment(&cfg).unwrap();
    let b = run_experiment(&cfg).unwrap();
    assert_eq!(a.len(), cfg.cells().len() * 2);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.seed, y.seed);
        assert_eq!(x.risk.to_bits(), y.risk.to_bits());
        assert_eq!(x.final_loss.to_bits(), y.final_loss.to_bits());
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.csv");
    emit_csv(&a, &path).unwrap();
    let back = read_csv(&path).unwrap();
    assert_eq!(back.len(), a.len());
    for (x, y) in a.iter().zip(&back) {
        assert_eq!(x.risk.to_bits(), y.risk.to_bits());
        assert_eq!(x.rank_spec, y.rank_spec);
    }
    let agg = aggregate(&back);
    assert_eq!(
        agg.cells.iter().map(|c| c.n).sum::<usize>() + agg.excluded,
        a.len()
    );
}
