use knaster_core::Rational;
use knaster_lab::{load_replay, run_campaign, run_replay, ExperimentConfig, SuiteName};

fn small(suite: SuiteName, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(suite, 12, seed);
    cfg.params.d_max = 4;
    cfg.params.max_breakpoints = 8;
    cfg
}

#[test]
fn same_config_same_report() {
    for suite in SuiteName::ALL.into_iter().filter(|s| *s != SuiteName::Density) {
        let cfg = small(suite, 42);
        let a = run_campaign(&cfg).unwrap();
        let b = run_campaign(&cfg).unwrap();
        assert!(a.all_passed(), "{}", a.table());
        assert_eq!(a.reproducible_json(), b.reproducible_json(), "{suite}");
    }
}

#[test]
fn seeds_change_the_inputs() {
    let a = run_campaign(&small(SuiteName::TentWitness, 1)).unwrap();
    let b = run_campaign(&small(SuiteName::TentWitness, 2)).unwrap();
    assert_ne!(a.trials, b.trials);
}

#[test]
fn thread_count_does_not_matter() {
    let cfg = small(SuiteName::ModBound, 9);
    let on = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_campaign(&cfg).unwrap().reproducible_json())
    };
    assert_eq!(on(1), on(4));
}

#[test]
fn failed_trials_carry_a_replay() {
    let mut cfg = small(SuiteName::TentWitness, 3);
    cfg.trials = 2;
    cfg.params.delta = vec![Rational::new(1, 3)];
    let report = run_campaign(&cfg).unwrap();
    assert_eq!(report.summary.failed, 2);
    let dir = tempfile::tempdir().unwrap();
    let mut report = report;
    knaster_lab::campaign::write_replays(&mut report, dir.path()).unwrap();
    let replay = load_replay(&report.replay_files[1]).unwrap();
    assert_eq!(replay.index, 1);
    let again = run_replay(&replay).unwrap();
    assert!(!again.all_passed());
    assert_eq!(again.trials[0].message, report.trials[1].message);
}

#[test]
fn density_trials_certify() {
    let mut cfg = ExperimentConfig::new(SuiteName::Density, 2, 3);
    cfg.params.k = 2;
    let report = knaster_lab::run_density_experiment(&cfg).unwrap();
    assert!(report.all_passed(), "{}", report.table());
    for t in &report.trials {
        let upper: Rational = serde_json::from_value(t.certificate["upper"].clone()).unwrap();
        assert!(upper < Rational::new(1, 4));
    }
}

#[test]
fn identity_target_certifies() {
    use knaster_lab::density::{working_coordinate, Density, DensityInput};
    use knaster_lab::Suite;
    let cfg = ExperimentConfig::new(SuiteName::Density, 1, 0);
    let eta = Rational::new(1, 4);
    let input = DensityInput {
        m: 1,
        working: working_coordinate(1, &eta, &cfg.primes),
        generic_seed: 5,
        k: 2,
        y: knaster_core::PlHomeo::identity(),
        eta,
    };
    Density.check(&cfg, &input).unwrap();
}
