use qkick::hamiltonian::{Hamiltonian, HamiltonianSampler};
use qkick::harness::{choi_distance, figure_data, sweep, FigureId, FigureOptions, SweepConfig, SweepOutput};
use qkick::numerics::identity;
use qkick::zeno::{suppression_check, zeno_evolution, ZenoAnalysis};
use qkick::zoo;

fn run(json: &str) -> SweepOutput {
    sweep(&SweepConfig::from_json(json).unwrap()).unwrap()
}

fn assert_record_ranges(out: &SweepOutput) {
    for r in &out.records {
        match r.metric_name {
            "purity" => assert!(r.value > 0.0 && r.value <= 1.0 + 1e-9, "{r:?}"),
            "choi_distance" => assert!((0.0..=2.0 + 1e-9).contains(&r.value), "{r:?}"),
            other => panic!("unexpected metric {other}"),
        }
    }
}

#[test]
fn updown_bath_sweep_rises_to_full_purity() {
    let n: Vec<String> = (1..=100).map(|n| n.to_string()).collect();
    let out = run(&format!(
        r#"{{"channel": "zoo:E_updown", "mode": "dd", "d1": 2,
            "hamiltonians": {{"random": {{"count": 100, "seed": 1}}}}, "n": [{}]}}"#,
        n.join(",")
    ));
    assert_eq!(out.records.len(), 100 * 100);
    assert_record_ranges(&out);
    let mins: Vec<f64> = (1..=100).map(|n| out.aggregate(n).unwrap().min).collect();
    assert!(mins[99] >= 0.99);
    for decade in [1usize, 10] {
        assert!(mins[10 * decade - 1] >= mins[decade - 1] - 1e-3);
    }
}

#[test]
fn ensemble_means_from_sweeps() {
    let dephase = run(
        r#"{"channel": "zoo:E_dephase", "mode": "dd", "d1": 2,
            "hamiltonians": {"random": {"count": 100, "seed": 1}}, "n": [50, 100]}"#,
    );
    let half = run(
        r#"{"channel": "zoo:E_half", "mode": "zeno",
            "hamiltonians": {"random": {"count": 100, "seed": 1}}, "n": [50, 100]}"#,
    );
    assert_record_ranges(&dephase);
    assert_record_ranges(&half);
    for n in [50, 100] {
        assert!((dephase.aggregate(n).unwrap().mean - 0.85).abs() <= 0.03);
        assert!((half.aggregate(n).unwrap().mean - 0.55).abs() <= 0.03);
    }
}

#[test]
fn fixture_sweep_through_the_config_path() {
    let out = run(
        r#"{"channel": "zoo:E_dephase", "mode": "dd", "d1": 2,
            "hamiltonians": {"fixture": "pauli:ZZ"}, "n": [50]}"#,
    );
    assert!((out.records[0].value - 0.59).abs() <= 0.02);
    assert_eq!(out.records[0].hamiltonian, "pauli:ZZ");
}

fn min_purity(channel: &str, ns: &str) -> SweepOutput {
    run(&format!(
        r#"{{"channel": "zoo:{channel}", "mode": "dd", "d1": 2,
            "hamiltonians": {{"random": {{"count": 50, "seed": 3}}}}, "n": [{ns}]}}"#
    ))
}

#[test]
fn ergodic_qubit_baths_decouple() {
    assert!(min_purity("E_updown", "100").aggregate(100).unwrap().min >= 0.99);
    // worst case 0.989 at n = 100, deficit falling as 1/n
    for name in ["P_rho", "P_rho(diag=0.8:0.2)"] {
        let out = min_purity(name, "100, 400");
        let (a, b) = (1.0 - out.aggregate(100).unwrap().min, 1.0 - out.aggregate(400).unwrap().min);
        assert!(a < 0.012 && b < 0.01, "{name}: deficits {a} {b}");
        assert!((3.0..=5.0).contains(&(a / b)), "{name}: deficit ratio {}", a / b);
    }
}

#[test]
fn working_suppression_decays_at_first_order() {
    for name in ["E_updown", "E_dephase", "E_triangle", "E_hook", "E_square"] {
        let out = run(&format!(
            r#"{{"channel": "zoo:{name}", "mode": "zeno",
                "hamiltonians": {{"random": {{"count": 20, "seed": 11}}}}, "n": [8, 64]}}"#
        ));
        assert_record_ranges(&out);
        for pair in out.records.chunks(2) {
            assert_eq!((pair[0].n, pair[1].n), (8, 64));
            assert!(pair[1].value < pair[0].value / 4.0, "{name}: {pair:?}");
        }
    }
}

#[test]
fn sweep_replay_is_bit_identical() {
    let config = r#"{"channel": "zoo:E_square(p=0.3)", "mode": "zeno",
        "hamiltonians": {"random": {"count": 7, "seed": 42}}, "n": [1, 3, 9]}"#;
    let (a, b) = (run(config), run(config));
    assert_eq!(a.records_csv(), b.records_csv());
    assert_eq!(a.aggregates_csv(), b.aggregates_csv());
}

#[test]
fn figure_examples() {
    let fig2b = figure_data(FigureId::Fig2b, &FigureOptions::default()).unwrap();
    let max = fig2b.series("max").unwrap();
    for (n, v) in max.n.iter().zip(&max.values) {
        if *n >= 4 {
            assert!(*v <= 1.5 * 2.0 / *n as f64, "n = {n}: {v}");
        }
    }
    let fig1b = figure_data(FigureId::Fig1b, &FigureOptions { n: vec![1], ..Default::default() }).unwrap();
    let first = fig1b.series("max").unwrap().values[0];
    assert!(first.is_finite() && first <= 2.7 * 1.5);
    let fig3a = figure_data(FigureId::Fig3a, &FigureOptions { n: vec![100], ..Default::default() }).unwrap();
    assert!((fig3a.series("fixture").unwrap().values[0] - 0.59).abs() <= 0.02);
    assert!((fig3a.series("mean").unwrap().values[0] - 0.91).abs() <= 0.03);
}

#[test]
fn zeno_rate_for_twenty_hamiltonians_per_channel() {
    let mut channels = zoo::all();
    channels.push(zoo::from_spec("E_half").unwrap());
    for e in channels {
        let s = e.channel.superoperator();
        let mut sampler = HamiltonianSampler::new(77);
        for _ in 0..20 {
            let h = sampler.sample(s.dim()).unwrap();
            let analysis = ZenoAnalysis::new(s, &h, 1e-8).unwrap();
            let err = |n: u64| {
                let got = zeno_evolution(s, &h, 1.0, n).unwrap();
                choi_distance(&got, &analysis.target(1.0, n).unwrap()).unwrap()
            };
            for n in [8, 16, 32] {
                let (a, b) = (err(n), err(2 * n));
                if a.max(b) > 1e-10 {
                    let r = a / b;
                    assert!((1.6..=2.4).contains(&r), "{}: ratio {r} at n = {n}", e.name);
                }
            }
        }
    }
}

#[test]
fn identity_hamiltonian_is_always_suppressed() {
    let mut channels = zoo::all();
    channels.push(zoo::from_spec("E_half").unwrap());
    for e in channels {
        let h = Hamiltonian::new(identity(e.channel.dim())).unwrap();
        assert!(suppression_check(e.channel.superoperator(), &h, 1e-12).unwrap(), "{}", e.name);
    }
}
