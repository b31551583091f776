use cedist::ansatz::{param_count, AnsatzFamily, AnsatzSpec};
use cedist::entanglement::{ce_full, histogram, tvd};
use cedist::generator::{
    compare_ansatzes, generate_dataset, recompute_ce, train_generator, AnnealConfig, CeEstimator,
    TargetDistribution, TargetKind,
};
use cedist::io::{parse_dataset, read_dataset, render_dataset, write_dataset};
use cedist::qml::{assemble_samples, classifier_anneal_config, cross_validate, ClassifierSpec};
use cedist::sensors::{simulate_dark_matter, simulate_soil, DarkMatterConfig, SoilConfig};
use cedist::sim::NoiseSpec;

fn quick_config(spec: &AnsatzSpec, seed: u64) -> AnnealConfig {
    let mut c = AnnealConfig::new(param_count(spec), spec.num_qubits);
    c.max_iterations = 15;
    c.samples_per_eval = 40;
    c.holdout_samples = 100;
    c.diversity_pairs = 10;
    c.local_search = false;
    c.seed = seed;
    c
}

#[test]
fn short_training_run_is_consistent_and_deterministic() {
    let spec = AnsatzSpec::new(AnsatzFamily::A1, 3);
    let target = TargetDistribution::gaussian(0.2, 0.05, 0.4, 20).unwrap();
    let config = quick_config(&spec, 3);
    let a = train_generator(&spec, &target, &config).unwrap();
    let b = train_generator(&spec, &target, &config).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.cost_trace.len(), config.max_iterations);
    let min = a.cost_trace.iter().cloned().fold(f64::INFINITY, f64::min);
    assert_eq!(a.best_cost, min);
    assert!((0.0..=1.0).contains(&a.final_tvd));
    assert!(a.best_params.iter().all(|p| p.abs() <= std::f64::consts::TAU));
}

#[test]
fn dataset_survives_a_file_round_trip() {
    let spec = AnsatzSpec::new(AnsatzFamily::A3, 3);
    let target = TargetDistribution::uniform(0.4, 10).unwrap();
    let run = train_generator(&spec, &target, &quick_config(&spec, 11)).unwrap();
    let noise = NoiseSpec::default();
    let dataset = generate_dataset(&run, 25, 12, 0, Some(&noise)).unwrap();
    assert_eq!(dataset.len(), 25);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.txt");
    write_dataset(&path, &dataset).unwrap();
    let back = read_dataset(&path).unwrap();
    assert_eq!(back, dataset);
    assert_eq!(render_dataset(&back), std::fs::read_to_string(&path).unwrap());
    // Stored CE values match a fresh computation on the stored states.
    let again = recompute_ce(&back, CeEstimator::Full).unwrap();
    for (x, y) in again.iter().zip(&back.ce_values) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn dataset_histogram_matches_reported_ce() {
    let spec = AnsatzSpec::new(AnsatzFamily::A2, 3);
    let target = TargetDistribution::default_of(TargetKind::Gaussian).unwrap();
    let run = train_generator(&spec, &target, &quick_config(&spec, 21)).unwrap();
    let dataset = generate_dataset(&run, 60, 22, 0, None).unwrap();
    for (s, v) in dataset.states.iter().zip(&dataset.ce_values) {
        assert!((ce_full(s).unwrap().value - v).abs() < 1e-12);
    }
    let h = histogram(&dataset.ce_values, &target.bin_edges).unwrap();
    assert!(tvd(&h, &target.histogram()).unwrap() <= 1.0);
}

#[test]
fn malformed_dataset_text_is_rejected() {
    assert!(parse_dataset("").is_err());
    assert!(parse_dataset("# not a dataset\n").is_err());
}

#[test]
fn comparison_table_covers_every_family() {
    let families = [AnsatzFamily::A1, AnsatzFamily::A3];
    let targets = vec![
        TargetDistribution::default_of(TargetKind::Uniform).unwrap(),
        TargetDistribution::default_of(TargetKind::Gaussian).unwrap(),
    ];
    let spec = AnsatzSpec::new(AnsatzFamily::A1, 3);
    let table = compare_ansatzes(&targets, &families, 3, 1, &quick_config(&spec, 31)).unwrap();
    assert_eq!(table.rows.len(), 2);
    let rank_total: f64 = table.rows.iter().map(|r| r.avg_rank).sum();
    assert!((rank_total - 3.0).abs() < 1e-12);
}

#[test]
fn sensor_regimes_separate() {
    let mut high = SoilConfig::high_moisture(1);
    let mut low = SoilConfig::low_moisture(2);
    high.ensemble_size = 300;
    low.ensemble_size = 300;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let h = simulate_soil(&high).unwrap();
    let l = simulate_soil(&low).unwrap();
    assert!(mean(&h.ce_values) > mean(&l.ce_values));

    let mut weak = DarkMatterConfig::weak(3);
    let mut strong = DarkMatterConfig::strong(4);
    weak.ensemble_size = 200;
    strong.ensemble_size = 200;
    let w = simulate_dark_matter(&weak).unwrap();
    let s = simulate_dark_matter(&strong).unwrap();
    assert!(mean(&s.ce_values) > mean(&w.ce_values));
}

#[test]
fn classifier_separates_sensor_regimes() {
    let mut high = SoilConfig::high_moisture(5);
    let mut low = SoilConfig::low_moisture(6);
    high.ensemble_size = 270;
    low.ensemble_size = 270;
    let samples = assemble_samples(
        &simulate_soil(&low).unwrap().ce_values,
        &simulate_soil(&high).unwrap().ce_values,
        30,
    )
    .unwrap();
    let spec = ClassifierSpec::default();
    let cv = cross_validate(&samples, &classifier_anneal_config(&spec, 60, 7), &spec, 3, 7, None).unwrap();
    assert_eq!(cv.ideal.folds.len(), 3);
    assert!(cv.noisy.is_none());
    assert!(cv.ideal.mean.accuracy >= 0.6, "accuracy {}", cv.ideal.mean.accuracy);
}
