//! A three-qubit variational classifier on CE feature vectors, stratified
//! cross-validation, and a logistic-regression reference model.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{dual_annealing, AnnealConfig};
use crate::rng::{derive_indexed, derive_seed, rng_from_seed};
use crate::sim::{apply_circuit, apply_circuit_noisy, Circuit, NoiseSpec, StateVector};

/// Features per sample: one RY, RX, RZ angle for each of three qubits.
pub const FEATURES: usize = 9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub features: [f64; FEATURES],
    pub label: u8,
}

impl LabeledSample {
    pub fn new(features: &[f64], label: u8) -> Result<Self> {
        let features: [f64; FEATURES] = features.try_into().map_err(|_| {
            Error::Shape(format!("a sample needs {FEATURES} features, got {}", features.len()))
        })?;
        if label > 1 {
            return Err(Error::Contract(format!("labels are 0 or 1, got {label}")));
        }
        Ok(LabeledSample { features, label })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifierSpec {
    pub num_qubits: usize,
    pub ansatz_reps: usize,
    /// Predict label 1 when `⟨Z₀⟩` falls below this.
    pub decision_threshold: f64,
    /// Noise trajectories averaged per noisy expectation.
    pub trajectories: usize,
}

impl Default for ClassifierSpec {
    fn default() -> Self {
        ClassifierSpec {
            num_qubits: 3,
            ansatz_reps: 2,
            decision_threshold: 0.0,
            trajectories: 256,
        }
    }
}

impl ClassifierSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_qubits * 3 != FEATURES {
            return Err(Error::Contract(format!(
                "the feature map places 3 features per qubit; {FEATURES} features need 3 qubits, got {}",
                self.num_qubits
            )));
        }
        if self.trajectories == 0 {
            return Err(Error::Contract("trajectories must be positive".into()));
        }
        if !(-1.0..=1.0).contains(&self.decision_threshold) {
            return Err(Error::Contract("decision_threshold must lie in [-1, 1]".into()));
        }
        Ok(())
    }

    pub fn param_count(&self) -> usize {
        self.num_qubits * (self.ansatz_reps + 1)
    }
}

/// Qubit `q` gets `RY(f[3q])`, `RX(f[3q+1])`, `RZ(f[3q+2])`.
pub fn feature_map_circuit(features: &[f64]) -> Result<Circuit> {
    if features.len() != FEATURES {
        return Err(Error::Shape(format!(
            "feature map takes {FEATURES} features, got {}",
            features.len()
        )));
    }
    let mut c = Circuit::new(FEATURES / 3);
    for q in 0..FEATURES / 3 {
        c.ry(q, features[3 * q])?;
        c.rx(q, features[3 * q + 1])?;
        c.rz(q, features[3 * q + 2])?;
    }
    Ok(c)
}

/// RY on every qubit, then `ansatz_reps` times a CNOT on every pair followed
/// by another RY layer.
pub fn variational_circuit(spec: &ClassifierSpec) -> Result<Circuit> {
    let n = spec.num_qubits;
    let mut c = Circuit::new(n);
    let ry_layer = |c: &mut Circuit| -> Result<()> {
        for q in 0..n {
            let a = c.new_param();
            c.ry(q, a)?;
        }
        Ok(())
    };
    ry_layer(&mut c)?;
    for _ in 0..spec.ansatz_reps {
        for i in 0..n {
            for j in i + 1..n {
                c.cnot(i, j)?;
            }
        }
        ry_layer(&mut c)?;
    }
    Ok(c)
}

fn z0(state: &StateVector) -> f64 {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| if i & 1 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
        .sum()
}

fn encode(features: &[f64]) -> Result<StateVector> {
    apply_circuit(&StateVector::zero(FEATURES / 3), &feature_map_circuit(features)?, &[])
}

/// `⟨Z₀⟩` after the feature map and the variational block.
///
/// With `noise`, the value is the mean over `spec.trajectories` Pauli-error
/// trajectories, scaled by `1 − 2·p_readout` for symmetric readout flips.
pub fn classifier_expectation(
    spec: &ClassifierSpec,
    features: &[f64],
    params: &[f64],
    noise: Option<&NoiseSpec>,
    seed: u64,
) -> Result<f64> {
    spec.validate()?;
    let circuit = variational_circuit(spec)?;
    let encoded = encode(features)?;
    expectation_from(&circuit, spec, &encoded, params, noise, seed)
}

fn expectation_from(
    circuit: &Circuit,
    spec: &ClassifierSpec,
    encoded: &StateVector,
    params: &[f64],
    noise: Option<&NoiseSpec>,
    seed: u64,
) -> Result<f64> {
    match noise {
        None => Ok(z0(&apply_circuit(encoded, circuit, params)?)),
        Some(n) => {
            n.validate()?;
            let mut total = 0.0;
            for t in 0..spec.trajectories {
                let s = apply_circuit_noisy(encoded, circuit, params, n, derive_indexed(seed, "trajectory", t as u64))?;
                total += z0(&s);
            }
            Ok(total / spec.trajectories as f64 * (1.0 - 2.0 * n.p_readout))
        }
    }
}

fn label_target(label: u8) -> f64 {
    if label == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedClassifier {
    pub params: Vec<f64>,
    pub cost: f64,
    pub cost_trace: Vec<f64>,
}

fn check_classes(samples: &[LabeledSample]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::DegenerateInput("no training samples".into()));
    }
    let ones = samples.iter().filter(|s| s.label == 1).count();
    if ones == 0 || ones == samples.len() {
        return Err(Error::DegenerateInput("training data contains a single class".into()));
    }
    Ok(())
}

/// Fits the variational angles by dual annealing on the mean squared error
/// between `⟨Z₀⟩` and `+1` (label 0) / `−1` (label 1). Training is noiseless.
///
/// `config.bounds` must hold one interval per variational parameter.
pub fn train(samples: &[LabeledSample], config: &AnnealConfig, spec: &ClassifierSpec) -> Result<TrainedClassifier> {
    spec.validate()?;
    check_classes(samples)?;
    if config.bounds.len() != spec.param_count() {
        return Err(Error::ParameterCount {
            expected: spec.param_count(),
            got: config.bounds.len(),
        });
    }
    let circuit = variational_circuit(spec)?;
    let encoded: Vec<StateVector> = samples.iter().map(|s| encode(&s.features)).collect::<Result<_>>()?;
    let targets: Vec<f64> = samples.iter().map(|s| label_target(s.label)).collect();
    let mut loss = |params: &[f64]| -> f64 {
        let sq: f64 = encoded
            .par_iter()
            .zip(targets.par_iter())
            .with_min_len(64)
            .map(|(e, t)| match apply_circuit(e, &circuit, params) {
                Ok(s) => (z0(&s) - t).powi(2),
                Err(_) => f64::MAX,
            })
            .sum();
        sq / encoded.len() as f64
    };
    let outcome = dual_annealing(&mut loss, config)?;
    Ok(TrainedClassifier {
        params: outcome.best_params,
        cost: outcome.best_cost,
        cost_trace: outcome.cost_trace,
    })
}

/// Predicted labels for `samples`.
pub fn predict(
    samples: &[LabeledSample],
    params: &[f64],
    spec: &ClassifierSpec,
    noise: Option<&NoiseSpec>,
    seed: u64,
) -> Result<Vec<u8>> {
    spec.validate()?;
    let circuit = variational_circuit(spec)?;
    samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let e = expectation_from(
                &circuit,
                spec,
                &encode(&s.features)?,
                params,
                noise,
                derive_indexed(seed, "predict", i as u64),
            )?;
            Ok(u8::from(e < spec.decision_threshold))
        })
        .collect()
}

/// Classification scores with label 1 as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    /// `None` for an aggregate row.
    pub fold_index: Option<usize>,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

impl FoldMetrics {
    pub fn from_predictions(fold_index: Option<usize>, truth: &[u8], predicted: &[u8]) -> Result<Self> {
        if truth.len() != predicted.len() || truth.is_empty() {
            return Err(Error::Shape("predictions and labels must be nonempty and equally long".into()));
        }
        let (mut tp, mut fp, mut fn_, mut tn) = (0usize, 0usize, 0usize, 0usize);
        for (&t, &p) in truth.iter().zip(predicted) {
            match (t, p) {
                (1, 1) => tp += 1,
                (0, 1) => fp += 1,
                (1, 0) => fn_ += 1,
                _ => tn += 1,
            }
        }
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        Ok(FoldMetrics {
            fold_index,
            accuracy: ratio(tp + tn, truth.len()),
            precision,
            recall,
            f1: harmonic(precision, recall),
        })
    }

    /// Mean accuracy, precision and recall over `folds`; F1 is recomputed
    /// from the mean precision and recall.
    pub fn mean(folds: &[FoldMetrics]) -> FoldMetrics {
        let m = folds.len().max(1) as f64;
        let avg = |f: fn(&FoldMetrics) -> f64| folds.iter().map(f).sum::<f64>() / m;
        let precision = avg(|f| f.precision);
        let recall = avg(|f| f.recall);
        FoldMetrics {
            fold_index: None,
            accuracy: avg(|f| f.accuracy),
            precision,
            recall,
            f1: harmonic(precision, recall),
        }
    }

    /// Each score divided by the matching `baseline` score (NaN where the
    /// baseline is zero).
    pub fn relative_to(&self, baseline: &FoldMetrics) -> FoldMetrics {
        let r = |a: f64, b: f64| if b == 0.0 { f64::NAN } else { a / b };
        FoldMetrics {
            fold_index: self.fold_index,
            accuracy: r(self.accuracy, baseline.accuracy),
            precision: r(self.precision, baseline.precision),
            recall: r(self.recall, baseline.recall),
            f1: r(self.f1, baseline.f1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub folds: Vec<FoldMetrics>,
    pub mean: FoldMetrics,
}

impl CvReport {
    fn from_folds(folds: Vec<FoldMetrics>) -> Self {
        let mean = FoldMetrics::mean(&folds);
        CvReport { folds, mean }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    pub ideal: CvReport,
    /// The ideal-trained parameters of each fold scored under noise.
    pub noisy: Option<CvReport>,
    pub fold_params: Vec<Vec<f64>>,
}

/// Test-fold index of every sample. Each class is shuffled and dealt
/// round-robin, so every fold holds both classes when each class has at
/// least `folds` members.
pub fn stratified_folds(samples: &[LabeledSample], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::Contract(format!("need at least 2 folds, got {folds}")));
    }
    if samples.len() < folds {
        return Err(Error::Contract(format!(
            "{} samples cannot fill {folds} folds",
            samples.len()
        )));
    }
    let mut rng = rng_from_seed(derive_seed(seed, "folds"));
    let mut assignment = vec![0; samples.len()];
    for class in 0..=1u8 {
        let mut members: Vec<usize> = (0..samples.len()).filter(|&i| samples[i].label == class).collect();
        if members.len() < folds {
            return Err(Error::Stratification(format!(
                "class {class} has {} samples, fewer than {folds} folds",
                members.len()
            )));
        }
        members.shuffle(&mut rng);
        for (k, i) in members.into_iter().enumerate() {
            assignment[i] = k % folds;
        }
    }
    Ok(assignment)
}

fn split(samples: &[LabeledSample], assignment: &[usize], fold: usize) -> (Vec<LabeledSample>, Vec<LabeledSample>) {
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (s, &a) in samples.iter().zip(assignment) {
        if a == fold {
            test.push(s.clone());
        } else {
            train.push(s.clone());
        }
    }
    (train, test)
}

/// Stratified k-fold cross-validation of the quantum classifier.
///
/// Each fold trains with a seed derived from `seed` and the fold index.
/// When `noise` is given, the trained parameters are also scored under it.
pub fn cross_validate(
    samples: &[LabeledSample],
    config: &AnnealConfig,
    spec: &ClassifierSpec,
    folds: usize,
    seed: u64,
    noise: Option<&NoiseSpec>,
) -> Result<CvOutcome> {
    let assignment = stratified_folds(samples, folds, seed)?;
    let mut ideal = Vec::with_capacity(folds);
    let mut noisy = Vec::with_capacity(folds);
    let mut fold_params = Vec::with_capacity(folds);
    for fold in 0..folds {
        let (train_set, test_set) = split(samples, &assignment, fold);
        let mut c = config.clone();
        c.seed = derive_indexed(seed, "fold-train", fold as u64);
        let trained = train(&train_set, &c, spec)?;
        let truth: Vec<u8> = test_set.iter().map(|s| s.label).collect();
        let pred = predict(&test_set, &trained.params, spec, None, 0)?;
        ideal.push(FoldMetrics::from_predictions(Some(fold), &truth, &pred)?);
        if let Some(n) = noise {
            let pred = predict(&test_set, &trained.params, spec, Some(n), derive_indexed(seed, "fold-noise", fold as u64))?;
            noisy.push(FoldMetrics::from_predictions(Some(fold), &truth, &pred)?);
        }
        fold_params.push(trained.params);
    }
    Ok(CvOutcome {
        ideal: CvReport::from_folds(ideal),
        noisy: noise.map(|_| CvReport::from_folds(noisy)),
        fold_params,
    })
}

pub const BASELINE_L2: f64 = 1e-3;
pub const BASELINE_STEP: f64 = 0.1;
pub const BASELINE_EPOCHS: usize = 500;

/// L2-regularized logistic regression fitted by full-batch gradient descent
/// on standardized features. Returns `(weights, bias, mean, scale)`.
fn fit_logistic(train: &[LabeledSample]) -> (Vec<f64>, f64, Vec<f64>, Vec<f64>) {
    let m = train.len() as f64;
    let mut mean = vec![0.0; FEATURES];
    for s in train {
        for (acc, x) in mean.iter_mut().zip(&s.features) {
            *acc += x / m;
        }
    }
    let mut scale = vec![0.0; FEATURES];
    for s in train {
        for k in 0..FEATURES {
            scale[k] += (s.features[k] - mean[k]).powi(2) / m;
        }
    }
    for v in &mut scale {
        *v = if *v > 0.0 { v.sqrt() } else { 1.0 };
    }
    let xs: Vec<[f64; FEATURES]> = train
        .iter()
        .map(|s| std::array::from_fn(|k| (s.features[k] - mean[k]) / scale[k]))
        .collect();
    let mut w = vec![0.0; FEATURES];
    let mut b = 0.0;
    for _ in 0..BASELINE_EPOCHS {
        let mut gw = [0.0; FEATURES];
        let mut gb = 0.0;
        for (x, s) in xs.iter().zip(train) {
            let z: f64 = b + w.iter().zip(x).map(|(wi, xi)| wi * xi).sum::<f64>();
            let err = 1.0 / (1.0 + (-z).exp()) - s.label as f64;
            for k in 0..FEATURES {
                gw[k] += err * x[k] / m;
            }
            gb += err / m;
        }
        for k in 0..FEATURES {
            w[k] -= BASELINE_STEP * (gw[k] + BASELINE_L2 * w[k]);
        }
        b -= BASELINE_STEP * gb;
    }
    (w, b, mean, scale)
}

/// Cross-validated logistic regression on the same stratified folds that
/// [`cross_validate`] uses for the same `seed`.
pub fn logistic_baseline(samples: &[LabeledSample], folds: usize, seed: u64) -> Result<CvReport> {
    let assignment = stratified_folds(samples, folds, seed)?;
    let mut rows = Vec::with_capacity(folds);
    for fold in 0..folds {
        let (train_set, test_set) = split(samples, &assignment, fold);
        let (w, b, mean, scale) = fit_logistic(&train_set);
        let pred: Vec<u8> = test_set
            .iter()
            .map(|s| {
                let z: f64 = b + (0..FEATURES)
                    .map(|k| w[k] * (s.features[k] - mean[k]) / scale[k])
                    .sum::<f64>();
                u8::from(z >= 0.0)
            })
            .collect();
        let truth: Vec<u8> = test_set.iter().map(|s| s.label).collect();
        rows.push(FoldMetrics::from_predictions(Some(fold), &truth, &pred)?);
    }
    Ok(CvReport::from_folds(rows))
}

/// Cuts two CE series into consecutive non-overlapping blocks of nine
/// values: `per_class` samples labelled 0 from `class0` and as many labelled
/// 1 from `class1`.
pub fn assemble_samples(class0: &[f64], class1: &[f64], per_class: usize) -> Result<Vec<LabeledSample>> {
    let mut out = Vec::with_capacity(2 * per_class);
    for (label, values) in [(0u8, class0), (1u8, class1)] {
        if values.len() < per_class * FEATURES {
            return Err(Error::DegenerateInput(format!(
                "class {label} has {} CE values; {per_class} samples need {}",
                values.len(),
                per_class * FEATURES
            )));
        }
        for block in values.chunks_exact(FEATURES).take(per_class) {
            out.push(LabeledSample::new(block, label)?);
        }
    }
    Ok(out)
}

/// Dual-annealing settings for the classifier: one `[−2π, 2π]` interval per
/// variational angle.
pub fn classifier_anneal_config(spec: &ClassifierSpec, max_iterations: usize, seed: u64) -> AnnealConfig {
    let mut c = AnnealConfig::new(spec.param_count(), spec.num_qubits);
    c.max_iterations = max_iterations;
    c.seed = seed;
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::Normal;
    use std::f64::consts::PI;

    fn toy(per_class: usize, seed: u64) -> Vec<LabeledSample> {
        let mut rng = rng_from_seed(seed);
        let mut out = Vec::new();
        for (label, mu) in [(0u8, 0.1), (1u8, 0.9)] {
            let n = Normal::new(mu, 0.01).unwrap();
            for _ in 0..per_class {
                let f: Vec<f64> = (0..FEATURES).map(|_| rng.sample(n)).collect();
                out.push(LabeledSample::new(&f, label).unwrap());
            }
        }
        out
    }

    #[test]
    fn expectation_examples() {
        let spec = ClassifierSpec::default();
        let zeros = [0.0; 9];
        assert!((classifier_expectation(&spec, &zeros, &zeros, None, 0).unwrap() - 1.0).abs() < 1e-12);
        let mut flip = [0.0; 9];
        flip[0] = PI;
        assert!((classifier_expectation(&spec, &flip, &zeros, None, 0).unwrap() + 1.0).abs() < 1e-12);
        assert!(classifier_expectation(&spec, &zeros, &[0.0; 8], None, 0).is_err());
        assert!(feature_map_circuit(&[0.0; 8]).is_err());
        assert_eq!(variational_circuit(&spec).unwrap().num_symbolic_params(), 9);
    }

    #[test]
    fn distinct_features_give_distinct_states() {
        let a = encode(&[0.3, 0.1, 0.7, 1.1, 0.2, 0.5, 0.9, 1.3, 0.4]).unwrap();
        let b = encode(&[0.5, 0.2, 0.1, 0.3, 0.8, 0.6, 0.2, 0.1, 0.7]).unwrap();
        assert!(crate::sim::inner_product(&a, &b).unwrap().norm_sqr() < 1.0 - 1e-6);
    }

    #[test]
    fn noisy_expectation_stays_in_range() {
        let spec = ClassifierSpec {
            trajectories: 32,
            ..Default::default()
        };
        let noise = NoiseSpec::default();
        let f = [0.4, 0.3, 0.2, 0.1, 0.5, 0.6, 0.7, 0.8, 0.9];
        let p = [0.3; 9];
        let v = classifier_expectation(&spec, &f, &p, Some(&noise), 3).unwrap();
        assert!((-1.0..=1.0).contains(&v));
        let quiet = classifier_expectation(&spec, &f, &p, Some(&NoiseSpec::noiseless()), 3).unwrap();
        let ideal = classifier_expectation(&spec, &f, &p, None, 3).unwrap();
        assert!((quiet - ideal).abs() < 1e-12);
    }

    #[test]
    fn separable_toy_trains() {
        let data = toy(40, 1);
        let spec = ClassifierSpec::default();
        let cfg = classifier_anneal_config(&spec, 200, 2);
        let trained = train(&data, &cfg, &spec).unwrap();
        let pred = predict(&data, &trained.params, &spec, None, 0).unwrap();
        let truth: Vec<u8> = data.iter().map(|s| s.label).collect();
        let m = FoldMetrics::from_predictions(None, &truth, &pred).unwrap();
        assert!(m.accuracy >= 0.95, "{m:?}");
        assert_eq!(train(&data, &cfg, &spec).unwrap().params, trained.params);
    }

    #[test]
    fn zero_budget_and_single_class() {
        let data = toy(10, 4);
        let spec = ClassifierSpec::default();
        let cfg = classifier_anneal_config(&spec, 0, 2);
        let t = train(&data, &cfg, &spec).unwrap();
        assert_eq!(t.cost_trace.len(), 1);
        assert!(train(&data[..10], &cfg, &spec).is_err());
    }

    #[test]
    fn metrics_examples() {
        let m = FoldMetrics::from_predictions(Some(0), &[1, 1, 0, 0], &[1, 0, 1, 0]).unwrap();
        assert_eq!((m.accuracy, m.precision, m.recall, m.f1), (0.5, 0.5, 0.5, 0.5));
        // Constant predictor on balanced labels.
        let m = FoldMetrics::from_predictions(None, &[1, 0, 1, 0], &[0, 0, 0, 0]).unwrap();
        assert_eq!((m.accuracy, m.precision, m.f1), (0.5, 0.0, 0.0));
        let mean = FoldMetrics::mean(&[
            FoldMetrics::from_predictions(None, &[1, 0], &[1, 0]).unwrap(),
            FoldMetrics::from_predictions(None, &[1, 0], &[1, 1]).unwrap(),
        ]);
        assert_eq!(mean.accuracy, 0.75);
        assert!((mean.f1 - harmonic(mean.precision, mean.recall)).abs() < 1e-15);
    }

    #[test]
    fn folds_are_stratified() {
        let data = toy(23, 5);
        let a = stratified_folds(&data, 5, 9).unwrap();
        for f in 0..5 {
            let members: Vec<_> = (0..data.len()).filter(|&i| a[i] == f).collect();
            assert!(members.iter().any(|&i| data[i].label == 0));
            assert!(members.iter().any(|&i| data[i].label == 1));
        }
        assert_eq!(a, stratified_folds(&data, 5, 9).unwrap());
        assert!(matches!(stratified_folds(&data[..26], 5, 0), Err(Error::Stratification(_))));
        assert!(stratified_folds(&data[..3], 5, 0).is_err());
    }

    #[test]
    fn baseline_on_separable_and_random_labels() {
        let data = toy(50, 6);
        assert!(logistic_baseline(&data, 5, 1).unwrap().mean.accuracy >= 0.95);
        let mut rng = rng_from_seed(17);
        let mut shuffled: Vec<LabeledSample> = (0..400)
            .map(|i| {
                let f: Vec<f64> = (0..FEATURES).map(|_| rng.random::<f64>()).collect();
                LabeledSample::new(&f, (i % 2) as u8).unwrap()
            })
            .collect();
        shuffled.shuffle(&mut rng);
        let acc = logistic_baseline(&shuffled, 5, 1).unwrap().mean.accuracy;
        assert!((0.4..=0.6).contains(&acc), "{acc}");
        assert_eq!(logistic_baseline(&shuffled, 5, 1).unwrap(), logistic_baseline(&shuffled, 5, 1).unwrap());
    }

    #[test]
    fn assembly_blocks() {
        let low: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let high: Vec<f64> = (0..18).map(|i| 100.0 + i as f64).collect();
        let s = assemble_samples(&low, &high, 2).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s[1].features[0], 9.0);
        assert_eq!(s[2].label, 1);
        assert!(assemble_samples(&low, &high, 3).is_err());
    }
}
