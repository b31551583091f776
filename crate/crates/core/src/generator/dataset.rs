use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::ansatz::build_ansatz;
use crate::error::{Error, Result};
use crate::rng::{derive_indexed, derive_seed};
use crate::sim::{apply_circuit, apply_circuit_noisy, NoiseSpec, StateVector};

use super::haar::sample_haar_product;
use super::objective::CeEstimator;
use super::run::GenerationRun;

/// Provenance of a dataset. `entries` holds free-form key/value pairs
/// (ansatz, target, regime labels); `config` is the resolved configuration
/// text that reproduces the file, when the dataset came from the CLI.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DatasetMetadata {
    pub kind: String,
    pub seed: u64,
    pub shots: usize,
    pub noise: Option<NoiseSpec>,
    pub estimator: String,
    pub entries: BTreeMap<String, String>,
    pub config: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub states: Vec<StateVector>,
    pub ce_values: Vec<f64>,
    pub metadata: DatasetMetadata,
}

impl Dataset {
    pub fn new(states: Vec<StateVector>, ce_values: Vec<f64>, metadata: DatasetMetadata) -> Result<Self> {
        if states.len() != ce_values.len() {
            return Err(Error::Shape(format!(
                "{} states but {} CE values",
                states.len(),
                ce_values.len()
            )));
        }
        if let Some(first) = states.first() {
            if states.iter().any(|s| s.num_qubits() != first.num_qubits()) {
                return Err(Error::Shape("dataset states differ in qubit count".into()));
            }
        }
        Ok(Dataset {
            states,
            ce_values,
            metadata,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn num_qubits(&self) -> Option<usize> {
        self.states.first().map(|s| s.num_qubits())
    }
}

/// Transforms `count` fresh product inputs through the trained circuit and
/// records each output's CE.
///
/// With `noise`, each state is one Pauli-error trajectory. With `shots > 0`
/// and a sampling estimator (NZP, CE₁) the CE is estimated from readouts;
/// the exact estimators ignore `shots`.
pub fn generate_dataset(
    run: &GenerationRun,
    count: usize,
    seed: u64,
    shots: usize,
    noise: Option<&NoiseSpec>,
) -> Result<Dataset> {
    let circuit = build_ansatz(&run.ansatz)?;
    if let Some(n) = noise {
        n.validate()?;
    }
    let estimator = run.config.ce_method;
    let inputs = sample_haar_product(run.ansatz.num_qubits, count, derive_seed(seed, "dataset-inputs"), run.config.true_haar);
    let rows: Vec<(StateVector, f64)> = inputs
        .par_iter()
        .enumerate()
        .with_min_len(8)
        .map(|(i, input)| {
            let state = match noise {
                Some(n) => apply_circuit_noisy(
                    input,
                    &circuit,
                    &run.best_params,
                    n,
                    derive_indexed(seed, "dataset-noise", i as u64),
                )?,
                None => apply_circuit(input, &circuit, &run.best_params)?,
            };
            let ce = estimator.estimate(&state, shots, derive_indexed(seed, "dataset-shots", i as u64))?;
            Ok((state, ce))
        })
        .collect::<Result<_>>()?;
    let (states, ce_values) = rows.into_iter().unzip();

    let mut entries = BTreeMap::new();
    entries.insert("ansatz".to_string(), run.ansatz.to_string());
    entries.insert("target".to_string(), run.target.label());
    entries.insert("training_seed".to_string(), run.seed.to_string());
    entries.insert("final_tvd".to_string(), format!("{}", run.final_tvd));
    let metadata = DatasetMetadata {
        kind: "generated".to_string(),
        seed,
        shots: if estimator.uses_shots() { shots } else { 0 },
        noise: noise.copied(),
        estimator: estimator.to_string(),
        entries,
        config: None,
    };
    Dataset::new(states, ce_values, metadata)
}

/// CE of every state recomputed with `estimator` in analytic mode.
pub fn recompute_ce(dataset: &Dataset, estimator: CeEstimator) -> Result<Vec<f64>> {
    dataset.states.iter().map(|s| estimator.estimate(s, 0, 0)).collect()
}
