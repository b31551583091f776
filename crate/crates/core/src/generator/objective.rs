use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diversity::{diversity_penalty, random_pair_report};
use crate::entanglement::{bin_index, ce1_swap_bounds, ce_full, ce_k, nzp, nzp_sampled, tvd_masses};
use crate::error::{Error, Result};
use crate::rng::derive_indexed;
use crate::sim::{apply_circuit, Circuit, StateVector};

use super::anneal::{AnnealConfig, Objective};
use super::haar::sample_haar_product;
use super::target::TargetDistribution;

/// Which CE estimator scores generated states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CeEstimator {
    /// Exact power-set CE.
    Full,
    /// Size-k restricted CE.
    SizeK(usize),
    /// Probability of leaving the all-zeros outcome.
    Nzp,
    /// Single-qubit SWAP-test CE₁ (the point estimate, not the bounds).
    Ce1,
}

impl CeEstimator {
    /// CE of one state. `shots = 0` means analytic; otherwise estimators
    /// with a sampled form draw `shots` readouts from `seed`.
    pub fn estimate(&self, state: &StateVector, shots: usize, seed: u64) -> Result<f64> {
        Ok(match *self {
            CeEstimator::Full => ce_full(state)?.value,
            CeEstimator::SizeK(k) => ce_k(state, k)?.value,
            CeEstimator::Nzp if shots == 0 => nzp(state).value,
            CeEstimator::Nzp => nzp_sampled(state, shots, seed)?.value,
            CeEstimator::Ce1 => ce1_swap_bounds(state, shots, seed)?.value,
        })
    }

    /// Whether `shots > 0` changes the estimate.
    pub fn uses_shots(&self) -> bool {
        matches!(self, CeEstimator::Nzp | CeEstimator::Ce1)
    }
}

impl fmt::Display for CeEstimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CeEstimator::Full => f.write_str("full"),
            CeEstimator::SizeK(k) => write!(f, "ce_k:{k}"),
            CeEstimator::Nzp => f.write_str("nzp"),
            CeEstimator::Ce1 => f.write_str("ce1"),
        }
    }
}

impl FromStr for CeEstimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(CeEstimator::Full),
            "nzp" => Ok(CeEstimator::Nzp),
            "ce1" => Ok(CeEstimator::Ce1),
            other => other
                .strip_prefix("ce_k:")
                .and_then(|k| k.parse().ok())
                .map(CeEstimator::SizeK)
                .ok_or_else(|| {
                    Error::Contract(format!(
                        "unknown CE estimator {other:?} (expected full, nzp, ce1 or ce_k:<k>)"
                    ))
                }),
        }
    }
}

impl TryFrom<String> for CeEstimator {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CeEstimator> for String {
    fn from(e: CeEstimator) -> String {
        e.to_string()
    }
}

/// Cost of one parameter vector, split into its parts.
#[derive(Debug, Clone, PartialEq)]
pub struct CostBreakdown {
    pub tvd: f64,
    pub penalty: f64,
    pub cost: f64,
    pub ce_values: Vec<f64>,
    pub masses: Vec<f64>,
}

/// `TVD(generated CE histogram, target) + diversity penalty`, with a fresh
/// input batch per epoch.
pub struct GenerationObjective<'a> {
    circuit: &'a Circuit,
    target: &'a TargetDistribution,
    config: &'a AnnealConfig,
    batches: HashMap<u64, Vec<StateVector>>,
    first_error: Option<Error>,
}

impl<'a> GenerationObjective<'a> {
    pub fn new(circuit: &'a Circuit, target: &'a TargetDistribution, config: &'a AnnealConfig) -> Result<Self> {
        config.validate(circuit.num_qubits())?;
        if config.bounds.len() != circuit.num_symbolic_params() {
            return Err(Error::ParameterCount {
                expected: circuit.num_symbolic_params(),
                got: config.bounds.len(),
            });
        }
        Ok(GenerationObjective {
            circuit,
            target,
            config,
            batches: HashMap::new(),
            first_error: None,
        })
    }

    /// Input product states for `epoch`, drawn from a seed derived from the
    /// run seed and the epoch.
    pub fn inputs(&mut self, epoch: u64) -> &[StateVector] {
        let n = self.circuit.num_qubits();
        let count = self.config.samples_per_eval;
        let seed = derive_indexed(self.config.seed, "inputs", epoch);
        let true_haar = self.config.true_haar;
        // Only the current epoch and the refinement epoch are revisited.
        if !self.batches.contains_key(&epoch) && self.batches.len() >= 2 {
            self.batches.clear();
        }
        self.batches
            .entry(epoch)
            .or_insert_with(|| sample_haar_product(n, count, seed, true_haar))
    }

    pub fn breakdown(&mut self, params: &[f64], epoch: u64) -> Result<CostBreakdown> {
        let circuit = self.circuit;
        let target = self.target;
        let config = self.config;
        let inputs = self.inputs(epoch).to_vec();
        evaluate_on(circuit, target, config, params, &inputs, config.diversity_weight, epoch)
    }

    /// The first error hit while the optimizer was calling `evaluate`, which
    /// has to return a plain number.
    pub fn take_error(&mut self) -> Option<Error> {
        self.first_error.take()
    }
}

impl Objective for GenerationObjective<'_> {
    fn evaluate(&mut self, params: &[f64], epoch: u64) -> f64 {
        match self.breakdown(params, epoch) {
            Ok(b) => b.cost,
            Err(e) => {
                self.first_error.get_or_insert(e);
                f64::MAX
            }
        }
    }

    fn is_stochastic(&self) -> bool {
        true
    }
}

/// Scores `params` on a given input batch. `penalty_weight = 0` skips the
/// SWAP statistics entirely.
pub fn evaluate_on(
    circuit: &Circuit,
    target: &TargetDistribution,
    config: &AnnealConfig,
    params: &[f64],
    inputs: &[StateVector],
    penalty_weight: f64,
    epoch: u64,
) -> Result<CostBreakdown> {
    if inputs.is_empty() {
        return Err(Error::DegenerateInput("objective needs at least one input".into()));
    }
    let estimator = config.ce_method;
    let scored: Vec<(StateVector, f64)> = inputs
        .par_iter()
        .with_min_len(8)
        .map(|s| {
            let out = apply_circuit(s, circuit, params)?;
            let ce = estimator.estimate(&out, 0, 0)?;
            Ok((out, ce))
        })
        .collect::<Result<_>>()?;
    let (outputs, ce_values): (Vec<StateVector>, Vec<f64>) = scored.into_iter().unzip();

    let mut counts = vec![0usize; target.masses.len()];
    for &v in &ce_values {
        counts[bin_index(v, &target.bin_edges).0] += 1;
    }
    let masses: Vec<f64> = counts.iter().map(|&c| c as f64 / ce_values.len() as f64).collect();
    let tvd = tvd_masses(&masses, &target.masses);

    let penalty = if penalty_weight > 0.0 && outputs.len() >= 2 && config.diversity_pairs > 0 {
        let report = random_pair_report(
            &outputs,
            config.diversity_pairs,
            config.diversity_threshold,
            derive_indexed(config.seed, "penalty", epoch),
        )?;
        diversity_penalty(&report, penalty_weight)
    } else {
        0.0
    };
    Ok(CostBreakdown {
        tvd,
        penalty,
        cost: tvd + penalty,
        ce_values,
        masses,
    })
}
