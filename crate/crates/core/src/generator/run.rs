use serde::{Deserialize, Serialize};

use crate::ansatz::{build_ansatz, AnsatzSpec};
use crate::error::Result;
use crate::rng::derive_seed;

use super::anneal::{dual_annealing, AnnealConfig};
use super::haar::sample_haar_product;
use super::objective::{evaluate_on, GenerationObjective};
use super::target::TargetDistribution;

/// A finished generator training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRun {
    pub ansatz: AnsatzSpec,
    pub target: TargetDistribution,
    pub config: AnnealConfig,
    pub best_params: Vec<f64>,
    pub best_cost: f64,
    /// TVD of `best_params` on a held-out input ensemble, without penalty.
    pub final_tvd: f64,
    /// The optimizer's random starting point and its held-out TVD.
    pub initial_params: Vec<f64>,
    pub initial_tvd: f64,
    pub cost_trace: Vec<f64>,
    pub evaluations: usize,
    pub seed: u64,
}

/// Fits the angles of `ansatz` so the CE histogram of its outputs on product
/// inputs matches `target`.
pub fn train_generator(
    ansatz: &AnsatzSpec,
    target: &TargetDistribution,
    config: &AnnealConfig,
) -> Result<GenerationRun> {
    let circuit = build_ansatz(ansatz)?;
    let mut objective = GenerationObjective::new(&circuit, target, config)?;
    let outcome = dual_annealing(&mut objective, config)?;
    if let Some(err) = objective.take_error() {
        return Err(err);
    }
    let final_tvd = holdout_tvd(ansatz, target, config, &outcome.best_params)?;
    let initial_tvd = holdout_tvd(ansatz, target, config, &outcome.initial_params)?;
    Ok(GenerationRun {
        ansatz: *ansatz,
        target: target.clone(),
        config: config.clone(),
        best_params: outcome.best_params,
        best_cost: outcome.best_cost,
        final_tvd,
        initial_params: outcome.initial_params,
        initial_tvd,
        cost_trace: outcome.cost_trace,
        evaluations: outcome.evaluations,
        seed: config.seed,
    })
}

/// Penalty-free TVD of `params` on the run's held-out ensemble of
/// `holdout_samples` inputs.
pub fn holdout_tvd(
    ansatz: &AnsatzSpec,
    target: &TargetDistribution,
    config: &AnnealConfig,
    params: &[f64],
) -> Result<f64> {
    let circuit = build_ansatz(ansatz)?;
    let inputs = sample_haar_product(
        ansatz.num_qubits,
        config.holdout_samples,
        derive_seed(config.seed, "holdout"),
        config.true_haar,
    );
    Ok(evaluate_on(&circuit, target, config, params, &inputs, 0.0, 0)?.tvd)
}
