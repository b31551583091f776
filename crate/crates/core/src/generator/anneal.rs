use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::entanglement::MAX_FULL_QUBITS;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};

use super::objective::CeEstimator;

/// Largest jump magnitude the visiting distribution may produce, per coordinate.
const TAIL_LIMIT: f64 = 1.0e8;
/// Minimum offset from the lower bound after wrapping.
const MIN_VISIT_BOUND: f64 = 1.0e-10;
/// Fraction of the initial temperature below which the chain restarts.
const RESTART_TEMPERATURE_RATIO: f64 = 2.0e-5;

/// Something dual annealing can minimize.
///
/// `epoch` identifies the annealing iteration; stochastic objectives use it to
/// draw a fresh input batch, deterministic ones ignore it.
pub trait Objective {
    fn evaluate(&mut self, params: &[f64], epoch: u64) -> f64;

    /// Whether values at the same point differ between epochs. The optimizer
    /// then re-scores its current location at the start of each iteration.
    fn is_stochastic(&self) -> bool {
        false
    }
}

impl<F: FnMut(&[f64]) -> f64> Objective for F {
    fn evaluate(&mut self, params: &[f64], _epoch: u64) -> f64 {
        self(params)
    }
}

/// Optimizer settings plus the knobs of the generation objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    pub bounds: Vec<[f64; 2]>,
    pub max_iterations: usize,
    pub initial_temperature: f64,
    pub visiting_shape: f64,
    pub acceptance_shape: f64,
    pub local_search: bool,
    pub seed: u64,
    pub samples_per_eval: usize,
    pub ce_method: CeEstimator,
    pub diversity_weight: f64,
    pub diversity_pairs: usize,
    pub diversity_threshold: f64,
    pub true_haar: bool,
    pub holdout_samples: usize,
}

impl AnnealConfig {
    /// Defaults for `param_count` angles on `num_qubits` qubits.
    pub fn new(param_count: usize, num_qubits: usize) -> Self {
        AnnealConfig {
            bounds: vec![[-TAU, TAU]; param_count],
            max_iterations: 1000,
            initial_temperature: 5230.0,
            visiting_shape: 2.62,
            acceptance_shape: -5.0,
            local_search: true,
            seed: 0,
            samples_per_eval: 200,
            ce_method: if num_qubits <= 8 {
                CeEstimator::Full
            } else {
                CeEstimator::Nzp
            },
            diversity_weight: 1.0,
            diversity_pairs: 100,
            diversity_threshold: crate::diversity::DEFAULT_THRESHOLD,
            true_haar: false,
            holdout_samples: 1000,
        }
    }

    /// Checks the optimizer fields. `samples_per_eval` is checked by the
    /// generation objective, since plain function minimization ignores it.
    pub fn validate_optimizer(&self) -> Result<()> {
        if self.bounds.is_empty() {
            return Err(Error::Contract("annealing needs at least one bound".into()));
        }
        for (i, [lo, hi]) in self.bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Contract(format!("bound {i} is not a finite interval: [{lo}, {hi}]")));
            }
        }
        if !(self.visiting_shape > 1.0 && self.visiting_shape < 3.0) {
            return Err(Error::Contract(format!(
                "visiting_shape must lie in (1, 3), got {}",
                self.visiting_shape
            )));
        }
        if !(self.acceptance_shape < 1.0) {
            return Err(Error::Contract(format!(
                "acceptance_shape must be below 1, got {}",
                self.acceptance_shape
            )));
        }
        if !(self.initial_temperature > 0.0) {
            return Err(Error::Contract("initial_temperature must be positive".into()));
        }
        Ok(())
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        self.validate_optimizer()?;
        if self.max_iterations == 0 {
            return Err(Error::Contract("max_iterations must be at least 1".into()));
        }
        if self.samples_per_eval < 10 {
            return Err(Error::Contract(format!(
                "samples_per_eval must be at least 10, got {}",
                self.samples_per_eval
            )));
        }
        if self.holdout_samples == 0 {
            return Err(Error::Contract("holdout_samples must be positive".into()));
        }
        if !(self.diversity_weight >= 0.0) {
            return Err(Error::Contract("diversity_weight must be nonnegative".into()));
        }
        if self.ce_method == CeEstimator::Full && num_qubits > MAX_FULL_QUBITS {
            return Err(Error::Capacity {
                qubits: num_qubits,
                max: MAX_FULL_QUBITS,
                method: "ce_full",
            });
        }
        if let CeEstimator::SizeK(k) = self.ce_method {
            if k == 0 || k >= num_qubits {
                return Err(Error::Contract(format!("ce_k needs 1 <= k < {num_qubits}, got {k}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealOutcome {
    pub best_params: Vec<f64>,
    pub best_cost: f64,
    pub initial_params: Vec<f64>,
    pub initial_cost: f64,
    /// Incumbent cost after each iteration, followed by the refined cost when
    /// local search runs. For stochastic objectives each entry is measured on
    /// that iteration's batch.
    pub cost_trace: Vec<f64>,
    pub evaluations: usize,
}

struct Visitor {
    qv: f64,
    lower: Vec<f64>,
    range: Vec<f64>,
    factor_exponent: f64,
    factor4: f64,
    factor6: f64,
}

impl Visitor {
    fn new(bounds: &[[f64; 2]], qv: f64) -> Self {
        let factor2 = ((4.0 - qv) * (qv - 1.0).ln()).exp();
        let factor3 = ((2.0 - qv) * 2f64.ln() / (qv - 1.0)).exp();
        let factor5 = 1.0 / (qv - 1.0) - 0.5;
        let d1 = 2.0 - factor5;
        let factor6 = PI * (1.0 - factor5) / (PI * (1.0 - factor5)).sin() / ln_gamma(d1).exp();
        Visitor {
            qv,
            lower: bounds.iter().map(|b| b[0]).collect(),
            range: bounds.iter().map(|b| b[1] - b[0]).collect(),
            factor_exponent: 1.0 / (qv - 1.0),
            factor4: PI.sqrt() * factor2 / (factor3 * (3.0 - qv)),
            factor6,
        }
    }

    /// Heavy-tailed step of the Tsallis visiting distribution at `temperature`.
    fn step(&self, temperature: f64, rng: &mut ChaCha8Rng) -> f64 {
        let factor1 = (temperature.ln() * self.factor_exponent).exp();
        let factor4 = self.factor4 * factor1;
        let sigma = (-(self.qv - 1.0) * (self.factor6 / factor4).ln() / (3.0 - self.qv)).exp();
        let x: f64 = sigma * rng.sample::<f64, _>(StandardNormal);
        let y: f64 = rng.sample::<f64, _>(StandardNormal).abs();
        let den = ((self.qv - 1.0) * y.ln() / (3.0 - self.qv)).exp();
        let v = x / den;
        if v.is_finite() {
            v.clamp(-TAIL_LIMIT, TAIL_LIMIT)
        } else if v.is_nan() {
            0.0
        } else {
            TAIL_LIMIT.copysign(v)
        }
    }

    /// Candidate for chain step `j`: the first `dim` steps move every
    /// coordinate, the next `dim` steps move coordinate `j − dim` alone.
    fn visit(&self, current: &[f64], j: usize, temperature: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let dim = current.len();
        let mut x = current.to_vec();
        if j < dim {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = self.wrap(*xi + self.step(temperature, rng), i);
            }
        } else {
            let i = j - dim;
            x[i] = self.wrap(x[i] + self.step(temperature, rng), i);
        }
        x
    }

    fn wrap(&self, value: f64, i: usize) -> f64 {
        let lo = self.lower[i];
        let r = self.range[i];
        let mut v = ((value - lo) % r + r) % r + lo;
        if (v - lo).abs() < MIN_VISIT_BOUND {
            v += MIN_VISIT_BOUND;
        }
        v
    }
}

fn uniform_point(bounds: &[[f64; 2]], rng: &mut ChaCha8Rng) -> Vec<f64> {
    bounds.iter().map(|&[lo, hi]| rng.random_range(lo..hi)).collect()
}

fn finite_or_max(v: f64) -> f64 {
    if v.is_nan() {
        f64::MAX
    } else {
        v
    }
}

/// Generalized simulated annealing with optional coordinate-descent polish.
///
/// Reads the optimizer fields of `config`; the generation-specific fields are
/// ignored here. `max_iterations = 0` scores and returns the random starting
/// point.
pub fn dual_annealing<O: Objective + ?Sized>(objective: &mut O, config: &AnnealConfig) -> Result<AnnealOutcome> {
    config.validate_optimizer()?;
    let bounds = &config.bounds;
    let dim = bounds.len();
    let mut rng = rng_from_seed(derive_seed(config.seed, "anneal"));
    let stochastic = objective.is_stochastic();
    let mut evaluations = 0usize;
    let mut eval = |obj: &mut O, x: &[f64], epoch: u64| {
        evaluations += 1;
        finite_or_max(obj.evaluate(x, epoch))
    };

    let initial_params = uniform_point(bounds, &mut rng);
    let initial_cost = eval(objective, &initial_params, 0);
    let mut current = (initial_params.clone(), initial_cost);
    let mut best = current.clone();
    let mut cost_trace = Vec::with_capacity(config.max_iterations + 1);

    if config.max_iterations == 0 {
        cost_trace.push(initial_cost);
        return Ok(AnnealOutcome {
            best_params: best.0,
            best_cost: best.1,
            initial_params,
            initial_cost,
            cost_trace,
            evaluations,
        });
    }

    let visitor = Visitor::new(bounds, config.visiting_shape);
    let qv = config.visiting_shape;
    let qa = config.acceptance_shape;
    let t0 = config.initial_temperature;
    let t1 = ((qv - 1.0) * 2f64.ln()).exp() - 1.0;
    let mut schedule_index = 0usize;
    let mut iteration = 0usize;
    // Lowest incumbent cost over all iterations and its location.
    let mut overall = best.clone();

    while iteration < config.max_iterations {
        let epoch = iteration as u64;
        let s = schedule_index as f64 + 2.0;
        let t2 = ((qv - 1.0) * s.ln()).exp() - 1.0;
        let temperature = t0 * t1 / t2;
        if temperature < t0 * RESTART_TEMPERATURE_RATIO {
            let x = uniform_point(bounds, &mut rng);
            let e = eval(objective, &x, epoch);
            if e < best.1 {
                best = (x.clone(), e);
            }
            current = (x, e);
            schedule_index = 0;
            continue;
        }

        if stochastic && iteration > 0 {
            // Re-score on this iteration's batch so a lucky draw does not
            // keep its low value forever.
            current.1 = eval(objective, &current.0, epoch);
            best.1 = if best.0 == current.0 {
                current.1
            } else {
                eval(objective, &best.0, epoch)
            };
        }
        let temperature_step = temperature / (schedule_index as f64 + 1.0);

        for j in 0..2 * dim {
            let candidate = visitor.visit(&current.0, j, temperature, &mut rng);
            let e = eval(objective, &candidate, epoch);
            if e < current.1 {
                if e < best.1 {
                    best = (candidate.clone(), e);
                }
                current = (candidate, e);
            } else {
                let r: f64 = rng.random();
                let base = 1.0 - (1.0 - qa) * (e - current.1) / temperature_step;
                let p = if base <= 0.0 { 0.0 } else { (base.ln() / (1.0 - qa)).exp() };
                if r <= p {
                    current = (candidate, e);
                }
            }
        }
        cost_trace.push(best.1);
        if best.1 < overall.1 {
            overall = best.clone();
        }
        iteration += 1;
        schedule_index += 1;
    }
    let mut best = overall;

    if config.local_search {
        let epoch = config.max_iterations as u64;
        let budget = 50 + 20 * dim;
        let (x, e) = coordinate_descent(objective, bounds, best.0.clone(), epoch, budget, &mut eval);
        cost_trace.push(e);
        if e < best.1 {
            best = (x, e);
        }
    }

    Ok(AnnealOutcome {
        best_params: best.0,
        best_cost: best.1,
        initial_params,
        initial_cost,
        cost_trace,
        evaluations,
    })
}

/// Greedy per-coordinate search with step halving, confined to the bounds.
fn coordinate_descent<O: Objective + ?Sized>(
    objective: &mut O,
    bounds: &[[f64; 2]],
    mut x: Vec<f64>,
    epoch: u64,
    budget: usize,
    eval: &mut impl FnMut(&mut O, &[f64], u64) -> f64,
) -> (Vec<f64>, f64) {
    let mut e = eval(objective, &x, epoch);
    let mut used = 1;
    let mut steps: Vec<f64> = bounds.iter().map(|b| 0.05 * (b[1] - b[0])).collect();
    let floors: Vec<f64> = bounds.iter().map(|b| 1e-7 * (b[1] - b[0])).collect();
    while used < budget && steps.iter().zip(&floors).any(|(s, f)| s > f) {
        let mut improved = false;
        'coords: for k in 0..x.len() {
            for dir in [1.0, -1.0] {
                if used >= budget {
                    break 'coords;
                }
                let candidate_k = (x[k] + dir * steps[k]).clamp(bounds[k][0], bounds[k][1]);
                if candidate_k == x[k] {
                    continue;
                }
                let mut candidate = x.clone();
                candidate[k] = candidate_k;
                let ec = eval(objective, &candidate, epoch);
                used += 1;
                if ec < e {
                    x = candidate;
                    e = ec;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            steps.iter_mut().for_each(|s| *s *= 0.5);
        }
    }
    (x, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(dim: usize, lo: f64, hi: f64, iters: usize, seed: u64) -> AnnealConfig {
        let mut c = AnnealConfig::new(dim, 2);
        c.bounds = vec![[lo, hi]; dim];
        c.max_iterations = iters;
        c.seed = seed;
        c
    }

    fn rastrigin(x: &[f64]) -> f64 {
        10.0 * x.len() as f64
            + x.iter().map(|v| v * v - 10.0 * (TAU * v).cos()).sum::<f64>()
    }

    #[test]
    fn quadratic_bowl() {
        let mut f = |x: &[f64]| (x[0] - 0.3).powi(2);
        let out = dual_annealing(&mut f, &config(1, -1.0, 1.0, 500, 4)).unwrap();
        assert!((out.best_params[0] - 0.3).abs() < 0.05);
        let mut c = config(1, -1.0, 1.0, 500, 4);
        c.local_search = false;
        let out = dual_annealing(&mut f, &c).unwrap();
        assert!((out.best_params[0] - 0.3).abs() < 0.05, "{:?}", out.best_params);
    }

    #[test]
    fn rastrigin_2d() {
        for seed in 0..10 {
            let mut f = |x: &[f64]| rastrigin(x);
            let out = dual_annealing(&mut f, &config(2, -5.12, 5.12, 2000, seed)).unwrap();
            assert!(out.best_cost < 1.0, "seed {seed}: {}", out.best_cost);
        }
    }

    #[test]
    fn trace_invariants_and_determinism() {
        let mut f = |x: &[f64]| rastrigin(x);
        let c = config(3, -5.12, 5.12, 200, 77);
        let a = dual_annealing(&mut f, &c).unwrap();
        let b = dual_annealing(&mut f, &c).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cost_trace.len(), 201);
        let min = a.cost_trace.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(a.best_cost, min);
        assert!(a.cost_trace[0] <= a.initial_cost);
        assert_eq!(f(&a.best_params), a.best_cost);
        for (x, [lo, hi]) in a.best_params.iter().zip(&c.bounds) {
            assert!(x >= lo && x <= hi);
        }
    }

    #[test]
    fn zero_budget_returns_start() {
        let mut f = |x: &[f64]| x[0] * x[0];
        let out = dual_annealing(&mut f, &config(1, -1.0, 1.0, 0, 5)).unwrap();
        assert_eq!(out.best_params, out.initial_params);
        assert_eq!(out.cost_trace, vec![out.initial_cost]);
        assert_eq!(out.evaluations, 1);
    }

    #[test]
    fn visiting_steps_stay_in_bounds() {
        let v = Visitor::new(&[[-2.0, 3.0]], 2.62);
        let mut rng = rng_from_seed(1);
        for t in [5230.0, 10.0, 0.1] {
            for _ in 0..1000 {
                let x = v.visit(&[0.5], 0, t, &mut rng)[0];
                assert!((-2.0..=3.0).contains(&x), "{x}");
            }
        }
    }

    #[test]
    fn rejects_bad_bounds() {
        let mut f = |x: &[f64]| x[0];
        let mut c = config(1, -1.0, 1.0, 10, 0);
        c.bounds = vec![[1.0, -1.0]];
        assert!(dual_annealing(&mut f, &c).is_err());
        c.bounds.clear();
        assert!(dual_annealing(&mut f, &c).is_err());
    }
}
