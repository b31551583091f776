//! SWAP-test similarity between generated states.
//!
//! The ancilla of a SWAP test reads 0 with probability `½(1 + |⟨a|b⟩|²)`:
//! 1 for identical states, ½ for orthogonal ones. A high mean over random
//! pairs signals that a generator has collapsed onto a few states.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::entanglement::bin_index;
use crate::error::{Error, Result};
use crate::rng::{derive_indexed, derive_seed, rng_from_seed};
use crate::sim::{apply_circuit, inner_product, sample_counts, Circuit, StateVector};

pub const DEFAULT_THRESHOLD: f64 = 0.95;
pub const DEFAULT_PAIRS_PER_BIN: usize = 50;

/// Largest data register accepted by the explicit-circuit shot mode.
pub const MAX_SWAP_CIRCUIT_QUBITS: usize = 10;

/// The `(2n+1)`-qubit SWAP-test circuit. Qubit 0 is the ancilla, qubits
/// `1..=n` hold the first state and `n+1..=2n` the second.
pub fn swap_test_circuit(n: usize) -> Circuit {
    let mut c = Circuit::new(2 * n + 1);
    c.h(0).expect("ancilla in range");
    for j in 0..n {
        c.cswap(0, 1 + j, 1 + n + j).expect("registers in range");
    }
    c.h(0).expect("ancilla in range");
    c
}

fn swap_circuit_output(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::Structural(format!(
            "SWAP test of {}- and {}-qubit states",
            a.num_qubits(),
            b.num_qubits()
        )));
    }
    let n = a.num_qubits();
    if n > MAX_SWAP_CIRCUIT_QUBITS {
        return Err(Error::Capacity {
            qubits: 2 * n + 1,
            max: 2 * MAX_SWAP_CIRCUIT_QUBITS + 1,
            method: "swap_test circuit",
        });
    }
    let input = StateVector::zero(1).tensor(&a.tensor(b));
    apply_circuit(&input, &swap_test_circuit(n), &[])
}

/// Ancilla-zero probability of the explicit SWAP-test circuit, computed
/// from the simulated output state.
pub fn swap_circuit_p0(a: &StateVector, b: &StateVector) -> Result<f64> {
    let out = swap_circuit_output(a, b)?;
    Ok(out
        .amplitudes()
        .iter()
        .step_by(2)
        .map(|z| z.norm_sqr())
        .sum())
}

/// SWAP-test ancilla-zero probability for `a` and `b`.
///
/// `shots = 0` returns the exact `½(1 + |⟨a|b⟩|²)`. Otherwise the
/// `(2n+1)`-qubit circuit is simulated and its ancilla sampled `shots` times.
pub fn swap_test(a: &StateVector, b: &StateVector, shots: usize, seed: u64) -> Result<f64> {
    if shots == 0 {
        let overlap = inner_product(a, b)?;
        // Rounding can push |⟨a|b⟩|² a few ulps past 1 for identical states.
        return Ok(0.5 * (1.0 + overlap.norm_sqr().min(1.0)));
    }
    let out = swap_circuit_output(a, b)?;
    let rec = sample_counts(&out, shots, None, seed)?;
    Ok(rec.marginal_zero(0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapBin {
    pub ce_range: [f64; 2],
    /// `None` when the bin held fewer than two states.
    pub mean_p0: Option<f64>,
    pub pair_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapReport {
    pub bins: Vec<SwapBin>,
    pub threshold: f64,
    pub collapsed: bool,
    /// Mean over every tested pair, across all bins.
    pub overall_mean_p0: Option<f64>,
}

impl SwapReport {
    fn assemble(bins: Vec<SwapBin>, threshold: f64) -> Self {
        let pairs: usize = bins.iter().map(|b| b.pair_count).sum();
        let overall_mean_p0 = (pairs > 0).then(|| {
            bins.iter()
                .filter_map(|b| b.mean_p0.map(|m| m * b.pair_count as f64))
                .sum::<f64>()
                / pairs as f64
        });
        SwapReport {
            bins,
            threshold,
            collapsed: overall_mean_p0.is_some_and(|m| m > threshold),
            overall_mean_p0,
        }
    }
}

fn mean_over_pairs(
    states: &[StateVector],
    pairs: &[(usize, usize)],
    shots: usize,
    seed: u64,
    first_pair: usize,
) -> Result<Option<f64>> {
    if pairs.is_empty() {
        return Ok(None);
    }
    let mut total = 0.0;
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let s = derive_indexed(seed, "swap-pair", (first_pair + k) as u64);
        total += swap_test(&states[i], &states[j], shots, s)?;
    }
    Ok(Some(total / pairs.len() as f64))
}

/// Bin states by CE value and SWAP-test disjoint random pairs within each
/// bin, at most `pairs_per_bin` per bin. Pairs are drawn up front from
/// `seed`.
pub fn diversity_scan(
    states: &[StateVector],
    ce_values: &[f64],
    bin_edges: &[f64],
    pairs_per_bin: usize,
    shots: usize,
    seed: u64,
) -> Result<SwapReport> {
    diversity_scan_with_threshold(states, ce_values, bin_edges, pairs_per_bin, shots, seed, DEFAULT_THRESHOLD)
}

pub fn diversity_scan_with_threshold(
    states: &[StateVector],
    ce_values: &[f64],
    bin_edges: &[f64],
    pairs_per_bin: usize,
    shots: usize,
    seed: u64,
    threshold: f64,
) -> Result<SwapReport> {
    if states.len() != ce_values.len() {
        return Err(Error::Shape(format!(
            "{} states but {} CE values",
            states.len(),
            ce_values.len()
        )));
    }
    if states.len() < 2 {
        return Err(Error::DegenerateInput("diversity scan needs at least two states".into()));
    }
    if bin_edges.len() < 2 {
        return Err(Error::Shape("diversity scan needs at least one bin".into()));
    }
    let nbins = bin_edges.len() - 1;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); nbins];
    for (i, &v) in ce_values.iter().enumerate() {
        members[bin_index(v, bin_edges).0].push(i);
    }
    let mut rng = rng_from_seed(derive_seed(seed, "swap-pairing"));
    let mut plan: Vec<Vec<(usize, usize)>> = Vec::with_capacity(nbins);
    for m in &mut members {
        m.shuffle(&mut rng);
        plan.push(
            m.chunks_exact(2)
                .take(pairs_per_bin)
                .map(|c| (c[0], c[1]))
                .collect(),
        );
    }
    let mut bins = Vec::with_capacity(nbins);
    let mut offset = 0;
    for (b, pairs) in plan.iter().enumerate() {
        bins.push(SwapBin {
            ce_range: [bin_edges[b], bin_edges[b + 1]],
            mean_p0: mean_over_pairs(states, pairs, shots, seed, offset)?,
            pair_count: pairs.len(),
        });
        offset += pairs.len();
    }
    Ok(SwapReport::assemble(bins, threshold))
}

/// Exact-mode SWAP statistics over `pairs` random distinct pairs drawn from
/// the whole ensemble, reported as a single bin.
pub fn random_pair_report(
    states: &[StateVector],
    pairs: usize,
    threshold: f64,
    seed: u64,
) -> Result<SwapReport> {
    if states.len() < 2 {
        return Err(Error::DegenerateInput("need at least two states".into()));
    }
    let mut rng = rng_from_seed(derive_seed(seed, "penalty-pairs"));
    let n = states.len();
    let chosen: Vec<(usize, usize)> = (0..pairs)
        .map(|_| {
            let picked = rand::seq::index::sample(&mut rng, n, 2);
            (picked.index(0), picked.index(1))
        })
        .collect();
    let mean = mean_over_pairs(states, &chosen, 0, seed, 0)?;
    Ok(SwapReport::assemble(
        vec![SwapBin {
            ce_range: [f64::NEG_INFINITY, f64::INFINITY],
            mean_p0: mean,
            pair_count: chosen.len(),
        }],
        threshold,
    ))
}

/// Hinge penalty `weight · max(0, mean p₀ − threshold)`.
pub fn diversity_penalty(report: &SwapReport, weight: f64) -> f64 {
    match report.overall_mean_p0 {
        Some(m) if report.collapsed => weight * (m - report.threshold).max(0.0),
        _ => 0.0,
    }
}
