use std::fmt;

use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_indexed, rng_from_seed};
use crate::sim::{sample_counts, subset_purity, StateVector};

/// Largest register for which the power-set sum is evaluated.
pub const MAX_FULL_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CeMethod {
    FullPowerset,
    CeK,
    Nzp,
    Ce1SwapBound,
}

impl fmt::Display for CeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CeMethod::FullPowerset => "full_powerset",
            CeMethod::CeK => "ce_k",
            CeMethod::Nzp => "nzp",
            CeMethod::Ce1SwapBound => "ce1_swap_bound",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CeEstimate {
    pub value: f64,
    pub method: CeMethod,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub k: Option<usize>,
}

impl CeEstimate {
    fn plain(value: f64, method: CeMethod) -> Self {
        CeEstimate {
            value,
            method,
            lower: None,
            upper: None,
            k: None,
        }
    }
}

/// Concentratable entanglement over the full power set of qubits:
/// `1 − 2⁻ⁿ Σ_α Tr ρ_α²`, with the empty subset contributing purity 1.
pub fn ce_full(state: &StateVector) -> Result<CeEstimate> {
    let n = state.num_qubits();
    if n > MAX_FULL_QUBITS {
        return Err(Error::Capacity {
            qubits: n,
            max: MAX_FULL_QUBITS,
            method: "ce_full",
        });
    }
    let full = (1usize << n) - 1;
    // Complementary subsets of a pure state have equal purity.
    let mut sum = 0.0;
    for mask in 0..=full {
        let complement = full & !mask;
        if mask < complement {
            sum += 2.0 * subset_purity(state, mask);
        } else if mask == complement {
            sum += subset_purity(state, mask);
        }
    }
    let value = (1.0 - sum / (1u64 << n) as f64).max(0.0);
    Ok(CeEstimate::plain(value, CeMethod::FullPowerset))
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Size-`k` concentratable entanglement,
/// `2ᵏ/(2ᵏ−1) · (1 − C(N,k)⁻¹ Σ_{|S|=k} Tr ρ_S²)`.
pub fn ce_k(state: &StateVector, k: usize) -> Result<CeEstimate> {
    let n = state.num_qubits();
    if k == 0 || k >= n {
        return Err(Error::Contract(format!(
            "subsystem size k = {k} must lie in [1, {}]",
            n.saturating_sub(1)
        )));
    }
    if n > MAX_FULL_QUBITS && k > 1 {
        return Err(Error::Capacity {
            qubits: n,
            max: MAX_FULL_QUBITS,
            method: "ce_k",
        });
    }
    let mut sum = 0.0;
    for mask in 0..(1usize << n) {
        if mask.count_ones() as usize == k {
            sum += subset_purity(state, mask);
        }
    }
    let scale = (1u64 << k) as f64 / ((1u64 << k) - 1) as f64;
    let value = (scale * (1.0 - sum / binomial(n as u64, k as u64))).max(0.0);
    Ok(CeEstimate {
        k: Some(k),
        ..CeEstimate::plain(value, CeMethod::CeK)
    })
}

/// Non-zero probability `1 − |⟨0…0|ψ⟩|²`.
pub fn nzp(state: &StateVector) -> CeEstimate {
    CeEstimate::plain(1.0 - state.amplitudes()[0].norm_sqr(), CeMethod::Nzp)
}

/// Shot-based NZP: the fraction of samples that are not all zeros.
pub fn nzp_sampled(state: &StateVector, shots: usize, seed: u64) -> Result<CeEstimate> {
    let rec = sample_counts(state, shots, None, seed)?;
    let zeros = rec.count(&"0".repeat(state.num_qubits()));
    Ok(CeEstimate::plain(
        1.0 - zeros as f64 / shots as f64,
        CeMethod::Nzp,
    ))
}

/// Probability that the ancilla of a single-qubit two-copy SWAP test on
/// qubit `j` reads 0: `(1 + Tr ρ_j²)/2`.
pub fn single_qubit_swap_p0(state: &StateVector) -> Vec<f64> {
    (0..state.num_qubits())
        .map(|j| (1.0 + subset_purity(state, 1 << j)) / 2.0)
        .collect()
}

/// `CE₁` from parallel single-qubit SWAP tests on two copies of the state,
/// with the bounds `(4/n)(1−q) ≤ CE₁ ≤ 4(1−q)` where `q` is the
/// probability that every ancilla reads 0.
///
/// `shots = 0` evaluates every `p₀ⱼ` analytically; otherwise each is
/// estimated from `shots` binomial ancilla readouts.
pub fn ce1_swap_bounds(state: &StateVector, shots: usize, seed: u64) -> Result<CeEstimate> {
    let n = state.num_qubits();
    let mut p0 = single_qubit_swap_p0(state);
    if shots > 0 {
        for (j, p) in p0.iter_mut().enumerate() {
            let dist = Binomial::new(shots as u64, p.clamp(0.0, 1.0))
                .map_err(|e| Error::NumericalState(e.to_string()))?;
            let mut rng = rng_from_seed(derive_indexed(seed, "ce1-ancilla", j as u64));
            *p = dist.sample(&mut rng) as f64 / shots as f64;
        }
    }
    // Ancillas of a pure two-copy input are independent.
    let q: f64 = p0.iter().product();
    let mean_p0 = p0.iter().sum::<f64>() / n as f64;
    Ok(CeEstimate {
        value: 4.0 * (1.0 - mean_p0),
        method: CeMethod::Ce1SwapBound,
        lower: Some(4.0 / n as f64 * (1.0 - q)),
        upper: Some(4.0 * (1.0 - q)),
        k: None,
    })
}
