use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::noise::NoiseSpec;
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Histogram of measured bitstrings.
///
/// Bitstrings are written most-significant qubit first, so the string reads
/// as the binary form of the basis index (qubit 0 is the last character).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub shots: usize,
    pub counts: BTreeMap<String, usize>,
}

impl MeasurementRecord {
    pub fn count(&self, bitstring: &str) -> usize {
        self.counts.get(bitstring).copied().unwrap_or(0)
    }

    /// Empirical probability that `qubit` reads 0.
    pub fn marginal_zero(&self, qubit: usize) -> f64 {
        let zeros: usize = self
            .counts
            .iter()
            .filter(|(bits, _)| bits.as_bytes()[bits.len() - 1 - qubit] == b'0')
            .map(|(_, c)| c)
            .sum();
        zeros as f64 / self.shots as f64
    }
}

pub fn bitstring(index: usize, num_qubits: usize) -> String {
    (0..num_qubits)
        .rev()
        .map(|q| if (index >> q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Draw `shots` computational-basis outcomes from `state`. With `noise`,
/// each measured bit then flips independently with `p_readout`.
pub fn sample_counts(
    state: &StateVector,
    shots: usize,
    noise: Option<&NoiseSpec>,
    seed: u64,
) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::Contract("shots must be at least 1".into()));
    }
    state.check_normalized()?;
    if let Some(n) = noise {
        n.validate()?;
    }
    let mut cumulative = Vec::with_capacity(state.dim());
    let mut acc = 0.0;
    for p in state.probabilities() {
        acc += p;
        cumulative.push(acc);
    }
    let total = acc;
    let flip = noise.map_or(0.0, |n| n.p_readout);
    let n = state.num_qubits();
    let mut rng = rng_from_seed(seed);
    let mut by_index: BTreeMap<usize, usize> = BTreeMap::new();
    for _ in 0..shots {
        let u = rng.random::<f64>() * total;
        let mut idx = cumulative.partition_point(|&c| c <= u).min(state.dim() - 1);
        // Skip zero-probability entries the partition point may land on.
        while state.amplitudes()[idx].norm_sqr() == 0.0 && idx + 1 < state.dim() {
            idx += 1;
        }
        if flip > 0.0 {
            for q in 0..n {
                if rng.random::<f64>() < flip {
                    idx ^= 1 << q;
                }
            }
        }
        *by_index.entry(idx).or_insert(0) += 1;
    }
    Ok(MeasurementRecord {
        shots,
        counts: by_index
            .into_iter()
            .map(|(i, c)| (bitstring(i, n), c))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{apply_circuit, Circuit};

    #[test]
    fn deterministic_outcome() {
        let r = sample_counts(&StateVector::zero(3), 2048, None, 1).unwrap();
        assert_eq!(r.counts.len(), 1);
        assert_eq!(r.count("000"), 2048);
    }

    #[test]
    fn certain_readout_flip() {
        let noise = NoiseSpec {
            p1: 0.0,
            p2: 0.0,
            p_readout: 1.0,
        };
        let r = sample_counts(&StateVector::zero(1), 100, Some(&noise), 1).unwrap();
        assert_eq!(r.count("1"), 100);
    }

    #[test]
    fn bell_counts_within_three_sigma() {
        let mut c = Circuit::new(2);
        c.h(0).unwrap().cnot(0, 1).unwrap();
        let s = apply_circuit(&StateVector::zero(2), &c, &[]).unwrap();
        let sigma = (2048.0f64 * 0.25).sqrt();
        for seed in 0..10 {
            let r = sample_counts(&s, 2048, None, seed).unwrap();
            assert_eq!(r.count("00") + r.count("11"), 2048);
            assert!((r.count("00") as f64 - 1024.0).abs() <= 3.0 * sigma);
        }
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let mut c = Circuit::new(2);
        c.h(0).unwrap().h(1).unwrap();
        let s = apply_circuit(&StateVector::zero(2), &c, &[]).unwrap();
        assert_eq!(
            sample_counts(&s, 500, None, 9).unwrap(),
            sample_counts(&s, 500, None, 9).unwrap()
        );
    }

    #[test]
    fn errors() {
        assert!(sample_counts(&StateVector::zero(1), 0, None, 0).is_err());
        let bad = StateVector::product(&[[2.0.into(), 0.0.into()]]);
        assert!(matches!(
            sample_counts(&bad, 10, None, 0),
            Err(Error::NumericalState(_))
        ));
    }

    #[test]
    fn bitstring_is_msb_first() {
        assert_eq!(bitstring(0b001, 3), "001");
        assert_eq!(bitstring(0b100, 3), "100");
    }
}
