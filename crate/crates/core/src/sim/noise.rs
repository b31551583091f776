use rand::Rng;
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::state::{check_dims, Pauli, StateVector};
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Parametric noise: depolarizing-style Pauli insertion after gates plus
/// independent classical bit flips at readout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSpec {
    /// Error probability after each one-qubit gate.
    pub p1: f64,
    /// Error probability after each two- or three-qubit gate.
    pub p2: f64,
    /// Per-bit flip probability at measurement.
    pub p_readout: f64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec {
            p1: 3e-4,
            p2: 8e-3,
            p_readout: 1.5e-2,
        }
    }
}

impl NoiseSpec {
    pub fn noiseless() -> Self {
        NoiseSpec {
            p1: 0.0,
            p2: 0.0,
            p_readout: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p1", self.p1), ("p2", self.p2), ("p_readout", self.p_readout)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Contract(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(())
    }
}

/// One Monte-Carlo trajectory of `circuit` under `noise`.
///
/// After every gate, with probability `p1` (one-qubit gates) or `p2`
/// (multi-qubit gates), a uniformly random Pauli from {X, Y, Z} hits a
/// uniformly random target of that gate. Readout error is not applied here;
/// see [`sample_counts`](super::sample_counts).
pub fn apply_circuit_noisy(
    state: &StateVector,
    circuit: &Circuit,
    params: &[f64],
    noise: &NoiseSpec,
    seed: u64,
) -> Result<StateVector> {
    check_dims(circuit, state, params)?;
    noise.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut out = state.clone();
    for op in circuit.ops() {
        let angle = op.angle().map_or(0.0, |a| a.resolve(params));
        out.apply_gate(op, angle);
        let p = if op.kind().is_multi_qubit() {
            noise.p2
        } else {
            noise.p1
        };
        if p > 0.0 && rng.random::<f64>() < p {
            let pauli = match rng.random_range(0..3) {
                0 => Pauli::X,
                1 => Pauli::Y,
                _ => Pauli::Z,
            };
            let targets = op.targets();
            let q = targets[rng.random_range(0..targets.len())];
            out.apply_pauli(pauli, q);
        }
    }
    Ok(out)
}
