use rand::Rng;

use super::circuit::Circuit;
use super::gate::{Angle, GateKind};
use super::state::StateVector;
use crate::rng::rng_from_seed;

/// A bound circuit of `gates` uniformly chosen gates from the full alphabet
/// with uniform angles in [−π, π). CSWAP is skipped on fewer than 3 qubits
/// and controlled gates on a single qubit.
pub fn random_circuit(num_qubits: usize, gates: usize, seed: u64) -> Circuit {
    let mut rng = rng_from_seed(seed);
    let kinds: Vec<GateKind> = [
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::H,
        GateKind::X,
        GateKind::Cnot,
        GateKind::Crx,
        GateKind::Crz,
        GateKind::Cswap,
    ]
    .into_iter()
    .filter(|k| k.arity() <= num_qubits)
    .collect();
    let mut c = Circuit::new(num_qubits);
    for _ in 0..gates {
        let kind = kinds[rng.random_range(0..kinds.len())];
        let mut targets: Vec<usize> = Vec::with_capacity(3);
        while targets.len() < kind.arity() {
            let q = rng.random_range(0..num_qubits);
            if !targets.contains(&q) {
                targets.push(q);
            }
        }
        let angle = kind
            .is_parameterized()
            .then(|| Angle::Fixed(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)));
        c.gate(kind, &targets, angle).expect("valid random gate");
    }
    c
}

/// Output of a random circuit applied to `|0…0⟩`.
pub fn random_state(num_qubits: usize, gates: usize, seed: u64) -> StateVector {
    let c = random_circuit(num_qubits, gates, seed);
    super::apply_circuit(&StateVector::zero(num_qubits), &c, &[]).expect("bound circuit")
}
