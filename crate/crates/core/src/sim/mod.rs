//! Dense statevector simulation.
//!
//! Qubit 0 is the least-significant bit of the basis index. Rotations follow
//! `R_P(θ) = exp(−iθP/2)`; controlled gates rotate their second target when
//! the first is set.

mod circuit;
mod density;
mod gate;
mod measure;
mod noise;
mod random;
mod state;

pub use circuit::{circuit_depth_report, Circuit, DepthReport};
pub use density::{partial_trace, purity, DensityMatrix};
pub(crate) use density::subset_purity;
pub use gate::{Angle, GateKind, GateOp};
pub use measure::{bitstring, sample_counts, MeasurementRecord};
pub use noise::{apply_circuit_noisy, NoiseSpec};
pub use random::{random_circuit, random_state};
pub use state::{amplitude_encode, apply_circuit, inner_product, Pauli, StateVector, MAX_QUBITS, NORM_TOLERANCE};
