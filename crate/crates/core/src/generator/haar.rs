use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;

use crate::rng::rng_from_seed;
use crate::sim::StateVector;

/// Draw `count` product states of `n` qubits, each qubit
/// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` with `φ ~ U(0, 2π)`.
///
/// With `true_haar = false`, `θ ~ U(0, π)`. That law over-weights the poles
/// of the Bloch sphere; `true_haar = true` draws `cos θ ~ U(−1, 1)` instead,
/// which is the uniform (Haar) measure on single-qubit states.
pub fn sample_haar_product(n: usize, count: usize, seed: u64, true_haar: bool) -> Vec<StateVector> {
    let mut rng = rng_from_seed(seed);
    let mut factors = Vec::with_capacity(n);
    (0..count)
        .map(|_| {
            factors.clear();
            for _ in 0..n {
                let theta = if true_haar {
                    rng.random_range(-1.0f64..1.0).acos()
                } else {
                    rng.random_range(0.0..PI)
                };
                let phi = rng.random_range(0.0..TAU);
                factors.push([
                    Complex64::new((theta / 2.0).cos(), 0.0),
                    Complex64::from_polar((theta / 2.0).sin(), phi),
                ]);
            }
            StateVector::product(&factors)
        })
        .collect()
}
