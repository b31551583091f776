use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use super::gate::{GateKind, GateOp};
use crate::error::{Error, Result};

/// Accepted deviation of `Σ|a_i|²` from one for externally supplied states.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Single-qubit Pauli operators, used by the noise model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Dense pure state of `n` qubits. Qubit `q` is bit `q` of the basis index,
/// so qubit 0 is the least-significant bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[0] = ONE;
        StateVector {
            num_qubits,
            amplitudes,
        }
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if index >= 1 << num_qubits {
            return Err(Error::Structural(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[index] = ONE;
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// Wrap an amplitude array. The length must be a power of two and the
    /// norm within [`NORM_TOLERANCE`] of one; nothing is renormalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Shape(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        let state = StateVector {
            num_qubits,
            amplitudes,
        };
        state.check_normalized()?;
        Ok(state)
    }

    /// Tensor product of single-qubit states; `factors[q]` is qubit `q`.
    pub fn product(factors: &[[Complex64; 2]]) -> Self {
        let mut amplitudes = vec![ONE];
        for (q, f) in factors.iter().enumerate() {
            let mut next = vec![ZERO; amplitudes.len() * 2];
            let bit = 1usize << q;
            for (i, a) in amplitudes.iter().enumerate() {
                next[i] = a * f[0];
                next[i | bit] = a * f[1];
            }
            amplitudes = next;
        }
        StateVector {
            num_qubits: factors.len(),
            amplitudes,
        }
    }

    /// `self ⊗ other` with `self` on the low qubits.
    pub fn tensor(&self, high: &StateVector) -> StateVector {
        let shift = self.num_qubits;
        let mut amplitudes = vec![ZERO; self.dim() * high.dim()];
        for (j, b) in high.amplitudes.iter().enumerate() {
            for (i, a) in self.amplitudes.iter().enumerate() {
                amplitudes[(j << shift) | i] = a * b;
            }
        }
        StateVector {
            num_qubits: self.num_qubits + high.num_qubits,
            amplitudes,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub(crate) fn check_normalized(&self) -> Result<()> {
        let norm = self.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NumericalState(format!(
                "state norm² {norm} deviates from 1 by more than {NORM_TOLERANCE}"
            )));
        }
        Ok(())
    }

    /// Apply one gate in place. `angle` is the resolved rotation angle for
    /// parameterized gates and ignored otherwise.
    pub(crate) fn apply_gate(&mut self, op: &GateOp, angle: f64) {
        let t = op.targets();
        match op.kind() {
            GateKind::Rx => self.apply_1q(t[0], rx_matrix(angle)),
            GateKind::Ry => self.apply_1q(t[0], ry_matrix(angle)),
            GateKind::Rz => self.apply_diag(t[0], angle),
            GateKind::H => self.apply_1q(t[0], h_matrix()),
            GateKind::X => self.apply_x(t[0], None),
            GateKind::Cnot => self.apply_x(t[1], Some(t[0])),
            GateKind::Crx => self.apply_controlled_1q(t[0], t[1], rx_matrix(angle)),
            GateKind::Crz => self.apply_controlled_diag(t[0], t[1], angle),
            GateKind::Cswap => self.apply_cswap(t[0], t[1], t[2]),
        }
    }

    pub(crate) fn apply_pauli(&mut self, pauli: Pauli, q: usize) {
        match pauli {
            Pauli::X => self.apply_x(q, None),
            Pauli::Y => {
                let i = Complex64::new(0.0, 1.0);
                self.apply_1q(q, [[ZERO, -i], [i, ZERO]]);
            }
            Pauli::Z => {
                let bit = 1usize << q;
                for (idx, a) in self.amplitudes.iter_mut().enumerate() {
                    if idx & bit != 0 {
                        *a = -*a;
                    }
                }
            }
        }
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let j = i | bit;
                let (a, b) = (self.amplitudes[i], self.amplitudes[j]);
                self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
                self.amplitudes[j] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    fn apply_controlled_1q(&mut self, control: usize, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        let cbit = 1usize << control;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 && i & cbit != 0 {
                let j = i | bit;
                let (a, b) = (self.amplitudes[i], self.amplitudes[j]);
                self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
                self.amplitudes[j] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    fn apply_diag(&mut self, q: usize, angle: f64) {
        let bit = 1usize << q;
        let lo = Complex64::from_polar(1.0, -angle / 2.0);
        let hi = Complex64::from_polar(1.0, angle / 2.0);
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= if i & bit == 0 { lo } else { hi };
        }
    }

    fn apply_controlled_diag(&mut self, control: usize, q: usize, angle: f64) {
        let bit = 1usize << q;
        let cbit = 1usize << control;
        let lo = Complex64::from_polar(1.0, -angle / 2.0);
        let hi = Complex64::from_polar(1.0, angle / 2.0);
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if i & cbit != 0 {
                *a *= if i & bit == 0 { lo } else { hi };
            }
        }
    }

    fn apply_x(&mut self, q: usize, control: Option<usize>) {
        let bit = 1usize << q;
        let cmask = control.map_or(0, |c| 1usize << c);
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 && i & cmask == cmask {
                self.amplitudes.swap(i, i | bit);
            }
        }
    }

    fn apply_cswap(&mut self, control: usize, a: usize, b: usize) {
        let (cbit, abit, bbit) = (1usize << control, 1usize << a, 1usize << b);
        for i in 0..self.amplitudes.len() {
            if i & cbit != 0 && i & abit != 0 && i & bbit == 0 {
                self.amplitudes.swap(i, (i ^ abit) | bbit);
            }
        }
    }
}

fn rx_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let c = Complex64::new(c, 0.0);
    let mis = Complex64::new(0.0, -s);
    [[c, mis], [mis, c]]
}

fn ry_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

fn h_matrix() -> [[Complex64; 2]; 2] {
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[r, r], [r, -r]]
}

pub(crate) fn check_dims(circuit: &Circuit, state: &StateVector, params: &[f64]) -> Result<()> {
    circuit.check_params(params)?;
    if circuit.num_qubits() != state.num_qubits() {
        return Err(Error::Structural(format!(
            "circuit acts on {} qubits but the state has {}",
            circuit.num_qubits(),
            state.num_qubits()
        )));
    }
    Ok(())
}

/// Apply `circuit` with its symbolic parameters bound to `params`.
/// The input state is left untouched.
pub fn apply_circuit(state: &StateVector, circuit: &Circuit, params: &[f64]) -> Result<StateVector> {
    check_dims(circuit, state, params)?;
    let mut out = state.clone();
    for op in circuit.ops() {
        let angle = op.angle().map_or(0.0, |a| a.resolve(params));
        out.apply_gate(op, angle);
    }
    Ok(out)
}

/// `⟨a|b⟩`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.num_qubits != b.num_qubits {
        return Err(Error::Structural(format!(
            "inner product of {}- and {}-qubit states",
            a.num_qubits, b.num_qubits
        )));
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Amplitude-encode `2^n − 1` real features into an `n`-qubit state: the
/// features are padded with one trailing zero and L2-normalized.
pub fn amplitude_encode(features: &[f64]) -> Result<StateVector> {
    let len = features.len() + 1;
    if features.is_empty() || !len.is_power_of_two() {
        return Err(Error::Shape(format!(
            "amplitude encoding needs 2^n - 1 features, got {}",
            features.len()
        )));
    }
    if features.iter().any(|f| !f.is_finite()) {
        return Err(Error::DegenerateInput("non-finite feature".into()));
    }
    let norm = features.iter().map(|f| f * f).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateInput("all-zero feature vector".into()));
    }
    let mut amplitudes: Vec<Complex64> = features
        .iter()
        .map(|f| Complex64::new(f / norm, 0.0))
        .collect();
    amplitudes.push(ZERO);
    Ok(StateVector {
        num_qubits: len.trailing_zeros() as usize,
        amplitudes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn assert_state(s: &StateVector, expected: &[Complex64], tol: f64) {
        assert_eq!(s.dim(), expected.len());
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < tol, "{a} vs {e}");
        }
    }

    #[test]
    fn hadamard_on_zero() {
        let mut c = Circuit::new(1);
        c.h(0).unwrap();
        let out = apply_circuit(&StateVector::zero(1), &c, &[]).unwrap();
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert_state(&out, &[r, r], 1e-15);
    }

    #[test]
    fn empty_circuit_is_identity() {
        let s = StateVector::product(&[
            [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)],
            [Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(FRAC_1_SQRT_2, 0.0)],
        ]);
        let out = apply_circuit(&s, &Circuit::new(2), &[]).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn bell_preparation() {
        let mut c = Circuit::new(2);
        c.h(0).unwrap().cnot(0, 1).unwrap();
        let out = apply_circuit(&StateVector::zero(2), &c, &[]).unwrap();
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert_state(&out, &[r, ZERO, ZERO, r], 1e-15);
    }

    /// exp(-iθX/2) via its power series, independent of the kernel's closed form.
    fn expm_rx(theta: f64) -> [[Complex64; 2]; 2] {
        let a = Complex64::new(0.0, -theta / 2.0);
        // X² = I, so the series splits into even and odd powers of a.
        let mut even = Complex64::new(0.0, 0.0);
        let mut odd = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for k in 0..40 {
            if k % 2 == 0 {
                even += term;
            } else {
                odd += term;
            }
            term = term * a / (k as f64 + 1.0);
        }
        [[even, odd], [odd, even]]
    }

    #[test]
    fn rx_pi_matches_matrix_exponential() {
        let m = expm_rx(PI);
        let oracle = [m[0][0], m[1][0]];
        let mut c = Circuit::new(1);
        c.rx(0, PI).unwrap();
        let out = apply_circuit(&StateVector::zero(1), &c, &[]).unwrap();
        assert_state(&out, &oracle, 1e-12);
        assert_state(&out, &[ZERO, Complex64::new(0.0, -1.0)], 1e-12);
    }

    #[test]
    fn parameter_and_qubit_errors() {
        let mut c = Circuit::new(2);
        let p = c.new_param();
        c.rx(0, p).unwrap();
        assert!(matches!(
            apply_circuit(&StateVector::zero(2), &c, &[]),
            Err(Error::ParameterCount { expected: 1, got: 0 })
        ));
        assert!(matches!(
            apply_circuit(&StateVector::zero(3), &c, &[0.1]),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn inner_products() {
        let zero = StateVector::zero(1);
        let one = StateVector::basis(1, 1).unwrap();
        let mut c = Circuit::new(1);
        c.h(0).unwrap();
        let plus = apply_circuit(&zero, &c, &[]).unwrap();
        assert_abs_diff_eq!(inner_product(&zero, &zero).unwrap().re, 1.0);
        assert_abs_diff_eq!(inner_product(&zero, &one).unwrap().norm(), 0.0);
        assert_abs_diff_eq!(inner_product(&zero, &plus).unwrap().re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert!(inner_product(&zero, &StateVector::zero(2)).is_err());
    }

    #[test]
    fn amplitude_encoding_examples() {
        let s = amplitude_encode(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(s, StateVector::zero(2));

        let s = amplitude_encode(&[1.0, 1.0, 1.0]).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert_state(&s, &[r.into(), r.into(), r.into(), ZERO], 1e-15);

        let s = amplitude_encode(&[3.0, 4.0, 0.0]).unwrap();
        assert_state(&s, &[0.6.into(), 0.8.into(), ZERO, ZERO], 1e-15);

        assert!(matches!(amplitude_encode(&[0.0; 3]), Err(Error::DegenerateInput(_))));
        assert!(matches!(amplitude_encode(&[1.0; 4]), Err(Error::Shape(_))));
        assert!(matches!(amplitude_encode(&[]), Err(Error::Shape(_))));
    }

    #[test]
    fn from_amplitudes_rejects_unnormalized() {
        assert!(StateVector::from_amplitudes(vec![ONE, ONE]).is_err());
        assert!(StateVector::from_amplitudes(vec![ONE, ZERO, ZERO]).is_err());
        assert!(StateVector::from_amplitudes(vec![ONE, ZERO]).is_ok());
    }

    #[test]
    fn cswap_exchanges_registers_when_control_set() {
        // control qubit 0 = 1, a = qubit 1 = 1, b = qubit 2 = 0  ->  a = 0, b = 1
        let s = StateVector::basis(3, 0b011).unwrap();
        let mut c = Circuit::new(3);
        c.cswap(0, 1, 2).unwrap();
        let out = apply_circuit(&s, &c, &[]).unwrap();
        assert_eq!(out, StateVector::basis(3, 0b101).unwrap());
        let s = StateVector::basis(3, 0b010).unwrap();
        assert_eq!(apply_circuit(&s, &c, &[]).unwrap(), s);
    }

    #[test]
    fn tensor_places_self_on_low_qubits() {
        let one = StateVector::basis(1, 1).unwrap();
        let zero = StateVector::zero(1);
        assert_eq!(one.tensor(&zero), StateVector::basis(2, 0b01).unwrap());
    }
}
