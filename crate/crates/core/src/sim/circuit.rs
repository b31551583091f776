use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::gate::{Angle, GateKind, GateOp};
use crate::error::{Error, Result};

/// An ordered gate list over a fixed register, with optional symbolic
/// parameters that are bound when the circuit is applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<GateOp>,
    num_symbolic_params: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            ops: Vec::new(),
            num_symbolic_params: 0,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn num_symbolic_params(&self) -> usize {
        self.num_symbolic_params
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    /// Allocate the next symbolic parameter index.
    pub fn new_param(&mut self) -> Angle {
        let a = Angle::Symbol(self.num_symbolic_params);
        self.num_symbolic_params += 1;
        a
    }

    /// Append a gate after checking its qubit indices and parameter index.
    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        if let Some(&q) = op.targets().iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::Structural(format!(
                "qubit {q} out of range for a {}-qubit circuit",
                self.num_qubits
            )));
        }
        if let Some(Angle::Symbol(i)) = op.angle() {
            if i >= self.num_symbolic_params {
                return Err(Error::Structural(format!(
                    "symbolic parameter {i} not allocated (circuit has {})",
                    self.num_symbolic_params
                )));
            }
        }
        self.ops.push(op);
        Ok(self)
    }

    pub fn gate(&mut self, kind: GateKind, targets: &[usize], angle: Option<Angle>) -> Result<&mut Self> {
        let op = GateOp::new(kind, targets.to_vec(), angle)?;
        self.push(op)
    }

    pub fn h(&mut self, q: usize) -> Result<&mut Self> {
        self.gate(GateKind::H, &[q], None)
    }

    pub fn x(&mut self, q: usize) -> Result<&mut Self> {
        self.gate(GateKind::X, &[q], None)
    }

    pub fn rx(&mut self, q: usize, angle: impl Into<Angle>) -> Result<&mut Self> {
        self.gate(GateKind::Rx, &[q], Some(angle.into()))
    }

    pub fn ry(&mut self, q: usize, angle: impl Into<Angle>) -> Result<&mut Self> {
        self.gate(GateKind::Ry, &[q], Some(angle.into()))
    }

    pub fn rz(&mut self, q: usize, angle: impl Into<Angle>) -> Result<&mut Self> {
        self.gate(GateKind::Rz, &[q], Some(angle.into()))
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.gate(GateKind::Cnot, &[control, target], None)
    }

    pub fn crx(&mut self, control: usize, target: usize, angle: impl Into<Angle>) -> Result<&mut Self> {
        self.gate(GateKind::Crx, &[control, target], Some(angle.into()))
    }

    pub fn crz(&mut self, control: usize, target: usize, angle: impl Into<Angle>) -> Result<&mut Self> {
        self.gate(GateKind::Crz, &[control, target], Some(angle.into()))
    }

    pub fn cswap(&mut self, control: usize, a: usize, b: usize) -> Result<&mut Self> {
        self.gate(GateKind::Cswap, &[control, a, b], None)
    }

    /// Replace every symbolic angle with its value from `params`.
    pub fn bind(&self, params: &[f64]) -> Result<Circuit> {
        self.check_params(params)?;
        let ops = self
            .ops
            .iter()
            .map(|op| {
                let angle = op.angle().map(|a| Angle::Fixed(a.resolve(params)));
                GateOp::new(op.kind(), op.targets().to_vec(), angle)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit {
            num_qubits: self.num_qubits,
            ops,
            num_symbolic_params: 0,
        })
    }

    /// The exact inverse of a fully bound circuit: reversed order, negated
    /// rotation angles, self-inverse gates unchanged.
    pub fn inverse(&self) -> Result<Circuit> {
        if self.num_symbolic_params != 0 {
            return Err(Error::Contract(
                "inverse requires a bound circuit; call bind first".into(),
            ));
        }
        let ops = self
            .ops
            .iter()
            .rev()
            .map(|op| {
                let angle = op.angle().map(|a| match a {
                    Angle::Fixed(v) => Angle::Fixed(-v),
                    Angle::Symbol(_) => unreachable!("bound circuit"),
                });
                GateOp::new(op.kind(), op.targets().to_vec(), angle)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit {
            num_qubits: self.num_qubits,
            ops,
            num_symbolic_params: 0,
        })
    }

    /// Append all gates of `other`, shifting its symbolic parameters past
    /// this circuit's.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::Structural(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.num_qubits, self.num_qubits
            )));
        }
        let offset = self.num_symbolic_params;
        for op in &other.ops {
            let angle = op.angle().map(|a| match a {
                Angle::Symbol(i) => Angle::Symbol(i + offset),
                fixed => fixed,
            });
            self.ops.push(GateOp::new(op.kind(), op.targets().to_vec(), angle)?);
        }
        self.num_symbolic_params += other.num_symbolic_params;
        Ok(())
    }

    pub(crate) fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.num_symbolic_params {
            return Err(Error::ParameterCount {
                expected: self.num_symbolic_params,
                got: params.len(),
            });
        }
        Ok(())
    }

    /// Number of entangling (multi-qubit) gates.
    pub fn entangling_count(&self) -> usize {
        self.ops.iter().filter(|op| op.kind().is_multi_qubit()).count()
    }
}

/// Depth and per-kind gate counts of a circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    pub depth: usize,
    pub gate_counts: BTreeMap<GateKind, usize>,
}

/// Greedy layer packing: each gate lands one layer after the latest layer
/// already occupying any of its qubits.
pub fn circuit_depth_report(circuit: &Circuit) -> DepthReport {
    let mut level = vec![0usize; circuit.num_qubits()];
    let mut gate_counts = BTreeMap::new();
    let mut depth = 0;
    for op in circuit.ops() {
        let layer = op.targets().iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for &q in op.targets() {
            level[q] = layer;
        }
        depth = depth.max(layer);
        *gate_counts.entry(op.kind()).or_insert(0) += 1;
    }
    DepthReport { depth, gate_counts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_of_small_circuits() {
        let empty = Circuit::new(2);
        assert_eq!(circuit_depth_report(&empty).depth, 0);

        let mut one = Circuit::new(1);
        one.h(0).unwrap();
        assert_eq!(circuit_depth_report(&one).depth, 1);

        // H(0) and H(1) share layer 1, CNOT needs layer 2.
        let mut c = Circuit::new(2);
        c.h(0).unwrap().h(1).unwrap().cnot(0, 1).unwrap();
        let r = circuit_depth_report(&c);
        assert_eq!(r.depth, 2);
        assert_eq!(r.gate_counts[&GateKind::H], 2);
        assert_eq!(r.gate_counts[&GateKind::Cnot], 1);
    }

    #[test]
    fn push_rejects_out_of_range_qubits_and_unallocated_symbols() {
        let mut c = Circuit::new(2);
        assert!(matches!(c.h(2), Err(Error::Structural(_))));
        assert!(matches!(c.rx(0, Angle::Symbol(0)), Err(Error::Structural(_))));
        let p = c.new_param();
        assert!(c.rx(0, p).is_ok());
    }

    #[test]
    fn extend_shifts_symbols() {
        let mut a = Circuit::new(1);
        let p = a.new_param();
        a.rx(0, p).unwrap();
        let b = a.clone();
        a.extend(&b).unwrap();
        assert_eq!(a.num_symbolic_params(), 2);
        assert_eq!(a.ops()[1].angle(), Some(Angle::Symbol(1)));
    }
}
