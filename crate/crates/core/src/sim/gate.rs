use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The gate alphabet understood by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    H,
    X,
    Cnot,
    Crx,
    Crz,
    Cswap,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::H | GateKind::X => 1,
            GateKind::Cnot | GateKind::Crx | GateKind::Crz => 2,
            GateKind::Cswap => 3,
        }
    }

    pub fn is_parameterized(self) -> bool {
        matches!(
            self,
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Crx | GateKind::Crz
        )
    }

    /// Gates acting on two or more qubits.
    pub fn is_multi_qubit(self) -> bool {
        self.arity() > 1
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Cnot => "CNOT",
            GateKind::Crx => "CRX",
            GateKind::Crz => "CRZ",
            GateKind::Cswap => "CSWAP",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rotation angle of a gate: a literal value in radians or a reference to
/// a symbolic circuit parameter bound at application time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Angle {
    Fixed(f64),
    Symbol(usize),
}

impl Angle {
    pub(crate) fn resolve(self, params: &[f64]) -> f64 {
        match self {
            Angle::Fixed(v) => v,
            Angle::Symbol(i) => params[i],
        }
    }
}

impl From<f64> for Angle {
    fn from(v: f64) -> Self {
        Angle::Fixed(v)
    }
}

/// One gate application. For controlled gates the first target is the
/// control; `Cswap` lists (control, swap-a, swap-b).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    kind: GateKind,
    targets: Vec<usize>,
    angle: Option<Angle>,
}

impl GateOp {
    pub fn new(kind: GateKind, targets: Vec<usize>, angle: Option<Angle>) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::Structural(format!(
                "{kind} takes {} target(s), got {}",
                kind.arity(),
                targets.len()
            )));
        }
        for (i, a) in targets.iter().enumerate() {
            if targets[..i].contains(a) {
                return Err(Error::Structural(format!("{kind} targets repeat qubit {a}")));
            }
        }
        match (kind.is_parameterized(), angle.is_some()) {
            (true, false) => {
                return Err(Error::Structural(format!("{kind} requires an angle")));
            }
            (false, true) => {
                return Err(Error::Structural(format!("{kind} takes no angle")));
            }
            _ => {}
        }
        Ok(GateOp {
            kind,
            targets,
            angle,
        })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn angle(&self) -> Option<Angle> {
        self.angle
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_and_parameter_rules_are_enforced() {
        assert!(GateOp::new(GateKind::H, vec![0], None).is_ok());
        assert!(GateOp::new(GateKind::H, vec![0], Some(Angle::Fixed(1.0))).is_err());
        assert!(GateOp::new(GateKind::Rx, vec![0], None).is_err());
        assert!(GateOp::new(GateKind::Cnot, vec![0], None).is_err());
        assert!(GateOp::new(GateKind::Cnot, vec![1, 1], None).is_err());
        assert!(GateOp::new(GateKind::Cswap, vec![0, 1, 2], None).is_ok());
        assert!(GateOp::new(GateKind::Crz, vec![0, 2], Some(Angle::Symbol(0))).is_ok());
    }
}
