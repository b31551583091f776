//! The four ansatz families.
//!
//! One layer of each family, repeated `layers` times:
//!
//! | family | layer                                                        | params / layer  |
//! |--------|--------------------------------------------------------------|-----------------|
//! | A1     | RX, RZ on every qubit; CRZ on chain pairs (i, i+1)           | 3n − 1          |
//! | A2     | RX, RZ on every qubit; CRZ on all pairs i < j                | 2n + n(n−1)/2   |
//! | A3     | H on every qubit; CRX on chain pairs; RZ on every qubit      | 2n − 1          |
//! | A4     | RX, RY on every qubit; CNOT on chain pairs; CRZ on chain pairs | 3n − 1        |
//!
//! Symbolic parameters are numbered in gate emission order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::Circuit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AnsatzFamily {
    A1,
    A2,
    A3,
    A4,
}

impl AnsatzFamily {
    pub const ALL: [AnsatzFamily; 4] = [
        AnsatzFamily::A1,
        AnsatzFamily::A2,
        AnsatzFamily::A3,
        AnsatzFamily::A4,
    ];
}

impl fmt::Display for AnsatzFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AnsatzFamily::A1 => "A1",
            AnsatzFamily::A2 => "A2",
            AnsatzFamily::A3 => "A3",
            AnsatzFamily::A4 => "A4",
        };
        f.write_str(s)
    }
}

impl FromStr for AnsatzFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(AnsatzFamily::A1),
            "A2" => Ok(AnsatzFamily::A2),
            "A3" => Ok(AnsatzFamily::A3),
            "A4" => Ok(AnsatzFamily::A4),
            other => Err(Error::Contract(format!("unknown ansatz family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub family: AnsatzFamily,
    pub num_qubits: usize,
    pub layers: usize,
}

impl AnsatzSpec {
    pub fn new(family: AnsatzFamily, num_qubits: usize) -> Self {
        AnsatzSpec {
            family,
            num_qubits,
            layers: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_qubits < 2 {
            return Err(Error::Structural(format!(
                "ansatz needs at least 2 qubits, got {}",
                self.num_qubits
            )));
        }
        if self.layers == 0 {
            return Err(Error::Structural("ansatz needs at least one layer".into()));
        }
        Ok(())
    }
}

impl fmt::Display for AnsatzSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={}, layers={})", self.family, self.num_qubits, self.layers)
    }
}

pub fn param_count(spec: &AnsatzSpec) -> usize {
    let n = spec.num_qubits;
    let per_layer = match spec.family {
        AnsatzFamily::A1 | AnsatzFamily::A4 => 3 * n - 1,
        AnsatzFamily::A2 => 2 * n + n * (n - 1) / 2,
        AnsatzFamily::A3 => 2 * n - 1,
    };
    per_layer * spec.layers
}

pub fn build_ansatz(spec: &AnsatzSpec) -> Result<Circuit> {
    spec.validate()?;
    let n = spec.num_qubits;
    let mut c = Circuit::new(n);
    for _ in 0..spec.layers {
        match spec.family {
            AnsatzFamily::A1 => {
                rx_rz_layer(&mut c)?;
                for i in 0..n - 1 {
                    let p = c.new_param();
                    c.crz(i, i + 1, p)?;
                }
            }
            AnsatzFamily::A2 => {
                rx_rz_layer(&mut c)?;
                for i in 0..n {
                    for j in i + 1..n {
                        let p = c.new_param();
                        c.crz(i, j, p)?;
                    }
                }
            }
            AnsatzFamily::A3 => {
                for q in 0..n {
                    c.h(q)?;
                }
                for i in 0..n - 1 {
                    let p = c.new_param();
                    c.crx(i, i + 1, p)?;
                }
                for q in 0..n {
                    let p = c.new_param();
                    c.rz(q, p)?;
                }
            }
            AnsatzFamily::A4 => {
                for q in 0..n {
                    let p = c.new_param();
                    c.rx(q, p)?;
                    let p = c.new_param();
                    c.ry(q, p)?;
                }
                for i in 0..n - 1 {
                    c.cnot(i, i + 1)?;
                }
                for i in 0..n - 1 {
                    let p = c.new_param();
                    c.crz(i, i + 1, p)?;
                }
            }
        }
    }
    debug_assert_eq!(c.num_symbolic_params(), param_count(spec));
    Ok(c)
}

fn rx_rz_layer(c: &mut Circuit) -> Result<()> {
    for q in 0..c.num_qubits() {
        let p = c.new_param();
        c.rx(q, p)?;
        let p = c.new_param();
        c.rz(q, p)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::ce_full;
    use crate::sim::{apply_circuit, circuit_depth_report, GateKind, StateVector};
    use std::collections::BTreeSet;

    fn alphabet(c: &Circuit) -> BTreeSet<GateKind> {
        c.ops().iter().map(|op| op.kind()).collect()
    }

    fn spec(family: AnsatzFamily, n: usize, layers: usize) -> AnsatzSpec {
        AnsatzSpec {
            family,
            num_qubits: n,
            layers,
        }
    }

    #[test]
    fn alphabets() {
        use GateKind::*;
        let expect: [(AnsatzFamily, &[GateKind]); 4] = [
            (AnsatzFamily::A1, &[Rx, Rz, Crz]),
            (AnsatzFamily::A2, &[Rx, Rz, Crz]),
            (AnsatzFamily::A3, &[H, Rz, Crx]),
            (AnsatzFamily::A4, &[Rx, Ry, Cnot, Crz]),
        ];
        for (family, kinds) in expect {
            for n in 2..6 {
                let c = build_ansatz(&spec(family, n, 2)).unwrap();
                assert_eq!(alphabet(&c), kinds.iter().copied().collect(), "{family} n={n}");
            }
        }
    }

    #[test]
    fn param_counts() {
        assert_eq!(param_count(&spec(AnsatzFamily::A1, 4, 1)), 11);
        assert_eq!(param_count(&spec(AnsatzFamily::A3, 4, 1)), 7);
        assert_eq!(param_count(&spec(AnsatzFamily::A4, 4, 1)), 11);
        assert_eq!(param_count(&spec(AnsatzFamily::A2, 4, 1)), 14);
        for family in AnsatzFamily::ALL {
            for n in 2..7 {
                for layers in 1..4 {
                    let s = spec(family, n, layers);
                    assert_eq!(build_ansatz(&s).unwrap().num_symbolic_params(), param_count(&s));
                }
            }
        }
    }

    #[test]
    fn every_rotation_has_its_own_symbol_in_emission_order() {
        for family in AnsatzFamily::ALL {
            let c = build_ansatz(&spec(family, 4, 2)).unwrap();
            let symbols: Vec<usize> = c
                .ops()
                .iter()
                .filter_map(|op| match op.angle() {
                    Some(crate::sim::Angle::Symbol(i)) => Some(i),
                    _ => None,
                })
                .collect();
            assert_eq!(symbols, (0..c.num_symbolic_params()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn density_and_depth_ordering() {
        for n in 3..7 {
            let a1 = build_ansatz(&spec(AnsatzFamily::A1, n, 1)).unwrap();
            let a2 = build_ansatz(&spec(AnsatzFamily::A2, n, 1)).unwrap();
            assert!(a2.entangling_count() > a1.entangling_count());
            let a3 = build_ansatz(&spec(AnsatzFamily::A3, n, 1)).unwrap();
            let a4 = build_ansatz(&spec(AnsatzFamily::A4, n, 1)).unwrap();
            assert!(circuit_depth_report(&a4).depth >= circuit_depth_report(&a3).depth);
        }
    }

    #[test]
    fn entangling_graph_is_connected() {
        for family in AnsatzFamily::ALL {
            for n in 2..7 {
                let c = build_ansatz(&spec(family, n, 1)).unwrap();
                let mut parent: Vec<usize> = (0..n).collect();
                fn find(p: &mut Vec<usize>, x: usize) -> usize {
                    if p[x] != x {
                        let r = find(p, p[x]);
                        p[x] = r;
                    }
                    p[x]
                }
                for op in c.ops().iter().filter(|op| op.kind().is_multi_qubit()) {
                    let t = op.targets();
                    let (a, b) = (find(&mut parent, t[0]), find(&mut parent, t[1]));
                    parent[a] = b;
                }
                let root = find(&mut parent, 0);
                assert!((0..n).all(|q| find(&mut parent, q) == root), "{family} n={n}");
            }
        }
    }

    #[test]
    fn zero_angles_keep_a1_a2_product() {
        for family in [AnsatzFamily::A1, AnsatzFamily::A2] {
            let s = spec(family, 4, 1);
            let c = build_ansatz(&s).unwrap();
            let out = apply_circuit(&StateVector::zero(4), &c, &vec![0.0; param_count(&s)]).unwrap();
            assert!(ce_full(&out).unwrap().value.abs() < 1e-10);
        }
    }

    #[test]
    fn deterministic_and_validated() {
        let s = spec(AnsatzFamily::A4, 5, 2);
        assert_eq!(build_ansatz(&s).unwrap(), build_ansatz(&s).unwrap());
        assert!(matches!(
            build_ansatz(&spec(AnsatzFamily::A1, 1, 1)),
            Err(Error::Structural(_))
        ));
    }
}
