use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::StateVector;
use crate::error::{Error, Result};

/// Row-major complex square matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Shape(format!(
                "{} entries for a {dim}x{dim} matrix",
                data.len()
            )));
        }
        Ok(DensityMatrix { dim, data })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let dim = a.len();
        let mut data = Vec::with_capacity(dim * dim);
        for x in a {
            for y in a {
                data.push(x * y.conj());
            }
        }
        DensityMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest elementwise deviation `|ρ_ij − conj(ρ_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

/// Spread the low bits of `value` over the set bits of `mask`.
#[inline]
pub(crate) fn deposit(mut value: usize, mut mask: usize) -> usize {
    let mut out = 0;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if value & 1 != 0 {
            out |= low;
        }
        value >>= 1;
        mask &= mask - 1;
    }
    out
}

fn check_keep(state: &StateVector, keep: &[usize]) -> Result<usize> {
    if keep.is_empty() {
        return Err(Error::Contract(
            "partial trace needs at least one kept qubit".into(),
        ));
    }
    let mut mask = 0usize;
    for &q in keep {
        if q >= state.num_qubits() {
            return Err(Error::Structural(format!(
                "qubit {q} out of range for a {}-qubit state",
                state.num_qubits()
            )));
        }
        if mask & (1 << q) != 0 {
            return Err(Error::Structural(format!("qubit {q} listed twice")));
        }
        mask |= 1 << q;
    }
    Ok(mask)
}

/// Reduced density matrix over `keep`, tracing out every other qubit.
///
/// The kept qubits are re-indexed in ascending order, so the smallest kept
/// qubit becomes bit 0 of the reduced basis index.
pub fn partial_trace(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let mask = check_keep(state, keep)?;
    Ok(reduce(state, mask))
}

pub(crate) fn reduce(state: &StateVector, keep_mask: usize) -> DensityMatrix {
    let full = state.dim() - 1;
    let rest_mask = full & !keep_mask;
    let k = keep_mask.count_ones() as usize;
    let dk = 1usize << k;
    let dr = 1usize << (state.num_qubits() - k);
    let kept: Vec<usize> = (0..dk).map(|a| deposit(a, keep_mask)).collect();
    let amps = state.amplitudes();
    let mut data = vec![Complex64::new(0.0, 0.0); dk * dk];
    for r in 0..dr {
        let base = deposit(r, rest_mask);
        for (a, &ka) in kept.iter().enumerate() {
            let x = amps[base | ka];
            if x.norm_sqr() == 0.0 {
                continue;
            }
            for (b, &kb) in kept.iter().enumerate() {
                data[a * dk + b] += x * amps[base | kb].conj();
            }
        }
    }
    DensityMatrix { dim: dk, data }
}

/// `Tr ρ²` for a Hermitian, unit-trace `ρ`.
pub fn purity(rho: &DensityMatrix) -> Result<f64> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-6 || tr.im.abs() > 1e-6 {
        return Err(Error::NumericalState(format!(
            "density matrix trace {tr} is not 1"
        )));
    }
    // Tr ρ² = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ.
    Ok(rho.data.iter().map(|z| z.norm_sqr()).sum())
}

/// Purity of the marginal on the qubits in `mask` for a pure state. Uses
/// whichever side of the bipartition is smaller, since both marginals of
/// a pure state share their spectrum.
pub(crate) fn subset_purity(state: &StateVector, mask: usize) -> f64 {
    let full = state.dim() - 1;
    let mask = mask & full;
    if mask == 0 || mask == full {
        return 1.0;
    }
    let k = mask.count_ones() as usize;
    let side = if 2 * k <= state.num_qubits() {
        mask
    } else {
        full & !mask
    };
    reduce(state, side).data.iter().map(|z| z.norm_sqr()).sum()
}
