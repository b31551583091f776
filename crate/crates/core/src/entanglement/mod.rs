//! Concentratable-entanglement estimators, CE histograms and the total
//! variation distance between them.

mod ce;
mod histogram;

pub use ce::{
    ce1_swap_bounds, ce_full, ce_k, nzp, nzp_sampled, single_qubit_swap_p0, CeEstimate, CeMethod,
    MAX_FULL_QUBITS,
};
pub use histogram::{bin_index, histogram, tvd, uniform_edges, CeHistogram, ClampReport};
pub(crate) use histogram::tvd_masses;
