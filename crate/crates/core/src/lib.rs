//! Quantum state ensembles with prescribed concentratable-entanglement
//! distributions.
//!
//! ```
//! use cedist::entanglement::ce_full;
//! use cedist::sim::{apply_circuit, Circuit, StateVector};
//!
//! let mut c = Circuit::new(2);
//! c.h(0)?.cnot(0, 1)?;
//! let bell = apply_circuit(&StateVector::zero(2), &c, &[])?;
//! assert!((ce_full(&bell)?.value - 0.25).abs() < 1e-12);
//! # Ok::<(), cedist::Error>(())
//! ```
//!
//! The guide in `book/` covers each module in turn.

// Negated float comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ansatz;
pub mod diversity;
pub mod entanglement;
pub mod error;
pub mod generator;
pub mod io;
pub mod qml;
pub mod rng;
pub mod sensors;
pub mod sim;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/simulator.md")]
    struct Simulator;
    #[doc = include_str!("../../../book/src/entanglement.md")]
    struct Entanglement;
    #[doc = include_str!("../../../book/src/generator.md")]
    struct Generator;
    #[doc = include_str!("../../../book/src/diversity.md")]
    struct Diversity;
    #[doc = include_str!("../../../book/src/sensors.md")]
    struct Sensors;
    #[doc = include_str!("../../../book/src/classifier.md")]
    struct Classifier;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
    #[doc = include_str!("../../../README.md")]
    struct Readme;
}
