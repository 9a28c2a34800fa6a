//! Quantum Fisher information for a PT-symmetric oscillator probe.
//!
//! The library is organized around a single bosonic mode:
//!
//! - [`gaussian`]: single-mode Gaussian states, fidelity, Bures distance, purity.
//! - [`qfi`]: quantum Fisher information by two independent routes (Gaussian
//!   closed form and Bures finite differences) plus the Cramér–Rao bound.
//! - [`swanson`]: the Swanson-oscillator probe — effective frequency, phase
//!   classification, thermal probe state, closed-form QFIs, gain ratio, and
//!   energetic-cost ratios.
//! - [`focklab`]: truncated-Fock-space verification of the non-Hermitian
//!   machinery (PT symmetry, Dyson map, metric operator, quasi-Hermiticity,
//!   isospectrality, thermal-state mapping, expectation equivalence).
//! - [`estimator`]: Monte-Carlo homodyne estimation validating the
//!   Cramér–Rao bound empirically.
//!
//! All covariance matrices use the convention with vacuum covariance equal
//! to the identity; see [`conventions`] for the constants calibrated against
//! the Fock-space oracles.

pub mod conventions;
pub mod error;
pub mod estimator;
pub mod focklab;
pub mod gaussian;
pub mod qfi;
pub mod swanson;

pub use error::{Error, Result};
