//! Finite-time quantum Fisher information bounds for thermometry with
//! Markovian probes, and the measurement strategies that reach them.
//!
//! Modules, bottom-up:
//! - [`spectral`]: Bose occupations, bath rates and Lamb-shift integrals.
//! - [`operators`]: dense Hermitian linear algebra.
//! - [`lindblad`]: master-equation models and sensitivity propagation.
//! - [`fisher`]: classical and quantum Fisher information.
//! - [`bounds`]: QFI-rate upper bounds and their certificates.
//! - [`strategies`]: explicit protocols and their Fisher-information rates.
//! - [`collective`]: the N-qubit Dicke-ladder probe.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod collective;
pub mod error;
pub mod fisher;
pub mod lindblad;
pub mod operators;
pub mod optimize;
pub mod quadrature;
pub mod spectral;
pub mod strategies;

pub use error::{Error, Result};
