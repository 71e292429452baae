//! Higher-order Schrödinger-Robertson uncertainty relations and
//! partial-transpose entanglement tests on truncated two-mode Fock spaces.

pub mod cli;
pub mod criteria;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod moments;
pub mod states;
pub mod symplectic;
pub mod tolerances;
pub mod weyl;

pub use error::{Error, Result};
