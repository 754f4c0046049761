//! Logarithmic derivation modules of multiarrangements, their Hilbert
//! series, and the polynomial invariants built from them.

pub mod arrangement;
pub mod error;
pub mod groebner;
pub mod lattice;
pub mod logmod;
pub mod ratpoly;
pub mod stpoly;
pub mod verify;

pub use error::{Error, ErrorCategory, Result};
