//! Clifford-space canonical dynamics.
//!
//! Space-time coordinates and momenta are resolved into Gram matrices of
//! Weyl spinors with values in a split real Clifford algebra. On top of that
//! resolution the crate provides single-particle canonical dynamics, N-particle
//! matrix mechanics with its U(N) gauge symmetry, flat-worldsheet string
//! solutions, and structure-constant checks for the charge algebras.

pub mod clifford;
pub mod lie;
mod error;
pub mod linalg;
pub mod matrixmech;
pub mod particle;
pub mod ode;
pub mod quadrature;
pub mod spinor;
pub mod string;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
