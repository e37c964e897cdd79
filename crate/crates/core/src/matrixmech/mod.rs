//! N-particle matrix mechanics: U(N) gauge action, classical ket flow,
//! Heisenberg and covariant matrix evolution, and state vectors.

mod classical;
mod config;
mod quantum;
mod system;

pub use classical::{evolve_matrix_classical, ClassicalTrajectory};
pub use config::{MatrixConfig, MatrixParticle, MatrixReport, OscillatorConfig};
pub use quantum::{
    annihilation, born_probabilities, born_sample, ccr_defect, covariant_evolve, evolve_heisenberg, evolve_state,
    interior, proper_time_rate, truncated_oscillator, CVec, Connection, FreeMatrixHamiltonian, MatrixHamiltonian,
    MatrixTrajectory, Oscillator1D, StateVector,
};
pub use system::{assemble, weight_matrix_residual, NSystem};
