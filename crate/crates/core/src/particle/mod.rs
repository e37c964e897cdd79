//! Single-particle canonical dynamics on Clifford spinors.

mod action;
mod einbein;
mod observable;
mod state;
mod trajectory;

pub use action::{lagrangian_c2, momentum_from_velocity, polyakov, velocity_gram};
pub use einbein::{mu_of_tau, Einbein, EinbeinFn, EinbeinJson};
pub use observable::{gradient_check, poisson_bracket, FreeHamiltonian, Monomial, Observable, Polynomial};
pub use state::{
    canonical_rhs, clifford_bracket, clifford_bracket_c, flow, hamiltonian_c5, noether_charges, p_gradient_matrix,
    x_gradient_matrix, NoetherCharges, ParticleState, StateDerivative,
};
pub use trajectory::{
    integrate, summarize, GramConfig, ParticleConfig, ParticleSummary, Trajectory, TrajectoryPoint,
};
