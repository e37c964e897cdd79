//! Generator allocation, grade-1 Clifford vectors with the bullet product,
//! and the constructive resolution of Hermitian matrices into spinor Gram
//! matrices.

mod basis;
mod eigen;
mod hermitian;
mod resolve;
mod space;
mod vector;

pub use basis::{standard_basis, standard_basis_of, StandardBasis};
pub use eigen::{hermitian_eig, hermitian_eig_matrix, Eigen, JACOBI_MAX_SWEEPS, JACOBI_TOL};
pub use hermitian::{HermitianMatrix, HermitianMatrixJson, HERMITIAN_TOL};
pub use resolve::{
    noether_cross, particle_space, resolve_hermitian, resolve_hermitian_in, resolve_pair,
    resolve_pair_in, CanonicalPair, GramResolution, GramResolutionJson, VectorJson, ZERO_EIG_REL,
};
pub use space::{Block, GeneratorSpace};
pub use vector::{bullet, combine, ClVector};

#[cfg(test)]
mod tests;
