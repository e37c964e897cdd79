//! Noether-current brackets of the string on a spacelike curve and the Lie
//! algebras they generate: `SL(2,ℂ)`, its `su(2) ⊕ su(2)` form, Poincaré, and
//! the unitary current.

mod algebra;
mod presentation;
mod sample;

pub use algebra::{
    assemble_poincare, charge_algebra, levi_civita_presentation, matrix_presentation, n_matrix, nk_decomposition, poincare_basis,
    poincare_check, poincare_matrices, unitary_current_check, ChargeAlgebra, NkDecomposition, PoincareReport,
    UnitaryReport, JACOBI_LIMIT, J_LABELS, POINCARE_LABELS,
};
pub use presentation::{LiePresentation, LiePresentationJson};
pub use sample::{
    current_pattern, local_bracket, lower_spinor, sample_currents, sym_index, CurrentSample, LocalGradient, SYM_PAIRS,
};
