//! Every acceptance threshold in one place. The CLI reads overrides from a
//! JSON object with any subset of these fields.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Gram reproduction by `resolve_hermitian`.
    pub resolve: f64,
    /// Mutual bullet products of the resolved vectors.
    pub isotropy: f64,
    /// Relative residual of the four-vector contraction identity.
    pub four_vector: f64,
    /// `|CB − μ PB| / (1 + |PB|)`.
    pub bracket: f64,
    /// Free-particle straight line, mass-shell drift and μ(τ).
    pub particle: f64,
    pub gauge_covariance: f64,
    pub constraint_invariance: f64,
    pub picture: f64,
    pub stationary: f64,
    /// Allowed distance of a finite-difference order from 2.
    pub order: f64,
    pub field_residual: f64,
    pub trace: f64,
    pub total_momentum: f64,
    pub spinning: f64,
    pub current_algebra: f64,
    pub structure_constants: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            resolve: 1e-10,
            isotropy: 1e-12,
            four_vector: 1e-12,
            bracket: 1e-9,
            particle: 1e-8,
            gauge_covariance: 1e-10,
            constraint_invariance: 1e-11,
            picture: 1e-8,
            stationary: 1e-9,
            order: 0.2,
            field_residual: 1e-6,
            trace: 1e-9,
            total_momentum: 1e-8,
            spinning: 1e-10,
            current_algebra: 1e-9,
            structure_constants: 1e-10,
        }
    }
}
