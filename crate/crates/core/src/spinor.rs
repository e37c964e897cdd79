//! Four-vectors as 2×2 spinor matrices, and ε index gymnastics.
//!
//! Signature is (+,−,−,−). `ε^{12} = ε_{12} = +1`; an upper index is raised
//! by `κ^A = ε^{AB} κ_B` and lowered by `κ_B = κ^A ε_{AB}`, so the two maps
//! are mutually inverse.

use num_complex::Complex64;

use crate::linalg::{c, re, CMat, I};

pub type FourVector = [f64; 4];
pub type ComplexFourVector = [Complex64; 4];

pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// `ε` as a matrix; the same numbers serve for both index positions.
pub fn epsilon() -> CMat {
    CMat::from_row_slice(2, 2, &[re(0.0), re(1.0), re(-1.0), re(0.0)])
}

/// σ_μ^{AḂ}: identity followed by the Pauli matrices.
pub fn sigma(mu: usize) -> CMat {
    let z = re(0.0);
    let o = re(1.0);
    let entries = match mu {
        0 => [o, z, z, o],
        1 => [z, o, o, z],
        2 => [z, -I, I, z],
        3 => [o, z, z, -o],
        _ => panic!("sigma index {mu} out of range"),
    };
    CMat::from_row_slice(2, 2, &entries)
}

pub fn vec_to_spinor(v: &FourVector) -> CMat {
    vec_to_spinor_c(&v.map(re))
}

pub fn vec_to_spinor_c(v: &ComplexFourVector) -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[v[0] + v[3], v[1] - I * v[2], v[1] + I * v[2], v[0] - v[3]],
    )
}

/// Inverse of [`vec_to_spinor_c`] on arbitrary 2×2 matrices.
pub fn spinor_to_vec_c(s: &CMat) -> ComplexFourVector {
    assert_eq!(s.shape(), (2, 2), "spinor must be 2x2");
    let half = 0.5;
    [
        (s[(0, 0)] + s[(1, 1)]) * half,
        (s[(0, 1)] + s[(1, 0)]) * half,
        (s[(1, 0)] - s[(0, 1)]) * c(0.0, -half),
        (s[(0, 0)] - s[(1, 1)]) * half,
    ]
}

/// Real parts of [`spinor_to_vec_c`]; exact for Hermitian input.
pub fn spinor_to_vec(s: &CMat) -> FourVector {
    spinor_to_vec_c(s).map(|z| z.re)
}

pub fn det2(s: &CMat) -> Complex64 {
    s[(0, 0)] * s[(1, 1)] - s[(0, 1)] * s[(1, 0)]
}

/// `V^μ V_μ` read off the determinant.
pub fn minkowski_norm(s: &CMat) -> f64 {
    det2(s).re
}

pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> f64 {
    (0..4).map(|m| METRIC[m] * a[m] * b[m]).sum()
}

pub fn minkowski_dot_c(a: &ComplexFourVector, b: &ComplexFourVector) -> Complex64 {
    (0..4).map(|m| METRIC[m] * a[m] * b[m]).sum()
}

pub fn lower_index(mu: usize, v: &FourVector) -> f64 {
    METRIC[mu] * v[mu]
}

pub fn raise(k: [Complex64; 2]) -> [Complex64; 2] {
    [k[1], -k[0]]
}

pub fn lower(k: [Complex64; 2]) -> [Complex64; 2] {
    [-k[1], k[0]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexOp {
    Keep,
    Raise,
    Lower,
}

/// Moves each of the two indices of `s` independently.
pub fn epsilon_raise_lower(s: &CMat, ops: [IndexOp; 2]) -> CMat {
    let e = epsilon();
    let et = e.transpose();
    let left = match ops[0] {
        IndexOp::Keep => s.clone(),
        IndexOp::Raise => &e * s,
        IndexOp::Lower => &et * s,
    };
    match ops[1] {
        IndexOp::Keep => left,
        IndexOp::Raise => left * et,
        IndexOp::Lower => left * e,
    }
}

pub fn lower_both(s: &CMat) -> CMat {
    epsilon_raise_lower(s, [IndexOp::Lower, IndexOp::Lower])
}

pub fn raise_both(s: &CMat) -> CMat {
    epsilon_raise_lower(s, [IndexOp::Raise, IndexOp::Raise])
}

/// Largest deviation in `V_{AĖ}V^{BĖ} = ½ δ_A^B V_{FĖ}V^{FĖ}`, relative to `|V|²`.
pub fn four_vector_identity_residual(v_upper: &CMat) -> f64 {
    let low = lower_both(v_upper);
    let contracted = &low * v_upper.transpose();
    let trace = contracted.trace();
    let rhs = CMat::identity(2, 2) * (trace * 0.5);
    let scale = v_upper.iter().map(|z| z.norm_sqr()).sum::<f64>().max(f64::MIN_POSITIVE);
    crate::linalg::max_abs(&(contracted - rhs)) / scale
}
