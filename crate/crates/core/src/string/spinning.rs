use super::spec::{Coef, ModeSpec};
use crate::linalg::{c, CMat};
use crate::spinor::FourVector;
use crate::{Error, Result};

/// The rigidly spinning string `c^1 = kτ + a e^{i(τ+σ)/2} + b e^{i(τ−σ)/2}`,
/// `c^2 = lτ + a e^{−i(τ+σ)/2} + b e^{−i(τ−σ)/2}` with `k∙k* = l∙l* = κ`,
/// `a∙a* = b∙b* = α` and all other products zero. Its mass is `κ^{1/3}`.
pub fn spinning_string(kappa: f64, alpha: f64) -> Result<ModeSpec> {
    if !(kappa > 0.0 && alpha >= 0.0) {
        return Err(Error::InvalidModeSpec(format!("need κ > 0 and α >= 0, got κ = {kappa}, α = {alpha}")));
    }
    let m = |entries: [[f64; 2]; 2]| CMat::from_fn(2, 2, |i, j| c(entries[i][j], 0.0));
    let mut spec = ModeSpec::new(kappa.cbrt(), &[-1, 1])?;
    spec.set(Coef::L, Coef::L, m([[kappa, 0.0], [0.0, kappa]]))?;
    for (plus, minus) in [(Coef::A(1), Coef::A(-1)), (Coef::B(1), Coef::B(-1))] {
        spec.set(plus, plus, m([[alpha, 0.0], [0.0, 0.0]]))?;
        spec.set(minus, minus, m([[0.0, 0.0], [0.0, alpha]]))?;
        spec.set(plus, minus, m([[0.0, alpha], [0.0, 0.0]]))?;
    }
    Ok(spec)
}

/// `(x, y, z, t) = (2α cos τ cos σ, 2α sin τ cos σ, 0, 2α + κτ²)`.
pub fn spinning_coordinates(kappa: f64, alpha: f64, tau: f64, sigma: f64) -> [f64; 4] {
    let r = 2.0 * alpha * sigma.cos();
    [r * tau.cos(), r * tau.sin(), 0.0, 2.0 * alpha + kappa * tau * tau]
}

/// `(x, y, z, t)` read off a four-vector in the σ-matrix convention used here,
/// where `y = Im x^{12} = −x²`.
pub fn to_spinning_frame(x: &FourVector) -> [f64; 4] {
    [x[1], -x[2], x[3], x[0]]
}

