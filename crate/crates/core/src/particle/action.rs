use crate::clifford::ClVector;
use crate::linalg::CMat;
use crate::spinor::{det2, lower_both};
use crate::{Error, Result};

/// `V^{AḂ} = ċ^A ∙ ċ*^Ḃ`
pub fn velocity_gram(cdot: &[ClVector; 2]) -> CMat {
    CMat::from_fn(2, 2, |a, b| cdot[a].dot(&cdot[b].conj()))
}

/// `½ V^{AḂ} V_{AḂ}`, which equals `det V`.
fn contraction(cdot: &[ClVector; 2]) -> Result<f64> {
    let d = det2(&velocity_gram(cdot)).re;
    if d < 0.0 || !d.is_finite() {
        return Err(Error::Domain(format!("velocity is not time-like (contraction {d})")));
    }
    Ok(d)
}

/// Integrand of the quartic-root action, `4√m (½ V V)^{1/4}`.
pub fn lagrangian_c2(cdot: &[ClVector; 2], mass: f64) -> Result<f64> {
    Ok(4.0 * mass.sqrt() * contraction(cdot)?.powf(0.25))
}

/// Integrand of the einbein form, `3 e^{−1/3} (½ V V)^{1/3} + m² e`.
pub fn polyakov(cdot: &[ClVector; 2], e: f64, mass: f64) -> Result<f64> {
    Ok(3.0 * e.powf(-1.0 / 3.0) * contraction(cdot)?.cbrt() + mass * mass * e)
}

/// Momenta conjugate to `c` for the quartic-root action:
/// `d*_A = √m (½ V V)^{−3/4} V_{AḂ} ċ*^Ḃ`.
pub fn momentum_from_velocity(cdot: &[ClVector; 2], mass: f64) -> Result<[ClVector; 2]> {
    let d = contraction(cdot)?;
    if d == 0.0 {
        return Err(Error::Domain("light-like velocity has no conjugate momentum".into()));
    }
    let low = lower_both(&velocity_gram(cdot));
    let scale = mass.sqrt() * d.powf(-0.75);
    let space = cdot[0].space();
    Ok(std::array::from_fn(|a| {
        let mut v = ClVector::zero(space);
        for b in 0..2 {
            v.axpy(low[(a, b)] * scale, &cdot[b].conj());
        }
        v
    }))
}
