use num_complex::Complex64;

use super::spec::Coef;
use super::state::{raise_spinor, spinor_products, WaveState, WORLDSHEET_ETA};
use crate::linalg::{re, CMat};
use crate::spinor::lower_both;
use crate::Result;

pub type WorldsheetTensor = [[f64; 2]; 2];

/// `Σ X_{FE} Y^{FE}`
fn contract(x: &CMat, y: &CMat) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b).sum()
}

/// `T^{αβ} = ½(3p² − m²) η^{αβ} − p^{AḂ} d*^{(α}_A ∙ d^{β)}_Ḃ`
pub fn energy_momentum(state: &WaveState, tau: f64, sigma: f64) -> Result<WorldsheetTensor> {
    let p2 = state.p_squared()?;
    let m2 = state.spec().mass.powi(2);
    let p = state.p_spinor()?;
    let ds = state.dstar_upper(tau, sigma)?;
    let d = ds.clone().map(|s| s.map(|v| v.conj()));
    let mut t = [[0.0; 2]; 2];
    for al in 0..2 {
        for be in 0..2 {
            let s = (spinor_products(&ds[al], &d[be])? + spinor_products(&ds[be], &d[al])?) * re(0.5);
            let diag = if al == be { 0.5 * (3.0 * p2 - m2) * WORLDSHEET_ETA[al] } else { 0.0 };
            t[al][be] = diag - contract(&p, &s).re;
        }
    }
    Ok(t)
}

/// `η_{αβ} T^{αβ}`, which equals `p² − m²`.
pub fn energy_momentum_trace(t: &WorldsheetTensor) -> f64 {
    WORLDSHEET_ETA[0] * t[0][0] + WORLDSHEET_ETA[1] * t[1][1]
}

/// `∂_α∂_β φ = −m² η_{αβ} + (η_{γδ} d*^γ_A ∙ d^δ_Ḃ) d*^A_{(α} ∙ d^Ḃ_{β)}`,
/// evaluated directly from the polymomenta.
pub fn dilaton_hessian(state: &WaveState, tau: f64, sigma: f64) -> Result<WorldsheetTensor> {
    let m2 = state.on_shell_mass_squared()?;
    let ds_up = state.dstar_upper(tau, sigma)?;
    let d_up = ds_up.clone().map(|s| s.map(|v| v.conj()));
    let mut s = CMat::zeros(2, 2);
    for g in 0..2 {
        s += spinor_products(&ds_up[g], &d_up[g])? * re(WORLDSHEET_ETA[g]);
    }
    let ds_raised = state.dstar_lower(tau, sigma)?.map(|x| raise_spinor(&x));
    let d_raised = state.d_lower(tau, sigma)?.map(|x| raise_spinor(&x));
    let mut h = [[0.0; 2]; 2];
    for al in 0..2 {
        for be in 0..2 {
            let sym = (spinor_products(&ds_raised[al], &d_raised[be])?
                + spinor_products(&ds_raised[be], &d_raised[al])?)
                * re(0.5);
            let flat = if al == be { -m2 * WORLDSHEET_ETA[al] } else { 0.0 };
            h[al][be] = flat + contract(&s, &sym).re;
        }
    }
    Ok(h)
}

/// Integration constants of the dilaton: `φ_0 + k_α σ^α`.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DilatonConstants {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub slope: [f64; 2],
}

/// Closed-form dilaton of a free string:
/// `φ = φ_0 + k_α σ^α + ½m²(τ² + σ²) + κ Σ_n l_A∙l*_Ḃ [½n² a_n^A∙a_n^{*Ḃ} u² +
/// a_n^A∙a_{−n}^{*Ḃ} e^{inu}] + (b, v)` with `u = τ+σ`, `v = τ−σ`, `κ = ¼ (p²)^{−2}`.
pub fn dilaton(state: &WaveState, k: &DilatonConstants, tau: f64, sigma: f64) -> Result<f64> {
    let m2 = state.on_shell_mass_squared()?;
    let p2 = state.p_squared()?;
    let kappa = 0.25 / (p2 * p2);
    let l_low = lower_both(&state.l_gram());
    let spec = state.spec();
    let mut phi = k.constant + k.slope[0] * tau + k.slope[1] * sigma + 0.5 * m2 * (tau * tau + sigma * sigma);
    let mut modes = Complex64::new(0.0, 0.0);
    for &n in spec.modes() {
        let nf = n as f64;
        for (coef, partner, w) in [
            (Coef::A(n), Coef::A(-n), tau + sigma),
            (Coef::B(n), Coef::B(-n), tau - sigma),
        ] {
            modes += contract(&l_low, &spec.block(coef, coef)) * (0.5 * nf * nf * w * w);
            if spec.modes().contains(&-n) {
                modes += contract(&l_low, &spec.block(coef, partner)) * Complex64::from_polar(1.0, nf * w);
            }
        }
    }
    phi += kappa * modes.re;
    Ok(phi)
}
