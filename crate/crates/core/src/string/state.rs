use std::sync::Arc;

use num_complex::Complex64;

use super::spec::{Coef, ModeSpec};
use crate::clifford::{bullet, resolve_hermitian, ClVector, GeneratorSpace, GramResolution};
use crate::linalg::{c, re, CMat};
use crate::spinor::{det2, lower_both, raise, spinor_to_vec, FourVector};
use crate::{Error, Result};

/// Worldsheet metric `diag(1, −1)` in `(τ, σ)`.
pub const WORLDSHEET_ETA: [f64; 2] = [1.0, -1.0];

pub type Spinor = [ClVector; 2];

/// A realized free string: one Clifford spinor per expansion coefficient.
#[derive(Debug, Clone)]
pub struct WaveState {
    spec: ModeSpec,
    space: Arc<GeneratorSpace>,
    coefs: Vec<(Coef, Spinor)>,
    resolution: GramResolution,
}

/// Realize every coefficient so that their products reproduce the spec Gram.
pub fn build_wave_state(spec: &ModeSpec) -> Result<WaveState> {
    let gram = spec.gram()?;
    let n = gram.n();
    let space = GeneratorSpace::allocate(2 * n, 2 * n)?;
    let resolution = resolve_hermitian(&gram, &space)?;
    let coefs = spec
        .labels()
        .into_iter()
        .enumerate()
        .map(|(i, label)| {
            let v = &resolution.vectors;
            (label, [v[2 * i].clone(), v[2 * i + 1].clone()])
        })
        .collect();
    Ok(WaveState { spec: spec.clone(), space, coefs, resolution })
}

fn wave_phase(label: Coef, tau: f64, sigma: f64) -> Option<(f64, Complex64)> {
    let (n, u) = match label {
        Coef::A(n) => (n, tau + sigma),
        Coef::B(n) => (n, tau - sigma),
        _ => return None,
    };
    let k = 0.5 * n as f64;
    Some((k, Complex64::from_polar(1.0, k * u)))
}

impl WaveState {
    pub fn spec(&self) -> &ModeSpec {
        &self.spec
    }

    pub fn space(&self) -> &Arc<GeneratorSpace> {
        &self.space
    }

    pub fn resolution(&self) -> &GramResolution {
        &self.resolution
    }

    pub fn coefficient(&self, label: Coef) -> Option<&Spinor> {
        self.coefs.iter().find(|(l, _)| *l == label).map(|(_, s)| s)
    }

    fn combine(&self, weight: impl Fn(Coef) -> Complex64) -> Spinor {
        let mut out = [ClVector::zero(&self.space), ClVector::zero(&self.space)];
        for (label, s) in &self.coefs {
            let w = weight(*label);
            if w != Complex64::new(0.0, 0.0) {
                out[0].axpy(w, &s[0]);
                out[1].axpy(w, &s[1]);
            }
        }
        out
    }

    /// `c^A(τ, σ)`
    pub fn eval_c(&self, tau: f64, sigma: f64) -> Spinor {
        self.combine(|label| match label {
            Coef::K => re(1.0),
            Coef::L => re(tau),
            _ => wave_phase(label, tau, sigma).unwrap().1,
        })
    }

    /// `∂_β c^A` for `β = 0` (τ) and `β = 1` (σ).
    pub fn eval_dc(&self, tau: f64, sigma: f64) -> [Spinor; 2] {
        let dtau = self.combine(|label| match label {
            Coef::K => re(0.0),
            Coef::L => re(1.0),
            _ => {
                let (k, ph) = wave_phase(label, tau, sigma).unwrap();
                c(0.0, k) * ph
            }
        });
        let dsigma = self.combine(|label| match label {
            Coef::A(_) | Coef::B(_) => {
                let (k, ph) = wave_phase(label, tau, sigma).unwrap();
                let s = if matches!(label, Coef::A(_)) { 1.0 } else { -1.0 };
                c(0.0, s * k) * ph
            }
            _ => re(0.0),
        });
        [dtau, dsigma]
    }

    /// `x^{AḂ} = c^A ∙ c^{*Ḃ}` evaluated through the Clifford vectors.
    pub fn eval_x_spinor(&self, tau: f64, sigma: f64) -> CMat {
        let c = self.eval_c(tau, sigma);
        CMat::from_fn(2, 2, |a, b| c[a].dot(&c[b].conj()))
    }

    pub fn eval_x(&self, tau: f64, sigma: f64) -> FourVector {
        spinor_to_vec(&self.eval_x_spinor(tau, sigma))
    }

    /// `x^{AḂ}` from the mode Gram alone: `k∙k* + l∙l* τ² + Σ (a_n∙a_n* +
    /// b_n∙b_n* + a_n∙a_{−n}* e^{in(τ+σ)} + b_n∙b_{−n}* e^{in(τ−σ)})`.
    pub fn eval_x_modes_spinor(&self, tau: f64, sigma: f64) -> CMat {
        let s = &self.spec;
        let mut x = s.block(Coef::K, Coef::K) + s.block(Coef::L, Coef::L) * re(tau * tau);
        for &n in s.modes() {
            let nf = n as f64;
            x += s.block(Coef::A(n), Coef::A(n)) + s.block(Coef::B(n), Coef::B(n));
            if s.modes().contains(&-n) {
                x += s.block(Coef::A(n), Coef::A(-n)) * Complex64::from_polar(1.0, nf * (tau + sigma));
                x += s.block(Coef::B(n), Coef::B(-n)) * Complex64::from_polar(1.0, nf * (tau - sigma));
            }
        }
        x
    }

    /// `l∙l*`, equal to `η^{αβ} ∂_α c ∙ ∂_β c*` and to `p² p^{AḂ}`.
    pub fn l_gram(&self) -> CMat {
        self.spec.block(Coef::L, Coef::L)
    }

    /// `p·p = (det l∙l*)^{1/3}`; a lightlike `l` has no momentum.
    pub fn p_squared(&self) -> Result<f64> {
        let det = det2(&self.l_gram()).re;
        if !(det > 0.0) {
            return Err(Error::Unsupported(format!(
                "det(l∙l*) = {det:e}: momentum needs a timelike l"
            )));
        }
        Ok(det.cbrt())
    }

    /// `p^{AḂ} = l∙l* / p²`
    pub fn p_spinor(&self) -> Result<CMat> {
        Ok(self.l_gram() / re(self.p_squared()?))
    }

    /// `p_{AḂ}`
    pub fn p_lower(&self) -> Result<CMat> {
        Ok(lower_both(&self.p_spinor()?))
    }

    pub fn p(&self) -> Result<FourVector> {
        Ok(spinor_to_vec(&self.p_spinor()?))
    }

    /// Lower-index polymomenta `d*_{βA} = (p²)^{−2} l_A∙l*_C ∂_β c^{*C}`.
    pub fn dstar_lower(&self, tau: f64, sigma: f64) -> Result<[Spinor; 2]> {
        let p2 = self.p_squared()?;
        let w = lower_both(&self.l_gram()) / re(p2 * p2);
        let dc = self.eval_dc(tau, sigma);
        Ok(dc.map(|d| {
            let conj = [d[0].conj(), d[1].conj()];
            let row = |a: usize| {
                let mut v = conj[0].scale(w[(a, 0)]);
                v.axpy(w[(a, 1)], &conj[1]);
                v
            };
            [row(0), row(1)]
        }))
    }

    /// Worldsheet-upper polymomenta `d*^β_A = η^{ββ} d*_{βA}`.
    pub fn dstar_upper(&self, tau: f64, sigma: f64) -> Result<[Spinor; 2]> {
        let [t, s] = self.dstar_lower(tau, sigma)?;
        Ok([t, s.map(|v| -&v)])
    }

    /// Lower-index `d_{βA}`, the conjugates of [`Self::dstar_lower`].
    pub fn d_lower(&self, tau: f64, sigma: f64) -> Result<[Spinor; 2]> {
        Ok(self.dstar_lower(tau, sigma)?.map(|s| s.map(|v| v.conj())))
    }

    /// The on-shell mass, refusing states with `p·p ≠ m²`.
    pub(crate) fn on_shell_mass_squared(&self) -> Result<f64> {
        let p2 = self.p_squared()?;
        let m2 = self.spec.mass * self.spec.mass;
        if (p2 - m2).abs() > 1e-9 * m2 {
            return Err(Error::Domain(format!("state is off shell: p·p = {p2}, m² = {m2}")));
        }
        Ok(m2)
    }
}

/// `[u_A ∙ v_B]`
pub fn spinor_products(u: &Spinor, v: &Spinor) -> Result<CMat> {
    let mut m = CMat::zeros(2, 2);
    for a in 0..2 {
        for b in 0..2 {
            m[(a, b)] = bullet(&u[a], &v[b])?;
        }
    }
    Ok(m)
}

/// Raise the spinor index of a lower-index pair of Clifford vectors.
pub fn raise_spinor(s: &Spinor) -> Spinor {
    let one = re(1.0);
    let w = raise([one, re(0.0)]);
    let z = raise([re(0.0), one]);
    // raise is linear, so raise(s) = s_0 raise(e_0) + s_1 raise(e_1)
    let component = |a: usize| {
        let mut v = s[0].scale(w[a]);
        v.axpy(z[a], &s[1]);
        v
    };
    [component(0), component(1)]
}
