use std::sync::Arc;

use num_complex::Complex64;

use super::observable::{FreeHamiltonian, Observable};
use crate::clifford::{CanonicalPair, ClVector, GeneratorSpace};
use crate::linalg::{re, CMat};
use crate::spinor::{self, FourVector};
use crate::{Error, Result};

/// Clifford spinors `c^A`, `d*_A` of one particle.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleState {
    pub c: [ClVector; 2],
    pub dstar: [ClVector; 2],
    pub tau: f64,
    pub mass: f64,
}

fn gram(a: &[ClVector; 2], b: &[ClVector; 2]) -> CMat {
    CMat::from_fn(2, 2, |i, j| a[i].dot(&b[j].conj()))
}

impl ParticleState {
    pub fn new(c: [ClVector; 2], dstar: [ClVector; 2], tau: f64, mass: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::Domain(format!("mass must be positive, got {mass}")));
        }
        let space = c[0].space();
        if [&c[1], &dstar[0], &dstar[1]].iter().any(|v| !Arc::ptr_eq(v.space(), space)) {
            return Err(Error::SpaceMismatch);
        }
        Ok(ParticleState { c, dstar, tau, mass })
    }

    pub fn from_pair(pair: CanonicalPair, tau: f64, mass: f64) -> Result<Self> {
        Self::new(pair.c, pair.dstar, tau, mass)
    }

    pub fn space(&self) -> &Arc<GeneratorSpace> {
        self.c[0].space()
    }

    /// `x^{AḂ} = c^A ∙ c*^Ḃ`
    pub fn x_spinor(&self) -> CMat {
        gram(&self.c, &self.c)
    }

    /// `p_{AḂ} = d*_A ∙ d_Ḃ`
    pub fn p_spinor(&self) -> CMat {
        gram(&self.dstar, &self.dstar)
    }

    pub fn x(&self) -> FourVector {
        spinor::spinor_to_vec(&self.x_spinor())
    }

    /// Contravariant momentum `p^μ`.
    pub fn p(&self) -> FourVector {
        spinor::spinor_to_vec(&spinor::raise_both(&self.p_spinor()))
    }

    /// `M_{AB} = c^A ∙ d*_B`; the Noether constraint is `M = μ δ`.
    pub fn cross(&self) -> CMat {
        CMat::from_fn(2, 2, |a, b| self.c[a].dot(&self.dstar[b]))
    }

    /// `μ = ½ d*_E ∙ c^E`.
    pub fn mu(&self) -> f64 {
        0.5 * self.cross().trace().re
    }

    /// Distance of `M` from `μ δ` with real `μ`.
    pub fn noether_residual(&self) -> f64 {
        let m = self.cross();
        let mu = 0.5 * m.trace().re;
        crate::linalg::max_abs(&(m - CMat::identity(2, 2) * re(mu)))
    }

    pub(crate) fn pack(&self) -> Vec<Complex64> {
        self.c
            .iter()
            .chain(&self.dstar)
            .flat_map(|v| v.coeffs().iter().copied())
            .collect()
    }

    pub(crate) fn unpack(&self, data: &[Complex64], tau: f64) -> ParticleState {
        let dim = self.space().dim();
        let part = |k: usize| ClVector::from_coeffs(self.space(), data[k * dim..(k + 1) * dim].to_vec()).unwrap();
        ParticleState { c: [part(0), part(1)], dstar: [part(2), part(3)], tau, mass: self.mass }
    }
}

fn unit(a: usize, b: usize) -> CMat {
    let mut m = CMat::zeros(2, 2);
    m[(a, b)] = re(1.0);
    m
}

/// `∂f/∂x^{AḂ}` from the four-gradient `∂f/∂x^μ`.
pub fn x_gradient_matrix(grad_x: &FourVector) -> CMat {
    CMat::from_fn(2, 2, |a, b| {
        let w = spinor::spinor_to_vec_c(&unit(a, b));
        (0..4).map(|mu| w[mu] * grad_x[mu]).sum()
    })
}

/// `∂f/∂p_{AḂ}` from the gradient with respect to contravariant `p^μ`.
pub fn p_gradient_matrix(grad_p: &FourVector) -> CMat {
    CMat::from_fn(2, 2, |a, b| {
        let w = spinor::spinor_to_vec_c(&spinor::raise_both(&unit(a, b)));
        (0..4).map(|mu| w[mu] * grad_p[mu]).sum()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateDerivative {
    pub dc: [ClVector; 2],
    pub ddstar: [ClVector; 2],
}

/// The first-order flow generated by an arbitrary Hamiltonian `H(x, p)`:
/// `dc^A/dτ = ∂H/∂p_{AĖ} d_Ė`, `dd*_A/dτ = −∂H/∂x^{AĖ} c*^Ė`.
pub fn flow(state: &ParticleState, h: &dyn Observable) -> StateDerivative {
    let (x, p) = (state.x(), state.p());
    let gx = x_gradient_matrix(&h.grad_x(&x, &p));
    let gp = p_gradient_matrix(&h.grad_p(&x, &p));
    let space = state.space();
    let dc = std::array::from_fn(|a| {
        let mut v = ClVector::zero(space);
        for e in 0..2 {
            v.axpy(gp[(a, e)], &state.dstar[e].conj());
        }
        v
    });
    let ddstar = std::array::from_fn(|a| {
        let mut v = ClVector::zero(space);
        for e in 0..2 {
            v.axpy(-gx[(a, e)], &state.c[e].conj());
        }
        v
    });
    StateDerivative { dc, ddstar }
}

pub fn canonical_rhs(state: &ParticleState, e: f64) -> StateDerivative {
    flow(state, &FreeHamiltonian { e, mass: state.mass })
}

/// `e (p^μ p_μ − m²)`
pub fn hamiltonian_c5(state: &ParticleState, e: f64) -> f64 {
    let p = state.p();
    FreeHamiltonian { e, mass: state.mass }.value(&state.x(), &p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoetherCharges {
    /// `J_{AB} = d*_A ∙ c_B + d*_B ∙ c_A`, symmetric.
    pub j_ab: CMat,
    /// `j = i (d*_A ∙ c^A − d_Ȧ ∙ c*^Ȧ)`
    pub j: f64,
}

pub fn noether_charges(state: &ParticleState) -> NoetherCharges {
    // c_1 = −c^2, c_2 = c^1
    let c_low = [-&state.c[1], state.c[0].clone()];
    let j_ab = CMat::from_fn(2, 2, |a, b| state.dstar[a].dot(&c_low[b]) + state.dstar[b].dot(&c_low[a]));
    let t = state.cross().trace();
    NoetherCharges { j_ab, j: -2.0 * t.im }
}

struct CliffordGradient {
    dc: [ClVector; 2],
    dc_bar: [ClVector; 2],
    ddstar: [ClVector; 2],
    dd: [ClVector; 2],
}

fn clifford_gradient(obs: &dyn Observable, state: &ParticleState) -> CliffordGradient {
    let (x, p) = (state.x(), state.p());
    let gx = x_gradient_matrix(&obs.grad_x(&x, &p));
    let gp = p_gradient_matrix(&obs.grad_p(&x, &p));
    let space = state.space();
    let build = |g: &CMat, vs: &[ClVector; 2], conj_vs: bool, transpose: bool| -> [ClVector; 2] {
        std::array::from_fn(|a| {
            let mut out = ClVector::zero(space);
            for b in 0..2 {
                let coef = if transpose { g[(b, a)] } else { g[(a, b)] };
                let v = if conj_vs { vs[b].conj() } else { vs[b].clone() };
                out.axpy(coef, &v);
            }
            out
        })
    };
    CliffordGradient {
        dc: build(&gx, &state.c, true, false),
        dc_bar: build(&gx, &state.c, false, true),
        ddstar: build(&gp, &state.dstar, true, false),
        dd: build(&gp, &state.dstar, false, true),
    }
}

/// Clifford bracket, evaluated from the actual bullet products of the
/// state's spinors. Complex in general; real for real observables.
pub fn clifford_bracket_c(n: &dyn Observable, m: &dyn Observable, state: &ParticleState) -> Complex64 {
    let gn = clifford_gradient(n, state);
    let gm = clifford_gradient(m, state);
    let half = |a: &CliffordGradient, b: &CliffordGradient| -> Complex64 {
        (0..2)
            .map(|k| a.dc[k].dot(&b.ddstar[k]) + a.dc_bar[k].dot(&b.dd[k]))
            .sum()
    };
    half(&gn, &gm) - half(&gm, &gn)
}

pub fn clifford_bracket(n: &dyn Observable, m: &dyn Observable, state: &ParticleState) -> f64 {
    clifford_bracket_c(n, m, state).re
}
