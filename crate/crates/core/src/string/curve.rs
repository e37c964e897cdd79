use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::state::{Spinor, WaveState};
use crate::clifford::ClVector;
use crate::linalg::{re, CMat};
use crate::quadrature::simpson_rule;
use crate::{Error, Result};

pub const DEFAULT_PANELS: usize = 512;

/// A curve across the worldsheet written as a graph `τ(σ)`, `0 ≤ σ ≤ π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Curve {
    ConstTau { tau: f64 },
    /// Straight from `(τ_0, 0)` to `(τ_1, π)`.
    Line { tau0: f64, tau1: f64 },
    /// `τ_0 + amp sin(freq σ)`
    Sine { tau0: f64, amp: f64, freq: f64 },
}

/// One quadrature node: position, tangent `dσ^α/dσ` and weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveNode {
    pub tau: f64,
    pub sigma: f64,
    pub tangent: [f64; 2],
    pub weight: f64,
}

impl Curve {
    pub fn tau(&self, sigma: f64) -> f64 {
        match *self {
            Curve::ConstTau { tau } => tau,
            Curve::Line { tau0, tau1 } => tau0 + (tau1 - tau0) * sigma / PI,
            Curve::Sine { tau0, amp, freq } => tau0 + amp * (freq * sigma).sin(),
        }
    }

    pub fn slope(&self, sigma: f64) -> f64 {
        match *self {
            Curve::ConstTau { .. } => 0.0,
            Curve::Line { tau0, tau1 } => (tau1 - tau0) / PI,
            Curve::Sine { amp, freq, .. } => amp * freq * (freq * sigma).cos(),
        }
    }

    /// Composite Simpson nodes; refuses curves that are not spacelike.
    pub fn nodes(&self, panels: usize) -> Result<Vec<CurveNode>> {
        let (sigmas, weights) = simpson_rule(0.0, PI, panels);
        sigmas
            .into_iter()
            .zip(weights)
            .map(|(sigma, weight)| {
                let slope = self.slope(sigma);
                if slope.abs() >= 1.0 {
                    return Err(Error::NotSpacelike(sigma));
                }
                Ok(CurveNode { tau: self.tau(sigma), sigma, tangent: [slope, 1.0], weight })
            })
            .collect()
    }
}

/// `d*^tot_A = ∫ dσ^α ε_{βα} d*^β_A` with `ε_{τσ} = 1`.
pub fn total_momentum(state: &WaveState, curve: &Curve, panels: usize) -> Result<Spinor> {
    let mut tot = [ClVector::zero(state.space()), ClVector::zero(state.space())];
    for node in curve.nodes(panels)? {
        let [dt, ds] = state.dstar_upper(node.tau, node.sigma)?;
        let [vt, vs] = node.tangent;
        for a in 0..2 {
            tot[a].axpy(re(node.weight * vs), &dt[a]);
            tot[a].axpy(re(-node.weight * vt), &ds[a]);
        }
    }
    Ok(tot)
}

/// `d*^tot_A ∙ d^tot_Ḃ`, which for a string without vibrations is `π² p_{AḂ}`.
pub fn total_momentum_products(tot: &Spinor) -> CMat {
    CMat::from_fn(2, 2, |a, b| tot[a].dot(&tot[b].conj()))
}
