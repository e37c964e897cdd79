use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::curve::{total_momentum, total_momentum_products, Curve, DEFAULT_PANELS};
use super::fields::{dilaton, energy_momentum, DilatonConstants};
use super::residual::{
    convergence_order,     dilaton_residual, polymomentum_divergence, polymomentum_residual, trace_residual, wave_residual,
    wave_residual_order, FdGrid,
};
use super::spec::ModeSpecJson;
use super::state::{build_wave_state, WaveState};
use crate::linalg::{max_abs, re};
use crate::spinor::FourVector;
use crate::Result;

/// Grid for the exported fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub tau: [f64; 2],
    pub n_tau: usize,
    pub n_sigma: usize,
}

impl Default for FieldGrid {
    fn default() -> Self {
        FieldGrid { tau: [0.0, 2.0], n_tau: 21, n_sigma: 21 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StringConfig {
    #[serde(flatten)]
    pub spec: ModeSpecJson,
    #[serde(default)]
    pub grid: FieldGrid,
    #[serde(default)]
    pub fd: Option<FdGrid>,
    #[serde(default)]
    pub dilaton: DilatonConstants,
    /// Curve for the total polymomentum; defaults to `τ = 0`.
    #[serde(default)]
    pub curve: Option<Curve>,
}

/// Step of the coarser run in the `h`, `h/2` order estimates.
pub const ORDER_H: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StringReport {
    pub p: FourVector,
    pub p_squared: f64,
    pub resolution_residual: f64,
    pub x_modes_residual: f64,
    pub wave_residual: f64,
    pub wave_order: f64,
    pub polymomentum_residual: f64,
    pub polymomentum_order: f64,
    pub polymomentum_divergence: f64,
    pub divergence_order: f64,
    pub dilaton_residual: f64,
    pub dilaton_order: f64,
    pub trace_residual: f64,
    /// `max |d*^tot ∙ d^tot − π² p_{AḂ}|`; only zero without vibrations.
    pub total_momentum_deviation: f64,
}

impl StringConfig {
    pub fn build(&self) -> Result<WaveState> {
        build_wave_state(&self.spec.parse()?)
    }

    /// Rows `τ, σ, x^0..x^3, φ, T^{ττ}, T^{τσ}, T^{σσ}`.
    pub fn field_csv(&self, state: &WaveState) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["tau", "sigma", "x0", "x1", "x2", "x3", "phi", "T00", "T01", "T11"])?;
        let g = &self.grid;
        let step = |n: usize, a: f64, b: f64, i: usize| if n > 1 { a + (b - a) * i as f64 / (n - 1) as f64 } else { a };
        for i in 0..g.n_tau {
            let tau = step(g.n_tau, g.tau[0], g.tau[1], i);
            for j in 0..g.n_sigma {
                let sigma = step(g.n_sigma, 0.0, PI, j);
                let x = state.eval_x(tau, sigma);
                let phi = dilaton(state, &self.dilaton, tau, sigma)?;
                let t = energy_momentum(state, tau, sigma)?;
                let row = [tau, sigma, x[0], x[1], x[2], x[3], phi, t[0][0], t[0][1], t[1][1]];
                w.write_record(row.iter().map(|v| format!("{v:.17e}")))?;
            }
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
    }

    pub fn report(&self, state: &WaveState) -> Result<StringReport> {
        let fd = self.fd.unwrap_or_default();
        let mut x_modes: f64 = 0.0;
        for (t, s) in fd.points() {
            x_modes = x_modes.max(max_abs(&(state.eval_x_spinor(t, s) - state.eval_x_modes_spinor(t, s))));
        }
        // at h = 1e-3 rounding already competes with the truncation error
        let coarse = fd.with_h(ORDER_H);
        let order = |f: &dyn Fn(&FdGrid) -> Result<f64>| convergence_order(|h| f(&coarse.with_h(h)), ORDER_H);
        let curve = self.curve.unwrap_or(Curve::ConstTau { tau: 0.0 });
        let tot = total_momentum(state, &curve, DEFAULT_PANELS)?;
        let target = state.p_lower()? * re(PI * PI);
        Ok(StringReport {
            p: state.p()?,
            p_squared: state.p_squared()?,
            resolution_residual: state.resolution().residual(),
            x_modes_residual: x_modes,
            wave_residual: wave_residual(state, &fd)?,
            wave_order: wave_residual_order(state, &coarse)?,
            polymomentum_residual: polymomentum_residual(state, &fd)?,
            polymomentum_order: order(&|g| polymomentum_residual(state, g))?,
            polymomentum_divergence: polymomentum_divergence(state, &fd)?,
            divergence_order: order(&|g| polymomentum_divergence(state, g))?,
            dilaton_residual: dilaton_residual(state, &self.dilaton, &fd)?,
            dilaton_order: order(&|g| dilaton_residual(state, &self.dilaton, g))?,
            trace_residual: trace_residual(state, &fd)?,
            total_momentum_deviation: max_abs(&(total_momentum_products(&tot) - target)),
        })
    }
}
