use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fields::{dilaton, dilaton_hessian, energy_momentum, energy_momentum_trace, DilatonConstants};
use super::state::{Spinor, WaveState};
use crate::clifford::ClVector;
use crate::linalg::{max_abs, re, CMat};
use crate::Result;

pub const DEFAULT_H: f64 = 1e-3;
/// `h_σ / h_τ`. On a square grid the discrete wave operator annihilates
/// every `f(τ ± σ)` exactly, which would hide the truncation order.
pub const DEFAULT_ASPECT: f64 = 0.75;

/// Sample points and step sizes for the finite-difference checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdGrid {
    pub h: f64,
    #[serde(default = "default_aspect")]
    pub aspect: f64,
    pub tau: [f64; 2],
    pub n_tau: usize,
    pub n_sigma: usize,
}

fn default_aspect() -> f64 {
    DEFAULT_ASPECT
}

impl Default for FdGrid {
    fn default() -> Self {
        FdGrid { h: DEFAULT_H, aspect: DEFAULT_ASPECT, tau: [0.0, 2.0], n_tau: 7, n_sigma: 7 }
    }
}

impl FdGrid {
    pub fn with_h(self, h: f64) -> Self {
        FdGrid { h, ..self }
    }

    fn h_sigma(&self) -> f64 {
        self.h * self.aspect
    }

    /// Interior points of `[τ_0, τ_1] × [0, π]`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let along = |a: f64, b: f64, n: usize| -> Vec<f64> {
            if n == 1 {
                return vec![0.5 * (a + b)];
            }
            (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
        };
        let margin = 0.1;
        let taus = along(self.tau[0], self.tau[1], self.n_tau);
        let sigmas = along(margin, PI - margin, self.n_sigma);
        taus.iter().flat_map(|&t| sigmas.iter().map(move |&s| (t, s))).collect()
    }
}

/// Worst value of `f` over the grid points, evaluated in parallel.
fn max_over<F>(grid: &FdGrid, f: F) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    grid.points()
        .par_iter()
        .map(|&(t, s)| f(t, s))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

fn spinor_max(s: &Spinor) -> f64 {
    s[0].max_abs().max(s[1].max_abs())
}

fn spinor_lin(terms: &[(f64, &Spinor)]) -> Spinor {
    let space = terms[0].1[0].space();
    let mut out = [ClVector::zero(space), ClVector::zero(space)];
    for (w, s) in terms {
        out[0].axpy(re(*w), &s[0]);
        out[1].axpy(re(*w), &s[1]);
    }
    out
}

trait Linear: Sized {
    fn lin(terms: &[(f64, &Self)]) -> Self;
}

impl Linear for f64 {
    fn lin(terms: &[(f64, &Self)]) -> Self {
        terms.iter().map(|(w, x)| w * *x).sum()
    }
}

impl Linear for CMat {
    fn lin(terms: &[(f64, &Self)]) -> Self {
        let mut out = CMat::zeros(terms[0].1.nrows(), terms[0].1.ncols());
        for (w, x) in terms {
            out += *x * re(*w);
        }
        out
    }
}

/// `(∂_τ², ∂_σ², ∂_τ∂_σ)` by central differences.
fn second_differences<T, F>(f: F, tau: f64, sigma: f64, ht: f64, hs: f64) -> Result<(T, T, T)>
where
    T: Linear,
    F: Fn(f64, f64) -> Result<T>,
{
    let c = f(tau, sigma)?;
    let (it, is) = (1.0 / (ht * ht), 1.0 / (hs * hs));
    let tt = T::lin(&[(it, &f(tau + ht, sigma)?), (it, &f(tau - ht, sigma)?), (-2.0 * it, &c)]);
    let ss = T::lin(&[(is, &f(tau, sigma + hs)?), (is, &f(tau, sigma - hs)?), (-2.0 * is, &c)]);
    let w = 1.0 / (4.0 * ht * hs);
    let ts = T::lin(&[
        (w, &f(tau + ht, sigma + hs)?),
        (-w, &f(tau + ht, sigma - hs)?),
        (-w, &f(tau - ht, sigma + hs)?),
        (w, &f(tau - ht, sigma - hs)?),
    ]);
    Ok((tt, ss, ts))
}

/// `max |□x − 2 l∙l*|` with `x` computed through the Clifford vectors.
pub fn wave_residual(state: &WaveState, grid: &FdGrid) -> Result<f64> {
    let target = state.l_gram() * re(2.0);
    let (ht, hs) = (grid.h, grid.h_sigma());
    max_over(grid, |t, s| {
        let (tt, ss, _) = second_differences::<CMat, _>(|a, b| Ok(state.eval_x_spinor(a, b)), t, s, ht, hs)?;
        Ok(max_abs(&(tt - ss - &target)))
    })
}

/// `max |∂_α c^A − η_{αβ} p^{AĖ} d^β_Ė|` with `∂c` from central differences.
pub fn polymomentum_residual(state: &WaveState, grid: &FdGrid) -> Result<f64> {
    let p = state.p_spinor()?;
    let steps = [grid.h, grid.h_sigma()];
    max_over(grid, |t, s| {
        let mut worst: f64 = 0.0;
        let d = state.d_lower(t, s)?;
        for al in 0..2 {
            let (dt, ds) = if al == 0 { (steps[0], 0.0) } else { (0.0, steps[1]) };
            let plus = state.eval_c(t + dt, s + ds);
            let minus = state.eval_c(t - dt, s - ds);
            let h = steps[al];
            let fd = spinor_lin(&[(0.5 / h, &plus), (-0.5 / h, &minus)]);
            for a in 0..2 {
                let mut r = fd[a].clone();
                for e in 0..2 {
                    r.axpy(-p[(a, e)], &d[al][e]);
                }
                worst = worst.max(r.max_abs());
            }
        }
        Ok(worst)
    })
}

/// `max |∂_α d*^α_A|` with central differences.
pub fn polymomentum_divergence(state: &WaveState, grid: &FdGrid) -> Result<f64> {
    let (ht, hs) = (grid.h, grid.h_sigma());
    max_over(grid, |t, s| {
        let tp = state.dstar_upper(t + ht, s)?;
        let tm = state.dstar_upper(t - ht, s)?;
        let sp = state.dstar_upper(t, s + hs)?;
        let sm = state.dstar_upper(t, s - hs)?;
        let div = spinor_lin(&[
            (0.5 / ht, &tp[0]),
            (-0.5 / ht, &tm[0]),
            (0.5 / hs, &sp[1]),
            (-0.5 / hs, &sm[1]),
        ]);
        Ok(spinor_max(&div))
    })
}

/// `max |∂_α∂_β φ − RHS_{αβ}|` for the closed-form dilaton.
pub fn dilaton_residual(state: &WaveState, k: &DilatonConstants, grid: &FdGrid) -> Result<f64> {
    let (ht, hs) = (grid.h, grid.h_sigma());
    max_over(grid, |t, s| {
        let (tt, ss, ts) = second_differences::<f64, _>(|a, b| dilaton(state, k, a, b), t, s, ht, hs)?;
        let rhs = dilaton_hessian(state, t, s)?;
        Ok([tt - rhs[0][0], ss - rhs[1][1], ts - rhs[0][1], ts - rhs[1][0]]
            .iter()
            .fold(0.0_f64, |m, r| m.max(r.abs())))
    })
}

/// `max |□φ|`
pub fn dilaton_wave_residual(state: &WaveState, k: &DilatonConstants, grid: &FdGrid) -> Result<f64> {
    max_over(grid, |t, s| {
        let (tt, ss, _) =
            second_differences::<f64, _>(|a, b| dilaton(state, k, a, b), t, s, grid.h, grid.h_sigma())?;
        Ok((tt - ss).abs())
    })
}

/// `max |η_{αβ} T^{αβ} − (p² − m²)|`
pub fn trace_residual(state: &WaveState, grid: &FdGrid) -> Result<f64> {
    let target = state.p_squared()? - state.spec().mass.powi(2);
    max_over(grid, |t, s| Ok((energy_momentum_trace(&energy_momentum(state, t, s)?) - target).abs()))
}

/// `log2(r(h) / r(h/2))`
pub fn convergence_order<F>(residual: F, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok((residual(h)? / residual(0.5 * h)?).log2())
}

/// Observed order of the `□x` residual between `grid.h` and `grid.h / 2`.
pub fn wave_residual_order(state: &WaveState, grid: &FdGrid) -> Result<f64> {
    convergence_order(|h| wave_residual(state, &grid.with_h(h)), grid.h)
}
