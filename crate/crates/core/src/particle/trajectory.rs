use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::einbein::{mu_of_tau, EinbeinFn, EinbeinJson};
use super::state::{canonical_rhs, noether_charges, ParticleState};
use crate::clifford::{noether_cross, particle_space, resolve_pair, HermitianMatrix};
use crate::linalg::{re, ComplexMatrixJson};
use crate::ode::rk4;
use crate::spinor::{lower_both, minkowski_dot, vec_to_spinor, FourVector, METRIC};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub tau: f64,
    pub tau_bar: f64,
    pub x: FourVector,
    /// Covariant `p_μ`.
    pub p_lower: FourVector,
    /// `J_11, J_12, J_22`
    pub j_ab: [Complex64; 3],
    pub j: f64,
    pub mu: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub states: Vec<ParticleState>,
    /// Interior point where `μ` changes sign, if any.
    pub turning_point: Option<f64>,
}

impl Trajectory {
    /// Proper time along the trajectory, refused across a turning point.
    pub fn proper_times(&self) -> Result<Vec<f64>> {
        if let Some(tau) = self.turning_point {
            return Err(Error::TurningPoint { tau, mu: 0.0 });
        }
        Ok(self.points.iter().map(|p| p.tau_bar).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "tau", "tau_bar", "x0", "x1", "x2", "x3", "p_0", "p_1", "p_2", "p_3", "J11_re", "J11_im", "J12_re",
            "J12_im", "J22_re", "J22_im", "j", "mu",
        ])?;
        let valid_bar = self.turning_point.is_none();
        for p in &self.points {
            let mut row = vec![p.tau, if valid_bar { p.tau_bar } else { f64::NAN }];
            row.extend(p.x);
            row.extend(p.p_lower);
            for z in p.j_ab {
                row.extend([z.re, z.im]);
            }
            row.extend([p.j, p.mu]);
            w.write_record(row.iter().map(|v| format!("{v:e}")))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

fn point(state: &ParticleState, tau_bar: f64) -> TrajectoryPoint {
    let p = state.p();
    let ch = noether_charges(state);
    TrajectoryPoint {
        tau: state.tau,
        tau_bar,
        x: state.x(),
        p_lower: std::array::from_fn(|k| METRIC[k] * p[k]),
        j_ab: [ch.j_ab[(0, 0)], ch.j_ab[(0, 1)], ch.j_ab[(1, 1)]],
        j: ch.j,
        mu: state.mu(),
    }
}

/// RK4 integration of the free-particle flow from `state0.tau` to `tau_end`.
/// Proper time `τ̄` with `dτ̄/dτ = 2 m e μ` is carried as an extra variable.
pub fn integrate(state0: &ParticleState, e: &EinbeinFn, tau_end: f64, steps: usize) -> Result<Trajectory> {
    e.check_positive(state0.tau.min(tau_end), state0.tau.max(tau_end))?;
    let template = state0.clone();
    let n = template.pack().len();
    let mut y0 = template.pack();
    y0.push(re(0.0));
    let mass = state0.mass;
    let rhs = |tau: f64, y: &[Complex64]| -> Vec<Complex64> {
        let s = template.unpack(&y[..n], tau);
        let ev = e.eval(tau);
        let d = canonical_rhs(&s, ev);
        let mut out: Vec<Complex64> =
            d.dc.iter().chain(&d.ddstar).flat_map(|v| v.coeffs().iter().copied()).collect();
        out.push(re(2.0 * mass * ev * s.mu()));
        out
    };
    let mut points = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    rk4(rhs, state0.tau, tau_end, y0, steps, |_, tau, y| {
        let s = template.unpack(&y[..n], tau);
        points.push(point(&s, y[n].re));
        states.push(s);
        Ok(())
    })?;
    let turning_point = points.windows(2).skip_while(|w| w[0].mu == 0.0).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.mu.signum() != b.mu.signum() && b.mu != 0.0 {
            Some(a.tau + (b.tau - a.tau) * a.mu / (a.mu - b.mu))
        } else {
            None
        }
    });
    Ok(Trajectory { points, states, turning_point })
}

/// `x^μ` and `p^μ` (contravariant) plus an optional cross term `M`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramConfig {
    pub x: FourVector,
    pub p: FourVector,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<ComplexMatrixJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParticleConfig {
    pub mass: f64,
    pub einbein: EinbeinJson,
    /// Turning point.
    pub tau0: f64,
    /// Start of integration; defaults to `tau0`.
    #[serde(default)]
    pub tau_start: Option<f64>,
    pub tau_end: f64,
    pub steps: usize,
    pub gram: GramConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParticleSummary {
    pub steps: usize,
    pub constraint_initial: f64,
    pub max_constraint_drift: f64,
    pub max_charge_drift: f64,
    pub max_mu_error: f64,
    pub max_straight_line_error: Option<f64>,
    pub turning_point: Option<f64>,
}

impl ParticleConfig {
    pub fn initial_state(&self) -> Result<(ParticleState, EinbeinFn)> {
        if !(self.mass > 0.0) {
            return Err(Error::Domain(format!("mass must be positive, got {}", self.mass)));
        }
        let e = self.einbein.build(self.tau0)?;
        let start = self.tau_start.unwrap_or(self.tau0);
        let m = match &self.gram.m {
            Some(j) => j.to_matrix()?,
            None => noether_cross(re(mu_of_tau(&e, self.mass, start))),
        };
        if m.shape() != (2, 2) {
            return Err(Error::Dimension { expected: 2, got: m.nrows() });
        }
        let x = HermitianMatrix::new(vec_to_spinor(&self.gram.x))?;
        let p = HermitianMatrix::new(lower_both(&vec_to_spinor(&self.gram.p)))?;
        let pair = resolve_pair(&x, &p, &m, &particle_space())?;
        Ok((ParticleState::from_pair(pair, start, self.mass)?, e))
    }

    pub fn run(&self) -> Result<(Trajectory, ParticleSummary)> {
        let (state, e) = self.initial_state()?;
        let traj = integrate(&state, &e, self.tau_end, self.steps)?;
        let summary = summarize(&traj, &e, self.mass);
        Ok((traj, summary))
    }
}

/// Drift diagnostics along a free-particle trajectory.
pub fn summarize(traj: &Trajectory, e: &EinbeinFn, mass: f64) -> ParticleSummary {
    let m2 = mass * mass;
    let first = &traj.points[0];
    let p0: FourVector = std::array::from_fn(|k| METRIC[k] * first.p_lower[k]);
    let constraint_initial = minkowski_dot(&p0, &p0) - m2;
    let mut max_constraint_drift = 0.0_f64;
    let mut max_charge_drift = 0.0_f64;
    let mut max_mu_error = 0.0_f64;
    let mut max_line = 0.0_f64;
    let mu_start = first.mu - mu_of_tau(e, mass, first.tau);
    for pt in &traj.points {
        let p: FourVector = std::array::from_fn(|k| METRIC[k] * pt.p_lower[k]);
        max_constraint_drift = max_constraint_drift.max((minkowski_dot(&p, &p) - m2 - constraint_initial).abs());
        let dj = pt.j_ab.iter().zip(&first.j_ab).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        max_charge_drift = max_charge_drift.max(dj).max((pt.j - first.j).abs());
        max_mu_error = max_mu_error.max((pt.mu - mu_start - mu_of_tau(e, mass, pt.tau)).abs());
        for k in 0..4 {
            let want = first.x[k] + p0[k] / mass * pt.tau_bar;
            max_line = max_line.max((pt.x[k] - want).abs());
        }
    }
    ParticleSummary {
        steps: traj.points.len() - 1,
        constraint_initial,
        max_constraint_drift,
        max_charge_drift,
        max_mu_error,
        max_straight_line_error: traj.turning_point.is_none().then_some(max_line),
        turning_point: traj.turning_point,
    }
}
