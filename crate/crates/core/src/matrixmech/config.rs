use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::classical::evolve_matrix_classical;
use super::quantum::{covariant_evolve, evolve_state, truncated_oscillator, CVec, Connection, MatrixHamiltonian, Oscillator1D, StateVector};
use super::system::{assemble, NSystem};
use crate::clifford::{noether_cross, particle_space, resolve_pair, HermitianMatrix};
use crate::linalg::{c, max_abs, random_unitary, re};
use crate::particle::ParticleState;
use crate::spinor::{lower_both, vec_to_spinor, FourVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixParticle {
    pub x: FourVector,
    pub p: FourVector,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OscillatorConfig {
    pub levels: usize,
    pub omega: f64,
    /// Initial amplitudes as `[re, im]` pairs; defaults to `(|0⟩ + |1⟩)/√2`.
    #[serde(default)]
    pub state: Option<Vec<[f64; 2]>>,
}

/// Either a classical system of particles or a truncated oscillator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixConfig {
    pub mass: f64,
    #[serde(default)]
    pub hbar: f64,
    #[serde(default = "one")]
    pub mu: f64,
    #[serde(default)]
    pub particles: Vec<MatrixParticle>,
    /// Applies a seeded random global U(N) before evolving.
    #[serde(default)]
    pub gauge_seed: Option<u64>,
    #[serde(default)]
    pub oscillator: Option<OscillatorConfig>,
    /// `"heisenberg"` (default) or `"schrodinger"`.
    #[serde(default)]
    pub picture: Option<String>,
    pub tau_end: f64,
    pub steps: usize,
    #[serde(default)]
    pub record_every: usize,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct MatrixReport {
    pub mode: String,
    pub n: usize,
    pub max_straight_line_error: Option<f64>,
    pub max_constraint_residual: Option<f64>,
    pub max_ccr_interior_defect: Option<f64>,
    pub norm_drift: Option<f64>,
}

impl MatrixConfig {
    pub fn build_system(&self) -> Result<NSystem> {
        if self.particles.is_empty() {
            return Err(Error::Domain("classical run needs at least one particle".into()));
        }
        let particles = self
            .particles
            .iter()
            .map(|mp| {
                let x = HermitianMatrix::new(vec_to_spinor(&mp.x))?;
                let p = HermitianMatrix::new(lower_both(&vec_to_spinor(&mp.p)))?;
                let pair = resolve_pair(&x, &p, &noether_cross(re(self.mu)), &particle_space())?;
                ParticleState::from_pair(pair, 0.0, self.mass)
            })
            .collect::<Result<Vec<_>>>()?;
        let sys = assemble(&particles)?;
        match self.gauge_seed {
            Some(seed) => {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                sys.gauge_transform(&random_unitary(&mut rng, sys.n()))
            }
            None => Ok(sys),
        }
    }

    /// Runs the configured evolution and returns the report with a CSV body.
    pub fn run(&self) -> Result<(MatrixReport, String)> {
        if !(self.mass > 0.0) {
            return Err(Error::Domain(format!("mass must be positive, got {}", self.mass)));
        }
        let mut buf = Vec::new();
        let report = match &self.oscillator {
            None => self.run_classical(&mut buf)?,
            Some(osc) => self.run_quantum(osc, &mut buf)?,
        };
        Ok((report, String::from_utf8(buf).expect("csv is utf-8")))
    }

    fn run_classical(&self, buf: &mut Vec<u8>) -> Result<MatrixReport> {
        let sys = self.build_system()?;
        let traj = evolve_matrix_classical(&sys, self.tau_end, self.steps, self.record_every)?;
        let (x0, p0) = (sys.x(), sys.p());
        let mut line = 0.0_f64;
        let mut constraint = 0.0_f64;
        for (t, s) in traj.tau_bar.iter().zip(&traj.systems) {
            let x = s.x();
            for mu in 0..4 {
                line = line.max(max_abs(&(&x[mu] - &x0[mu] - &p0[mu] * re(t / self.mass))));
            }
            constraint = constraint.max(s.constraint_residual());
        }
        traj.write_eigenvalue_csv(buf)?;
        Ok(MatrixReport {
            mode: "classical".into(),
            n: sys.n(),
            max_straight_line_error: Some(line),
            max_constraint_residual: Some(constraint),
            ..Default::default()
        })
    }

    fn run_quantum(&self, osc: &OscillatorConfig, buf: &mut Vec<u8>) -> Result<MatrixReport> {
        if !(self.hbar > 0.0) {
            return Err(Error::Domain("oscillator runs need hbar > 0".into()));
        }
        let n = osc.levels;
        if n < 4 {
            return Err(Error::Domain("oscillator needs at least 4 levels".into()));
        }
        let (x, p) = truncated_oscillator(n, self.mass, osc.omega, self.hbar);
        let amps = match &osc.state {
            Some(v) if v.len() == n => CVec::from_iterator(n, v.iter().map(|z| c(z[0], z[1]))),
            Some(v) => return Err(Error::Dimension { expected: n, got: v.len() }),
            None => {
                let mut a = CVec::zeros(n);
                a[0] = re(1.0);
                a[1] = re(1.0);
                a
            }
        };
        let s0 = StateVector::normalized(amps)?;
        let h = Oscillator1D { mass: self.mass, omega: osc.omega };
        let schrodinger = match self.picture.as_deref() {
            None | Some("heisenberg") => false,
            Some("schrodinger") => true,
            Some(other) => return Err(Error::Unsupported(format!("picture {other:?}"))),
        };
        let gamma = if schrodinger { Connection::Schrodinger } else { Connection::Zero };
        let traj = covariant_evolve(std::slice::from_ref(&x), std::slice::from_ref(&p), &h, &gamma, self.hbar, self.tau_end, self.steps, self.record_every)?;
        let hm = h.h(std::slice::from_ref(&x), std::slice::from_ref(&p));
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["tau", "E_X", "E_P"])?;
        let mut ccr = 0.0_f64;
        let mut norm_drift = 0.0_f64;
        let interior = n - 2;
        let mut prev_t = 0.0;
        let mut s = s0.clone();
        for (k, t) in traj.tau.iter().enumerate() {
            let (xk, pk) = (&traj.x[k][0], &traj.p[k][0]);
            ccr = ccr.max(super::quantum::ccr_defect(xk, pk, self.hbar, interior));
            if schrodinger && k > 0 {
                let sub = ((t - prev_t) / self.tau_end * self.steps as f64).round().max(1.0) as usize;
                s = evolve_state(&s, &gamma, &hm, self.hbar, t - prev_t, sub)?;
                norm_drift = norm_drift.max((s.norm() - 1.0).abs());
            }
            prev_t = *t;
            let ex = s.expectation(xk).re;
            let ep = s.expectation(pk).re;
            w.write_record([format!("{t:e}"), format!("{ex:e}"), format!("{ep:e}")])?;
        }
        w.flush()?;
        Ok(MatrixReport {
            mode: if schrodinger { "schrodinger" } else { "heisenberg" }.into(),
            n,
            max_ccr_interior_defect: Some(ccr),
            norm_drift: Some(norm_drift),
            ..Default::default()
        })
    }
}
