use std::io::Write;

use num_complex::Complex64;

use super::system::{p_weights, NSystem};
use crate::clifford::ClVector;
use crate::clifford::hermitian_eig_matrix;
use crate::linalg::{re, CMat};
use crate::ode::rk4;
use crate::spinor::METRIC;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct ClassicalTrajectory {
    pub tau_bar: Vec<f64>,
    pub systems: Vec<NSystem>,
}

fn pack(sys: &NSystem) -> Vec<Complex64> {
    sys.kets
        .iter()
        .chain(&sys.bras)
        .flat_map(|vs| vs.iter().flat_map(|v| v.coeffs().iter().copied()))
        .collect()
}

fn unpack(template: &NSystem, data: &[Complex64]) -> NSystem {
    let n = template.n();
    let dim = template.space().dim();
    let space = template.space();
    let part = |slot: usize| -> Vec<ClVector> {
        (0..n)
            .map(|i| {
                let start = (slot * n + i) * dim;
                ClVector::from_coeffs(space, data[start..start + dim].to_vec()).expect("packed dimension")
            })
            .collect()
    };
    NSystem { kets: [part(0), part(1)], bras: [part(2), part(3)], mass: template.mass }
}

/// `dC^A/dτ̄` for `H = (P^μP_μ − m²·1)/(2m)`, in proper time. The flow is
/// generated by `H/μ`, which absorbs the Noether multiplier.
fn ket_velocity(sys: &NSystem) -> [Vec<ClVector>; 2] {
    let n = sys.n();
    let p = sys.p();
    let mu = sys.mu();
    let space = sys.space();
    // ∂Tr H/∂P_{AĖ} as N×N blocks
    let g: Vec<CMat> = (0..4)
        .map(|a| {
            let (aa, e) = (a / 2, a % 2);
            let mut out = CMat::zeros(n, n);
            for m in 0..4 {
                out += &p[m] * (p_weights(m)[(aa, e)] * (METRIC[m] / (sys.mass * mu)));
            }
            out
        })
        .collect();
    std::array::from_fn(|a| {
        (0..n)
            .map(|i| {
                let mut v = ClVector::zero(space);
                for e in 0..2 {
                    let blk = &g[2 * a + e];
                    for j in 0..n {
                        v.axpy(blk[(i, j)], &sys.bras[e][j].conj());
                    }
                }
                v
            })
            .collect()
    })
}

/// Free N-particle evolution in proper time. Momenta stay fixed and
/// `X(τ̄) = X(0) + P τ̄ / m`.
pub fn evolve_matrix_classical(
    sys: &NSystem,
    tau_end: f64,
    steps: usize,
    record_every: usize,
) -> Result<ClassicalTrajectory> {
    if sys.mu().abs() < 1e-12 {
        return Err(Error::TurningPoint { tau: 0.0, mu: sys.mu() });
    }
    let template = sys.clone();
    let half = pack(sys).len() / 2;
    let rhs = |_t: f64, y: &[Complex64]| -> Vec<Complex64> {
        let s = unpack(&template, y);
        let v = ket_velocity(&s);
        let mut out: Vec<Complex64> = v.iter().flat_map(|vs| vs.iter().flat_map(|x| x.coeffs().iter().copied())).collect();
        out.resize(2 * half, re(0.0));
        out
    };
    let every = record_every.max(1);
    let mut tau_bar = Vec::new();
    let mut systems = Vec::new();
    rk4(rhs, 0.0, tau_end, pack(sys), steps, |k, t, y| {
        if k % every == 0 || k == steps {
            tau_bar.push(t);
            systems.push(unpack(&template, y));
        }
        Ok(())
    })?;
    Ok(ClassicalTrajectory { tau_bar, systems })
}

impl ClassicalTrajectory {
    /// Sorted eigenvalues of `X^μ` at every recorded time.
    pub fn eigenvalues(&self) -> Result<Vec<[Vec<f64>; 4]>> {
        self.systems
            .iter()
            .map(|s| {
                let x = s.x();
                let mut out: [Vec<f64>; 4] = Default::default();
                for mu in 0..4 {
                    let h = (&x[mu] + x[mu].adjoint()) * re(0.5);
                    out[mu] = hermitian_eig_matrix(&h)?.values;
                }
                Ok(out)
            })
            .collect()
    }

    pub fn write_eigenvalue_csv<W: Write>(&self, out: W) -> Result<()> {
        let n = self.systems.first().map_or(0, |s| s.n());
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["tau_bar".to_string()];
        for mu in 0..4 {
            for i in 0..n {
                header.push(format!("x{mu}_{i}"));
            }
        }
        w.write_record(&header)?;
        for (t, ev) in self.tau_bar.iter().zip(self.eigenvalues()?) {
            let mut row = vec![format!("{t:e}")];
            for vals in &ev {
                row.extend(vals.iter().map(|v| format!("{v:e}")));
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}
