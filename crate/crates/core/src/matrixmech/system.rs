use std::sync::Arc;

use num_complex::Complex64;

use crate::clifford::{ClVector, GeneratorSpace};
use crate::linalg::{re, unitary_deviation, CMat};
use crate::particle::ParticleState;
use crate::spinor::{raise_both, spinor_to_vec_c, METRIC};
use crate::{Error, Result};

const UNITARY_TOL: f64 = 1e-12;

/// N particles as ket vectors `C^A` and bra vectors `D_A` of Clifford spinors.
#[derive(Debug, Clone, PartialEq)]
pub struct NSystem {
    /// `kets[A][i] = c_i^A`
    pub kets: [Vec<ClVector>; 2],
    /// `bras[A][i] = d*_{iA}`
    pub bras: [Vec<ClVector>; 2],
    pub mass: f64,
}

fn unit(a: usize, b: usize) -> CMat {
    let mut m = CMat::zeros(2, 2);
    m[(a, b)] = re(1.0);
    m
}

/// Entrywise `Σ_{AB} w_{AB} M_{AB}` for the four spinor components.
fn contract(w: &CMat, blocks: &[[CMat; 2]; 2]) -> CMat {
    let mut out = CMat::zeros(blocks[0][0].nrows(), blocks[0][0].ncols());
    for a in 0..2 {
        for b in 0..2 {
            out += &blocks[a][b] * w[(a, b)];
        }
    }
    out
}

fn x_weights(mu: usize) -> CMat {
    CMat::from_fn(2, 2, |a, b| spinor_to_vec_c(&unit(a, b))[mu])
}

pub(crate) fn p_weights(mu: usize) -> CMat {
    CMat::from_fn(2, 2, |a, b| spinor_to_vec_c(&raise_both(&unit(a, b)))[mu])
}

impl NSystem {
    pub fn n(&self) -> usize {
        self.kets[0].len()
    }

    pub fn space(&self) -> &Arc<GeneratorSpace> {
        self.kets[0][0].space()
    }

    /// `X^{AḂ}_{ij} = c_i^A ∙ c_j^{*Ḃ}`
    pub fn x_spinor(&self, a: usize, b: usize) -> CMat {
        let n = self.n();
        CMat::from_fn(n, n, |i, j| self.kets[a][i].dot(&self.kets[b][j].conj()))
    }

    /// `P_{AḂ, ij} = d_{iḂ} ∙ d*_{jA}`
    pub fn p_spinor(&self, a: usize, b: usize) -> CMat {
        let n = self.n();
        CMat::from_fn(n, n, |i, j| self.bras[b][i].conj().dot(&self.bras[a][j]))
    }

    /// `X^μ` as N×N matrices.
    pub fn x(&self) -> [CMat; 4] {
        let blocks = [[self.x_spinor(0, 0), self.x_spinor(0, 1)], [self.x_spinor(1, 0), self.x_spinor(1, 1)]];
        std::array::from_fn(|mu| contract(&x_weights(mu), &blocks))
    }

    /// Contravariant `P^μ` as N×N matrices.
    pub fn p(&self) -> [CMat; 4] {
        let blocks = [[self.p_spinor(0, 0), self.p_spinor(0, 1)], [self.p_spinor(1, 0), self.p_spinor(1, 1)]];
        std::array::from_fn(|mu| contract(&p_weights(mu), &blocks))
    }

    pub fn p_lower(&self) -> [CMat; 4] {
        let p = self.p();
        std::array::from_fn(|mu| &p[mu] * re(METRIC[mu]))
    }

    /// `(C^A ∙ D_B)_{ij} = c_i^A ∙ d*_{jB}`
    pub fn constraint(&self, a: usize, b: usize) -> CMat {
        let n = self.n();
        CMat::from_fn(n, n, |i, j| self.kets[a][i].dot(&self.bras[b][j]))
    }

    pub fn mu(&self) -> f64 {
        let t = self.constraint(0, 0).trace() + self.constraint(1, 1).trace();
        t.re / (2.0 * self.n() as f64)
    }

    /// Largest deviation of `C^A ∙ D_B` from `μ δ^A_B · 1`.
    pub fn constraint_residual(&self) -> f64 {
        let mu = self.mu();
        let n = self.n();
        let mut worst = 0.0_f64;
        for a in 0..2 {
            for b in 0..2 {
                let want = if a == b { CMat::identity(n, n) * re(mu) } else { CMat::zeros(n, n) };
                worst = worst.max(crate::linalg::max_abs(&(self.constraint(a, b) - want)));
            }
        }
        worst
    }

    /// `Φ`-weighted charges `J_AB = Tr Φ(C_A∙D_B + C_B∙D_A)` and
    /// `j = i Tr(Φ C^A∙D_A − h.c.)`.
    pub fn charges(&self, phi: &CMat) -> (CMat, f64) {
        let low = |a: usize, b: usize| -> CMat {
            // C_1 = −C^2, C_2 = C^1
            if a == 0 {
                -self.constraint(1, b)
            } else {
                self.constraint(0, b)
            }
        };
        let j_ab = CMat::from_fn(2, 2, |a, b| (phi * (low(a, b) + low(b, a))).trace());
        let t: Complex64 = (phi * (self.constraint(0, 0) + self.constraint(1, 1))).trace();
        (j_ab, -2.0 * t.im)
    }

    /// Global U(N) action: kets `→ U kets`, bras `→ bras U†`.
    pub fn gauge_transform(&self, u: &CMat) -> Result<NSystem> {
        let n = self.n();
        if u.shape() != (n, n) {
            return Err(Error::Dimension { expected: n, got: u.nrows() });
        }
        let dev = unitary_deviation(u);
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        let space = self.space();
        let mix = |vs: &[ClVector], coef: &dyn Fn(usize, usize) -> Complex64| -> Vec<ClVector> {
            (0..n)
                .map(|i| {
                    let mut out = ClVector::zero(space);
                    for (h, v) in vs.iter().enumerate() {
                        out.axpy(coef(i, h), v);
                    }
                    out
                })
                .collect()
        };
        let kets = std::array::from_fn(|a| mix(&self.kets[a], &|i, h| u[(i, h)]));
        let bras = std::array::from_fn(|a| mix(&self.bras[a], &|j, h| u[(j, h)].conj()));
        Ok(NSystem { kets, bras, mass: self.mass })
    }

    /// Particle `i` as a single-particle state (meaningful in a diagonal frame).
    pub fn particle(&self, i: usize, tau: f64) -> Result<ParticleState> {
        ParticleState::new(
            [self.kets[0][i].clone(), self.kets[1][i].clone()],
            [self.bras[0][i].clone(), self.bras[1][i].clone()],
            tau,
            self.mass,
        )
    }
}

/// Places each particle on its own generator blocks. Particles that already
/// share one space are kept there if their supports are disjoint.
pub fn assemble(particles: &[ParticleState]) -> Result<NSystem> {
    let first = particles.first().ok_or(Error::EmptySpace)?;
    let mass = first.mass;
    if let Some(p) = particles.iter().find(|p| (p.mass - mass).abs() > 1e-12 * mass) {
        return Err(Error::Domain(format!("particle masses differ: {} vs {}", mass, p.mass)));
    }
    let shared = particles.iter().all(|p| Arc::ptr_eq(p.space(), first.space()));
    if shared && particles.len() > 1 {
        let supports: Vec<Vec<usize>> = particles
            .iter()
            .map(|p| {
                let mut s: Vec<usize> = p.c.iter().chain(&p.dstar).flat_map(|v| v.support().collect::<Vec<_>>()).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        for i in 0..supports.len() {
            for j in i + 1..supports.len() {
                if supports[i].iter().any(|k| supports[j].binary_search(k).is_ok()) {
                    return Err(Error::OverlappingBlocks(i, j));
                }
            }
        }
        return Ok(NSystem {
            kets: std::array::from_fn(|a| particles.iter().map(|p| p.c[a].clone()).collect()),
            bras: std::array::from_fn(|a| particles.iter().map(|p| p.dstar[a].clone()).collect()),
            mass,
        });
    }
    let mut labels = Vec::new();
    for (i, p) in particles.iter().enumerate() {
        for b in p.space().blocks() {
            labels.push((format!("{}{}", b.label, i), b.rank()?));
        }
    }
    let space = GeneratorSpace::with_blocks(&labels)?;
    let mut offset = 0;
    let mut kets: [Vec<ClVector>; 2] = [Vec::new(), Vec::new()];
    let mut bras: [Vec<ClVector>; 2] = [Vec::new(), Vec::new()];
    for p in particles {
        let dim = p.space().dim();
        let embed = |v: &ClVector| {
            let mut coeffs = vec![re(0.0); space.dim()];
            coeffs[offset..offset + dim].copy_from_slice(v.coeffs());
            ClVector::from_coeffs(&space, coeffs).expect("dimension fixed above")
        };
        for a in 0..2 {
            kets[a].push(embed(&p.c[a]));
            bras[a].push(embed(&p.dstar[a]));
        }
        offset += dim;
    }
    Ok(NSystem { kets, bras, mass })
}

/// `Φ` must be Hermitian and commute with every `P_μ`.
pub fn weight_matrix_residual(phi: &CMat, p: &[CMat]) -> f64 {
    let herm = crate::linalg::hermitian_deviation(phi);
    p.iter()
        .map(|pm| crate::linalg::max_abs(&crate::linalg::commutator(phi, pm)))
        .fold(herm, f64::max)
}
