use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{standard_basis_of, StandardBasis};
use super::eigen::hermitian_eig;
use super::hermitian::HermitianMatrix;
use super::space::GeneratorSpace;
use super::vector::ClVector;
use crate::linalg::{c, hermitian_deviation, max_abs, re, CMat, ComplexMatrixJson};
use crate::{Error, Result};

/// Eigenvalues with `|λ| <= ZERO_EIG_REL * max|λ|` take the null `E + F` branch.
pub const ZERO_EIG_REL: f64 = 1e-9;

/// Vectors `c_i` with `c_i∙c_j* = H_ij` and `c_i∙c_j = 0`.
#[derive(Debug, Clone)]
pub struct GramResolution {
    pub vectors: Vec<ClVector>,
    pub target: HermitianMatrix,
}

impl GramResolution {
    /// `[c_i∙c_j*]`
    pub fn gram(&self) -> CMat {
        let n = self.vectors.len();
        CMat::from_fn(n, n, |i, j| self.vectors[i].dot(&self.vectors[j].conj()))
    }

    pub fn residual_matrix(&self) -> CMat {
        self.gram() - self.target.matrix()
    }

    /// `max |c_i∙c_j* − H_ij|`
    pub fn residual(&self) -> f64 {
        max_abs(&self.residual_matrix())
    }

    /// `max |c_i∙c_j|`
    pub fn isotropy_residual(&self) -> f64 {
        let n = self.vectors.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max(self.vectors[i].dot(&self.vectors[j]).norm());
            }
        }
        worst
    }

    pub fn to_json(&self) -> GramResolutionJson {
        GramResolutionJson {
            n: self.vectors.len(),
            generators: self.vectors.first().map_or(0, |v| v.space().dim()),
            vectors: self
                .vectors
                .iter()
                .map(|v| VectorJson {
                    re: v.coeffs().iter().map(|z| z.re).collect(),
                    im: v.coeffs().iter().map(|z| z.im).collect(),
                })
                .collect(),
            residual: ComplexMatrixJson::from_matrix(&self.residual_matrix()),
            max_residual: self.residual(),
            max_isotropy: self.isotropy_residual(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramResolutionJson {
    pub n: usize,
    pub generators: usize,
    pub vectors: Vec<VectorJson>,
    pub residual: ComplexMatrixJson,
    pub max_residual: f64,
    pub max_isotropy: f64,
}

/// Resolve `H` in the first block of `space`.
pub fn resolve_hermitian(h: &HermitianMatrix, space: &Arc<GeneratorSpace>) -> Result<GramResolution> {
    let label = space.blocks()[0].label.clone();
    resolve_hermitian_in(h, space, &label)
}

/// Diagonalize `H = U Λ U†` and set `c_i = Σ_k U_ik b_k` with
/// `b_k = √λ_k F_k` (λ > 0), `√|λ_k| E_k` (λ < 0), or a null combination of
/// `E_k` and `F_k` when `λ_k` is numerically zero.
pub fn resolve_hermitian_in(
    h: &HermitianMatrix,
    space: &Arc<GeneratorSpace>,
    label: &str,
) -> Result<GramResolution> {
    let basis = standard_basis_of(space, label)?;
    let n = h.n();
    if basis.rank() < n {
        return Err(Error::InsufficientSpace {
            label: label.to_string(),
            needed: n,
            available: basis.rank(),
        });
    }
    let eig = hermitian_eig(h)?;
    let scale = eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let components: Vec<ClVector> = eig
        .values
        .iter()
        .enumerate()
        .map(|(k, &lambda)| eigen_component(&basis, k, lambda, scale))
        .collect();

    let vectors = (0..n)
        .map(|i| {
            let mut ci = ClVector::zero(space);
            for (k, b) in components.iter().enumerate() {
                ci.axpy(eig.vectors[(i, k)], b);
            }
            ci
        })
        .collect();
    Ok(GramResolution {
        vectors,
        target: h.clone(),
    })
}

fn eigen_component(basis: &StandardBasis, k: usize, lambda: f64, scale: f64) -> ClVector {
    if lambda.abs() <= ZERO_EIG_REL * scale {
        // α² − β² = λ keeps the Gram exact; λ = 0 gives E_k + F_k.
        let alpha = (1.0 + 0.5 * lambda).sqrt();
        let beta = (1.0 - 0.5 * lambda).sqrt();
        let mut v = basis.f[k].scale(re(alpha));
        v.axpy(re(beta), &basis.e[k]);
        v
    } else if lambda > 0.0 {
        basis.f[k].scale(re(lambda.sqrt()))
    } else {
        basis.e[k].scale(re((-lambda).sqrt()))
    }
}

/// Clifford spinors `c^A` and conjugate momenta `d*_A` of one particle.
#[derive(Debug, Clone)]
pub struct CanonicalPair {
    pub c: [ClVector; 2],
    pub dstar: [ClVector; 2],
}

impl CanonicalPair {
    /// `x^{AḂ} = c^A∙c*^Ḃ`
    pub fn x_spinor(&self) -> CMat {
        CMat::from_fn(2, 2, |a, b| self.c[a].dot(&self.c[b].conj()))
    }

    /// `p_{AḂ} = d*_A∙d_Ḃ`
    pub fn p_spinor(&self) -> CMat {
        CMat::from_fn(2, 2, |a, b| self.dstar[a].dot(&self.dstar[b].conj()))
    }

    /// `M^A_B = c^A∙d*_B`
    pub fn cross(&self) -> CMat {
        CMat::from_fn(2, 2, |a, b| self.c[a].dot(&self.dstar[b]))
    }
}

/// Generator space with the `c`, `d` and `h` blocks `resolve_pair` expects.
pub fn particle_space() -> Arc<GeneratorSpace> {
    GeneratorSpace::with_blocks(&[("c", 2), ("d", 2), ("h", 2)]).expect("non-empty")
}

pub fn resolve_pair(
    x: &HermitianMatrix,
    p: &HermitianMatrix,
    m: &CMat,
    space: &Arc<GeneratorSpace>,
) -> Result<CanonicalPair> {
    resolve_pair_in(x, p, m, space, ["c", "d", "h"])
}

/// Realize `x^{AḂ}`, `p_{AḂ}` and `c^A∙d*_B = M^A_B` on three disjoint blocks.
///
/// The `h` block contributes `c^A += h_A`, `d*_A += Σ_i M_iA h_i*` with
/// `h_i = F_i` of that block, so `c∙d* = M` while `c∙c`, `d*∙d*` and `c∙d`
/// stay zero. The shifts `I` and `Mᵀ M̄` they add to `x` and `p` are
/// subtracted before resolving the `c` and `d` blocks.
pub fn resolve_pair_in(
    x: &HermitianMatrix,
    p: &HermitianMatrix,
    m: &CMat,
    space: &Arc<GeneratorSpace>,
    labels: [&str; 3],
) -> Result<CanonicalPair> {
    for (name, mat) in [("x", x.matrix()), ("p", p.matrix()), ("M", m)] {
        if mat.nrows() != 2 || mat.ncols() != 2 {
            return Err(Error::Domain(format!("{name} must be 2x2")));
        }
    }
    let hb = standard_basis_of(space, labels[2])?;
    if hb.rank() < 2 {
        return Err(Error::InsufficientSpace {
            label: labels[2].to_string(),
            needed: 2,
            available: hb.rank(),
        });
    }
    let identity = CMat::identity(2, 2);
    let x_shift = x.matrix() - &identity;
    let p_shift = p.matrix() - m.transpose() * m.map(|z| z.conj());
    let deviation = hermitian_deviation(&p_shift);
    if deviation > 1e-12 {
        return Err(Error::NotHermitian { deviation });
    }
    let xr = resolve_hermitian_in(&HermitianMatrix::symmetrized(&x_shift), space, labels[0])?;
    let pr = resolve_hermitian_in(&HermitianMatrix::symmetrized(&p_shift), space, labels[1])?;

    let mut cv = xr.vectors;
    let mut dv = pr.vectors;
    for a in 0..2 {
        cv[a].axpy(re(1.0), &hb.f[a]);
        for i in 0..2 {
            dv[a].axpy(m[(i, a)], &hb.f[i].conj());
        }
    }
    let [c0, c1]: [ClVector; 2] = cv.try_into().expect("two vectors");
    let [d0, d1]: [ClVector; 2] = dv.try_into().expect("two vectors");
    Ok(CanonicalPair {
        c: [c0, c1],
        dstar: [d0, d1],
    })
}

/// `μ · 1` as a 2×2 complex matrix.
pub fn noether_cross(mu: Complex64) -> CMat {
    CMat::from_fn(2, 2, |i, j| if i == j { mu } else { c(0.0, 0.0) })
}
