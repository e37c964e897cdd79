use std::sync::Arc;

use num_complex::Complex64;

use super::space::GeneratorSpace;
use super::vector::ClVector;
use crate::Result;

/// Null pairs `E_i`, `F_i` spanning one block.
///
/// With `g` the positive and `h` the negative generators of a block of rank
/// `n`:
///
/// ```text
/// F_i = ½ (g_i + i g_{n+i})      F_i∙F_j* = +δ_ij
/// E_i = ½ (h_i + i h_{n+i})      E_i∙E_j* = −δ_ij
/// ```
///
/// and every other pairing (`E∙E`, `F∙F`, `E∙F`, `E∙F*`) vanishes.
#[derive(Debug, Clone)]
pub struct StandardBasis {
    pub e: Vec<ClVector>,
    pub f: Vec<ClVector>,
}

impl StandardBasis {
    pub fn rank(&self) -> usize {
        self.e.len()
    }
}

/// Standard basis of the first block of `space`.
pub fn standard_basis(space: &Arc<GeneratorSpace>) -> Result<StandardBasis> {
    let label = space.blocks()[0].label.clone();
    standard_basis_of(space, &label)
}

pub fn standard_basis_of(space: &Arc<GeneratorSpace>, label: &str) -> Result<StandardBasis> {
    let block = space.block(label)?.clone();
    let n = block.rank()?;
    let half = Complex64::new(0.5, 0.0);
    let i_half = Complex64::new(0.0, 0.5);
    let pos = block.offset;
    let neg = block.offset + block.n_pos;
    let mut e = Vec::with_capacity(n);
    let mut f = Vec::with_capacity(n);
    for i in 0..n {
        let mut fi = ClVector::zero(space);
        fi.coeffs_mut()[pos + i] = half;
        fi.coeffs_mut()[pos + n + i] = i_half;
        f.push(fi);

        let mut ei = ClVector::zero(space);
        ei.coeffs_mut()[neg + i] = half;
        ei.coeffs_mut()[neg + n + i] = i_half;
        e.push(ei);
    }
    Ok(StandardBasis { e, f })
}
