use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::HermitianMatrix;
use crate::linalg::{hermitian_deviation, random_hermitian, random_matrix, re, ComplexMatrixJson, CMat};
use crate::{Error, Result};

pub const DEFAULT_N_MAX: u32 = 4;

/// A coefficient of the travelling-wave expansion
/// `c = k + l τ + Σ a_n e^{in(τ+σ)/2} + Σ b_n e^{in(τ−σ)/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coef {
    K,
    L,
    A(i32),
    B(i32),
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coef::K => write!(f, "k"),
            Coef::L => write!(f, "l"),
            Coef::A(n) => write!(f, "a{n}"),
            Coef::B(n) => write!(f, "b{n}"),
        }
    }
}

impl FromStr for Coef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidModeSpec(format!("unknown coefficient label {s:?}"));
        match s.trim() {
            "k" => Ok(Coef::K),
            "l" => Ok(Coef::L),
            t if t.len() > 1 => {
                let n: i32 = t[1..].parse().map_err(|_| bad())?;
                match &t[..1] {
                    "a" => Ok(Coef::A(n)),
                    "b" => Ok(Coef::B(n)),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}

/// Mode content of a flat-worldsheet string, with the 2×2 blocks
/// `G(i, j)^{AḂ} = coef_i^A ∙ coef_j^{*Ḃ}`. Only self products and the pairs
/// `(a_n, a_{−n})`, `(b_n, b_{−n})` may be non-zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpec {
    pub mass: f64,
    modes: Vec<i32>,
    blocks: BTreeMap<(Coef, Coef), CMat>,
}

fn allowed(i: Coef, j: Coef) -> bool {
    match (i, j) {
        (a, b) if a == b => true,
        (Coef::A(n), Coef::A(m)) | (Coef::B(n), Coef::B(m)) => n == -m,
        _ => false,
    }
}

impl ModeSpec {
    pub fn new(mass: f64, modes: &[i32]) -> Result<Self> {
        Self::with_n_max(mass, modes, DEFAULT_N_MAX)
    }

    pub fn with_n_max(mass: f64, modes: &[i32], n_max: u32) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::InvalidModeSpec(format!("mass must be positive, got {mass}")));
        }
        let mut sorted = modes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != modes.len() {
            return Err(Error::InvalidModeSpec("repeated mode numbers".into()));
        }
        if let Some(n) = sorted.iter().find(|&&n| n == 0 || n.unsigned_abs() > n_max) {
            return Err(Error::InvalidModeSpec(format!("mode {n} outside 0 < |n| <= {n_max}")));
        }
        Ok(ModeSpec { mass, modes: sorted, blocks: BTreeMap::new() })
    }

    pub fn modes(&self) -> &[i32] {
        &self.modes
    }

    /// `k, l, a_n…, b_n…` in a fixed order.
    pub fn labels(&self) -> Vec<Coef> {
        let mut out = vec![Coef::K, Coef::L];
        out.extend(self.modes.iter().map(|&n| Coef::A(n)));
        out.extend(self.modes.iter().map(|&n| Coef::B(n)));
        out
    }

    fn known(&self, c: Coef) -> bool {
        match c {
            Coef::K | Coef::L => true,
            Coef::A(n) | Coef::B(n) => self.modes.contains(&n),
        }
    }

    /// Sets `G(i, j)`; `G(j, i)` becomes its adjoint.
    pub fn set(&mut self, i: Coef, j: Coef, block: CMat) -> Result<()> {
        if !self.known(i) || !self.known(j) {
            return Err(Error::InvalidModeSpec(format!("({i}, {j}) refers to a mode not in the list")));
        }
        if !allowed(i, j) {
            return Err(Error::InvalidModeSpec(format!("product of {i} and {j} must vanish")));
        }
        if block.shape() != (2, 2) {
            return Err(Error::InvalidModeSpec(format!("block ({i}, {j}) must be 2x2")));
        }
        if i == j {
            let dev = hermitian_deviation(&block);
            if dev > 1e-14 * (1.0 + crate::linalg::max_abs(&block)) {
                return Err(Error::InvalidModeSpec(format!("self block of {i} is not Hermitian ({dev:e})")));
            }
        } else if let Some(existing) = self.blocks.get(&(j, i)) {
            if crate::linalg::max_abs(&(existing.adjoint() - &block)) > 1e-14 {
                return Err(Error::InvalidModeSpec(format!("blocks ({i}, {j}) and ({j}, {i}) disagree")));
            }
        }
        self.blocks.insert((j, i), block.adjoint());
        self.blocks.insert((i, j), block);
        Ok(())
    }

    pub fn block(&self, i: Coef, j: Coef) -> CMat {
        self.blocks.get(&(i, j)).cloned().unwrap_or_else(|| CMat::zeros(2, 2))
    }

    /// The full Gram over `(label, A)` pairs, ordered as [`Self::labels`].
    pub fn gram(&self) -> Result<HermitianMatrix> {
        let labels = self.labels();
        let n = 2 * labels.len();
        let g = CMat::from_fn(n, n, |r, c| self.block(labels[r / 2], labels[c / 2])[(r % 2, c % 2)]);
        HermitianMatrix::new(g)
    }

    /// `(det l∙l*)^{1/3}`, the square of the induced momentum.
    pub fn p_squared(&self) -> f64 {
        crate::spinor::det2(&self.block(Coef::L, Coef::L)).re.cbrt()
    }

    pub fn check_on_shell(&self, tol: f64) -> Result<()> {
        let p2 = self.p_squared();
        let m2 = self.mass * self.mass;
        if (p2 - m2).abs() > tol * m2 {
            return Err(Error::InvalidModeSpec(format!("induced p·p = {p2} differs from m² = {m2}")));
        }
        Ok(())
    }

    /// An on-shell string with every allowed block filled from `rng`; mode
    /// blocks are scaled by `amp`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, mass: f64, modes: &[i32], amp: f64) -> Result<Self> {
        let mut spec = Self::new(mass, modes)?;
        spec.set(Coef::K, Coef::K, random_hermitian(rng, 2))?;
        let b = random_matrix(rng, 2, 2);
        let l = &b * b.adjoint() + CMat::identity(2, 2) * re(0.2);
        let scale = mass.powi(3) / crate::spinor::det2(&l).re.sqrt();
        spec.set(Coef::L, Coef::L, l * re(scale))?;
        for &n in modes {
            for coef in [Coef::A(n), Coef::B(n)] {
                spec.set(coef, coef, random_hermitian(rng, 2) * re(amp))?;
            }
            if n > 0 && modes.contains(&-n) {
                spec.set(Coef::A(n), Coef::A(-n), random_matrix(rng, 2, 2) * re(amp))?;
                spec.set(Coef::B(n), Coef::B(-n), random_matrix(rng, 2, 2) * re(amp))?;
            }
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> ModeSpecJson {
        let gram = self
            .blocks
            .iter()
            .filter(|((i, j), _)| i <= j)
            .map(|((i, j), b)| {
                let key = if i == j { i.to_string() } else { format!("{i},{j}") };
                (key, ComplexMatrixJson::from_matrix(b))
            })
            .collect();
        ModeSpecJson { mass: self.mass, modes: self.modes.clone(), n_max: None, gram }
    }
}

/// `{"mass": m, "modes": [..], "gram": {"l": M, "a1,a-1": M, ...}}`; a key
/// naming one label is its self block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpecJson {
    pub mass: f64,
    #[serde(default)]
    pub modes: Vec<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    pub gram: BTreeMap<String, ComplexMatrixJson>,
}

impl ModeSpecJson {
    pub fn parse(&self) -> Result<ModeSpec> {
        let mut spec = ModeSpec::with_n_max(self.mass, &self.modes, self.n_max.unwrap_or(DEFAULT_N_MAX))?;
        for (key, value) in &self.gram {
            let (i, j) = match key.split_once(',') {
                Some((a, b)) => (a.parse()?, b.parse()?),
                None => {
                    let c: Coef = key.parse()?;
                    (c, c)
                }
            };
            let m = value.to_matrix().map_err(|e| Error::InvalidModeSpec(format!("{key}: {e}")))?;
            spec.set(i, j, m)?;
        }
        Ok(spec)
    }
}
