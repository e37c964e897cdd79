use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian_deviation, CMat, ComplexMatrixJson};
use crate::{Error, Result};

/// Absolute tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-14;

/// An `n × n` complex Hermitian matrix of arbitrary signature.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: CMat,
}

impl HermitianMatrix {
    pub fn new(m: CMat) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let deviation = hermitian_deviation(&m);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { m })
    }

    /// Hermitian part `(m + m†) / 2`; always succeeds for square input.
    pub fn symmetrized(m: &CMat) -> Self {
        Self {
            m: (m + m.adjoint()).map(|z| z * 0.5),
        }
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Self {
            m: CMat::from_fn(n, n, |i, j| {
                if i == j {
                    crate::linalg::re(d[i])
                } else {
                    crate::linalg::re(0.0)
                }
            }),
        }
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn into_matrix(self) -> CMat {
        self.m
    }
}

/// `{"n": int, "re": [[...]], "im": [[...]]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HermitianMatrixJson {
    pub n: usize,
    #[serde(flatten)]
    pub entries: ComplexMatrixJson,
}

impl HermitianMatrixJson {
    pub fn from_matrix(h: &HermitianMatrix) -> Self {
        Self {
            n: h.n(),
            entries: ComplexMatrixJson::from_matrix(h.matrix()),
        }
    }

    pub fn parse(&self) -> Result<HermitianMatrix> {
        let m = self.entries.to_matrix()?;
        if m.nrows() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: m.nrows(),
            });
        }
        HermitianMatrix::new(m)
    }
}
