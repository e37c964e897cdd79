use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{lstsq, CMat};
use crate::{Error, Result};

/// A finite-dimensional Lie algebra `[X_a, X_b] = Σ_c f_{abc} X_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiePresentation {
    labels: Vec<String>,
    f: Vec<Complex64>,
}

impl LiePresentation {
    pub fn zeros<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        LiePresentation { labels, f: vec![Complex64::new(0.0, 0.0); n * n * n] }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        let n = self.dim();
        (a * n + b) * n + c
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> Complex64 {
        self.f[self.idx(a, b, c)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: Complex64) {
        let i = self.idx(a, b, c);
        self.f[i] = v;
    }

    /// Sets `[X_a, X_b]` and, by antisymmetry, `[X_b, X_a]`.
    pub fn set_bracket(&mut self, a: usize, b: usize, coeffs: &[Complex64]) {
        for (c, &v) in coeffs.iter().enumerate() {
            self.set(a, b, c, v);
            self.set(b, a, c, -v);
        }
    }

    pub fn bracket(&self, a: usize, b: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|c| self.get(a, b, c)).collect()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        LiePresentation { labels: self.labels.clone(), f: self.f.iter().map(|v| v * s).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.f.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// `max |f_{abc} + f_{bac}|`
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    worst = worst.max((self.get(a, b, c) + self.get(b, a, c)).norm());
                }
            }
        }
        worst
    }

    /// `max |Σ_d f_{abd} f_{dce} + f_{bcd} f_{dae} + f_{cad} f_{dbe}|`
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let mut s = Complex64::new(0.0, 0.0);
                        for d in 0..n {
                            s += self.get(a, b, d) * self.get(d, c, e)
                                + self.get(b, c, d) * self.get(d, a, e)
                                + self.get(c, a, d) * self.get(d, b, e);
                        }
                        worst = worst.max(s.norm());
                    }
                }
            }
        }
        worst
    }

    /// Constants in the basis `Y_i = Σ_a T_{ia} X_a`.
    pub fn change_basis<S: Into<String>>(&self, t: &CMat, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let n = self.dim();
        if t.shape() != (n, n) {
            return Err(Error::Dimension { expected: n, got: t.nrows() });
        }
        let inv = t.clone().try_inverse().ok_or(Error::RankDeficient { rank: n - 1, needed: n })?;
        let mut out = LiePresentation::zeros(labels);
        if out.dim() != n {
            return Err(Error::Dimension { expected: n, got: out.dim() });
        }
        for i in 0..n {
            for j in 0..n {
                // [Y_i, Y_j] = Σ_c g_c X_c, then X_c = Σ_k inv_{ck} Y_k
                let mut g = vec![Complex64::new(0.0, 0.0); n];
                for a in 0..n {
                    for b in 0..n {
                        let w = t[(i, a)] * t[(j, b)];
                        if w.norm() == 0.0 {
                            continue;
                        }
                        for (c, gc) in g.iter_mut().enumerate() {
                            *gc += w * self.get(a, b, c);
                        }
                    }
                }
                for k in 0..n {
                    let v: Complex64 = (0..n).map(|c| g[c] * inv[(c, k)]).sum();
                    out.set(i, j, k, v);
                }
            }
        }
        Ok(out)
    }

    /// The sub-presentation on `indices`, with the largest coefficient that
    /// leaves the subspace.
    pub fn restrict(&self, indices: &[usize]) -> (Self, f64) {
        let mut out = LiePresentation::zeros(indices.iter().map(|&i| self.labels[i].clone()));
        let mut leak: f64 = 0.0;
        for (i, &a) in indices.iter().enumerate() {
            for (j, &b) in indices.iter().enumerate() {
                for c in 0..self.dim() {
                    match indices.iter().position(|&x| x == c) {
                        Some(k) => out.set(i, j, k, self.get(a, b, c)),
                        None => leak = leak.max(self.get(a, b, c).norm()),
                    }
                }
            }
        }
        (out, leak)
    }

    /// Least-squares `α` with `self ≈ α · other`, and the residual `max |self − α other|`.
    pub fn fit_scale(&self, other: &LiePresentation) -> Result<(Complex64, f64)> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: other.dim() });
        }
        let a = CMat::from_column_slice(other.f.len(), 1, &other.f);
        let b = CMat::from_column_slice(self.f.len(), 1, &self.f);
        let (x, rank) = lstsq(&a, &b, 1e-12);
        if rank == 0 {
            return Err(Error::RankDeficient { rank, needed: 1 });
        }
        let alpha = x[(0, 0)];
        let res = self.f.iter().zip(&other.f).fold(0.0_f64, |m, (s, o)| m.max((s - alpha * o).norm()));
        Ok((alpha, res))
    }

    pub fn to_json(&self) -> LiePresentationJson {
        let n = self.dim();
        let mut entries = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = self.get(a, b, c);
                    if v.norm() > 0.0 {
                        entries.push((a, b, c, v.re, v.im));
                    }
                }
            }
        }
        LiePresentationJson { labels: self.labels.clone(), entries }
    }
}

/// Sparse form: `(a, b, c, re, im)` for every nonzero `f_{abc}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiePresentationJson {
    pub labels: Vec<String>,
    pub entries: Vec<(usize, usize, usize, f64, f64)>,
}
