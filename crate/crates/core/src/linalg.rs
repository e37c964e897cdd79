//! Dense complex matrix helpers shared by the eigen solver, matrix mechanics
//! and the structure-constant machinery.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub type CMat = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn hermitian_deviation(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn unitary_deviation(u: &CMat) -> f64 {
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - CMat::identity(n, n)))
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let a = random_matrix(rng, n, n);
    (&a + a.adjoint()) * re(0.5)
}

/// Haar-ish random unitary via QR of a complex Gaussian-like matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let a = random_matrix(rng, n, n);
    let qr = a.qr();
    let q = qr.q();
    let r = qr.r();
    // fix the phase ambiguity so the result does not depend on QR sign choices
    let mut q = q.clone();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { re(1.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `exp(i * h * t)` for Hermitian `h`, via the Jacobi eigen-decomposition.
pub fn unitary_exp(h: &CMat, t: f64) -> CMat {
    let eig = crate::clifford::hermitian_eig_matrix(h).expect("hermitian generator");
    let n = h.nrows();
    let phases = CMat::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, eig.values[i] * t)
        } else {
            re(0.0)
        }
    });
    &eig.vectors * phases * eig.vectors.adjoint()
}

/// Serializable complex matrix in split real/imaginary form.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ComplexMatrixJson {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

impl ComplexMatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let re = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect())
            .collect();
        let im = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect())
            .collect();
        Self { re, im: Some(im) }
    }

    pub fn to_matrix(&self) -> crate::Result<CMat> {
        let rows = self.re.len();
        let cols = self.re.first().map_or(0, Vec::len);
        if self.re.iter().any(|r| r.len() != cols) {
            return Err(crate::Error::Domain("ragged real part".into()));
        }
        if let Some(im) = &self.im {
            if im.len() != rows || im.iter().any(|r| r.len() != cols) {
                return Err(crate::Error::Domain(
                    "imaginary part shape differs from real part".into(),
                ));
            }
        }
        Ok(CMat::from_fn(rows, cols, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            c(self.re[i][j], im)
        }))
    }
}

/// Least-squares solve of `a x = b` through the SVD; returns the solution and
/// the numerical rank of `a`.
pub fn lstsq(a: &CMat, b: &CMat, rcond: f64) -> (CMat, usize) {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let rank = svd
        .singular_values
        .iter()
        .filter(|s| **s > rcond * smax)
        .count();
    let x = svd
        .solve(b, rcond * smax)
        .expect("svd computed with both factors");
    (x, rank)
}
