use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use super::space::{same_space, GeneratorSpace};
use crate::{Error, Result};

/// Grade-1 element of the complexified Clifford algebra: one complex
/// coefficient per real generator.
#[derive(Clone, PartialEq)]
pub struct ClVector {
    space: Arc<GeneratorSpace>,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for ClVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClVector")
            .field("dim", &self.coeffs.len())
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl ClVector {
    pub fn zero(space: &Arc<GeneratorSpace>) -> Self {
        Self {
            space: Arc::clone(space),
            coeffs: vec![Complex64::new(0.0, 0.0); space.dim()],
        }
    }

    pub fn from_coeffs(space: &Arc<GeneratorSpace>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::Dimension {
                expected: space.dim(),
                got: coeffs.len(),
            });
        }
        Ok(Self {
            space: Arc::clone(space),
            coeffs,
        })
    }

    /// The `k`-th real generator.
    pub fn generator(space: &Arc<GeneratorSpace>, k: usize) -> Result<Self> {
        space.sign(k)?;
        let mut v = Self::zero(space);
        v.coeffs[k] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn space(&self) -> &Arc<GeneratorSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Complex conjugation; the generators themselves are real.
    pub fn conj(&self) -> Self {
        Self {
            space: Arc::clone(&self.space),
            coeffs: self.coeffs.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            space: Arc::clone(&self.space),
            coeffs: self.coeffs.iter().map(|z| z * s).collect(),
        }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: Complex64, other: &ClVector) {
        assert!(
            same_space(&self.space, &other.space),
            "ClVector::axpy across generator spaces"
        );
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    /// Bullet product, panicking on mismatched spaces. See [`bullet`].
    pub fn dot(&self, other: &ClVector) -> Complex64 {
        bullet(self, other).expect("bullet product across generator spaces")
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Indices of generators carrying a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > 0.0)
            .map(|(k, _)| k)
    }
}

/// `a∙b = ½{a, b}`: complex-bilinear, symmetric, with `g∙g = ±2` on generators.
pub fn bullet(a: &ClVector, b: &ClVector) -> Result<Complex64> {
    if !same_space(&a.space, &b.space) {
        return Err(Error::SpaceMismatch);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for ((x, y), s) in a.coeffs.iter().zip(&b.coeffs).zip(a.space.signs()) {
        acc += x * y * f64::from(2 * *s);
    }
    Ok(acc)
}

impl Add for &ClVector {
    type Output = ClVector;
    fn add(self, rhs: &ClVector) -> ClVector {
        let mut out = self.clone();
        out.axpy(Complex64::new(1.0, 0.0), rhs);
        out
    }
}

impl Sub for &ClVector {
    type Output = ClVector;
    fn sub(self, rhs: &ClVector) -> ClVector {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), rhs);
        out
    }
}

impl Add for ClVector {
    type Output = ClVector;
    fn add(self, rhs: ClVector) -> ClVector {
        &self + &rhs
    }
}

impl Sub for ClVector {
    type Output = ClVector;
    fn sub(self, rhs: ClVector) -> ClVector {
        &self - &rhs
    }
}

impl Neg for &ClVector {
    type Output = ClVector;
    fn neg(self) -> ClVector {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<&ClVector> for Complex64 {
    type Output = ClVector;
    fn mul(self, rhs: &ClVector) -> ClVector {
        rhs.scale(self)
    }
}

impl Mul<&ClVector> for f64 {
    type Output = ClVector;
    fn mul(self, rhs: &ClVector) -> ClVector {
        rhs.scale(Complex64::new(self, 0.0))
    }
}

/// Linear combination `Σ w_i v_i` over vectors sharing one space.
pub fn combine<'a, I>(space: &Arc<GeneratorSpace>, terms: I) -> ClVector
where
    I: IntoIterator<Item = (Complex64, &'a ClVector)>,
{
    let mut out = ClVector::zero(space);
    for (w, v) in terms {
        out.axpy(w, v);
    }
    out
}
