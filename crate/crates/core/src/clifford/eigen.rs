use num_complex::Complex64;

use super::hermitian::HermitianMatrix;
use crate::linalg::{hermitian_deviation, CMat};
use crate::{Error, Result};

/// Off-diagonal Frobenius norm (relative to the full norm) at which sweeping stops.
pub const JACOBI_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 50;

/// `H = U · diag(values) · U†`, eigenvalues sorted in descending order
/// (ties keep their original diagonal position).
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
    pub sweeps: usize,
}

impl Eigen {
    pub fn reconstruct(&self) -> CMat {
        let n = self.values.len();
        let d = CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(self.values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        &self.vectors * d * self.vectors.adjoint()
    }
}

pub fn hermitian_eig(h: &HermitianMatrix) -> Result<Eigen> {
    Ok(jacobi(h.matrix()))
}

/// Eigen-decomposition of a plain matrix, checked for Hermiticity with a
/// tolerance scaled by its magnitude.
pub fn hermitian_eig_matrix(h: &CMat) -> Result<Eigen> {
    let scale = h.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
    let deviation = hermitian_deviation(h);
    if deviation > 1e-12 * scale {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(jacobi(h))
}

fn off_norm(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                s += a[(p, q)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi rotations.
///
/// Each pivot `(p, q)` uses the unitary
///
/// ```text
/// R_pp = R_qq = c,  R_pq = s e^{iφ},  R_qp = −s e^{−iφ},   φ = arg a_pq
/// ```
///
/// which reduces to the real symmetric rotation after removing the phase of
/// `a_pq`; `A ← R† A R` annihilates `a_pq`.
fn jacobi(h: &CMat) -> Eigen {
    let n = h.nrows();
    let mut a = (h + h.adjoint()).map(|z| z * 0.5);
    let mut u = CMat::identity(n, n);
    let total = a.norm().max(f64::MIN_POSITIVE);

    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS && off_norm(&a) > JACOBI_TOL * total {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let b = apq.norm();
                if b <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / b;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * b);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                let r_pq = phase * sn;
                let r_qp = -phase.conj() * sn;

                // A ← A R, U ← U R
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * cs + akq * r_qp;
                    a[(k, q)] = akp * r_pq + akq * cs;
                    let (ukp, ukq) = (u[(k, p)], u[(k, q)]);
                    u[(k, p)] = ukp * cs + ukq * r_qp;
                    u[(k, q)] = ukp * r_pq + ukq * cs;
                }
                // A ← R† A
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = apk * cs + aqk * r_qp.conj();
                    a[(q, k)] = apk * r_pq.conj() + aqk * cs;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps original index order on ties
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap());
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMat::from_fn(n, n, |r, k| u[(r, order[k])]);
    Eigen {
        values,
        vectors,
        sweeps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs, random_hermitian, unitary_deviation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_input_is_a_permutation() {
        let h = HermitianMatrix::from_real_diagonal(&[-1.0, 3.0]);
        let e = hermitian_eig(&h).unwrap();
        assert_eq!(e.values, vec![3.0, -1.0]);
        assert_eq!(e.vectors[(1, 0)], c(1.0, 0.0));
        assert_eq!(e.vectors[(0, 1)], c(1.0, 0.0));
        assert_eq!(e.sweeps, 0);
    }

    #[test]
    fn pauli_x_spectrum() {
        let m = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let e = hermitian_eig(&HermitianMatrix::new(m.clone()).unwrap()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15);
        assert!((e.values[1] + 1.0).abs() < 1e-15);
        assert!(max_abs(&(e.reconstruct() - m)) < 1e-15);
    }

    #[test]
    fn complex_pivot_phase() {
        let m = CMat::from_row_slice(2, 2, &[c(2., 0.), c(0., -1.), c(0., 1.), c(2., 0.)]);
        let e = hermitian_eig(&HermitianMatrix::new(m.clone()).unwrap()).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert!(max_abs(&(e.reconstruct() - m)) < 1e-14);
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=12 {
            let m = random_hermitian(&mut rng, n);
            let e = hermitian_eig(&HermitianMatrix::new(m.clone()).unwrap()).unwrap();
            assert!(max_abs(&(e.reconstruct() - &m)) < 1e-11, "n = {n}");
            assert!(unitary_deviation(&e.vectors) < 1e-11);
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(2., 0.), c(0., 0.)]);
        assert!(matches!(
            hermitian_eig_matrix(&m),
            Err(Error::NotHermitian { .. })
        ));
    }
}
