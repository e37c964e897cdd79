use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::linalg::{c, max_abs, random_unitary, re, CMat};

/// Independent bullet: `½(ab + ba)` on grade-1 elements is `Σ a_k b_k g_k²`.
fn oracle_bullet(a: &ClVector, b: &ClVector) -> Complex64 {
    let space = a.space();
    (0..space.dim())
        .map(|k| a.coeffs()[k] * b.coeffs()[k] * f64::from(space.sign(k).unwrap()) * 2.0)
        .sum()
}

fn oracle_gram(vs: &[ClVector]) -> CMat {
    CMat::from_fn(vs.len(), vs.len(), |i, j| oracle_bullet(&vs[i], &vs[j].conj()))
}

fn with_spectrum(rng: &mut ChaCha8Rng, eigs: &[f64]) -> HermitianMatrix {
    let n = eigs.len();
    let u = random_unitary(rng, n);
    let d = CMat::from_fn(n, n, |i, j| if i == j { re(eigs[i]) } else { re(0.0) });
    HermitianMatrix::symmetrized(&(&u * d * u.adjoint()))
}

#[test]
fn generator_norms() {
    let space = GeneratorSpace::allocate(2, 2).unwrap();
    let g1 = ClVector::generator(&space, 0).unwrap();
    let g2 = ClVector::generator(&space, 1).unwrap();
    let h1 = ClVector::generator(&space, 2).unwrap();
    assert_eq!(bullet(&g1, &g1).unwrap(), re(2.0));
    assert_eq!(bullet(&g1, &g2).unwrap(), re(0.0));
    assert_eq!(bullet(&g1, &h1).unwrap(), re(0.0));
    assert_eq!(bullet(&h1, &h1).unwrap(), re(-2.0));
}

#[test]
fn allocation_errors() {
    assert!(matches!(GeneratorSpace::allocate(0, 0), Err(crate::Error::EmptySpace)));
    let space = GeneratorSpace::allocate(1, 0).unwrap();
    assert!(matches!(
        ClVector::generator(&space, 1),
        Err(crate::Error::IndexOutOfRange { index: 1, len: 1 })
    ));
}

#[test]
fn mismatched_spaces_are_rejected() {
    let a = GeneratorSpace::allocate(2, 2).unwrap();
    let b = GeneratorSpace::allocate(2, 3).unwrap();
    let u = ClVector::generator(&a, 0).unwrap();
    let v = ClVector::generator(&b, 0).unwrap();
    assert!(matches!(bullet(&u, &v), Err(crate::Error::SpaceMismatch)));
}

#[test]
fn blocks_are_disjoint() {
    let space = GeneratorSpace::with_blocks(&[("c", 2), ("d", 1)]).unwrap();
    let c = space.block("c").unwrap();
    let d = space.block("d").unwrap();
    assert_eq!(c.range(), 0..8);
    assert_eq!(d.range(), 8..12);
    assert_eq!(space.n_pos(), 6);
    assert_eq!(space.n_neg(), 6);
    assert!(space.block("h").is_err());
}

#[test]
fn diagonal_signs_resolve_to_basis_vectors() {
    let space = GeneratorSpace::allocate(4, 4).unwrap();
    let b = standard_basis(&space).unwrap();
    let h = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
    let r = resolve_hermitian(&h, &space).unwrap();
    assert_eq!(r.vectors[0], b.f[0]);
    assert_eq!(r.vectors[1], b.e[1]);
    assert_eq!(r.residual(), 0.0);
}

#[test]
fn zero_matrix_takes_the_null_branch() {
    let space = GeneratorSpace::allocate(2, 2).unwrap();
    let b = standard_basis(&space).unwrap();
    let r = resolve_hermitian(&HermitianMatrix::from_real_diagonal(&[0.0]), &space).unwrap();
    assert_eq!(r.vectors[0], &b.e[0] + &b.f[0]);
    assert_eq!(oracle_bullet(&r.vectors[0], &r.vectors[0].conj()), re(0.0));
}

#[test]
fn insufficient_space() {
    let space = GeneratorSpace::allocate(2, 2).unwrap();
    let h = HermitianMatrix::from_real_diagonal(&[1.0, 1.0]);
    assert!(matches!(
        resolve_hermitian(&h, &space),
        Err(crate::Error::InsufficientSpace { needed: 2, available: 1, .. })
    ));
}

#[test]
fn mixed_signature_with_zero_eigenvalue() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = with_spectrum(&mut rng, &[2.5, 0.7, -1.3, 0.0]);
    let space = GeneratorSpace::allocate(8, 8).unwrap();
    let r = resolve_hermitian(&h, &space).unwrap();
    assert!(max_abs(&(oracle_gram(&r.vectors) - h.matrix())) < 1e-10);
    assert!(r.isotropy_residual() < 1e-12);
}

#[test]
fn resolution_json_carries_residual() {
    let space = GeneratorSpace::allocate(4, 4).unwrap();
    let r = resolve_hermitian(&HermitianMatrix::from_real_diagonal(&[1.0, -2.0]), &space).unwrap();
    let json = serde_json::to_value(r.to_json()).unwrap();
    assert_eq!(json["n"], 2);
    assert_eq!(json["vectors"].as_array().unwrap().len(), 2);
    assert_eq!(json["vectors"][0]["re"].as_array().unwrap().len(), 8);
    assert!(json["max_residual"].as_f64().unwrap() < 1e-15);
}

fn timelike(rng: &mut ChaCha8Rng) -> HermitianMatrix {
    use rand::Rng;
    let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let t = 2.0 + rng.gen_range(0.0..1.0);
    let m = CMat::from_row_slice(
        2,
        2,
        &[c(t + v[2], 0.0), c(v[0], -v[1]), c(v[0], v[1]), c(t - v[2], 0.0)],
    );
    HermitianMatrix::new(m).unwrap()
}

#[test]
fn pair_with_vanishing_cross_term() {
    let space = particle_space();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = timelike(&mut rng);
    let p = timelike(&mut rng);
    let pair = resolve_pair(&x, &p, &CMat::zeros(2, 2), &space).unwrap();
    assert!(max_abs(&pair.cross()) < 1e-15);
    assert!(max_abs(&(pair.x_spinor() - x.matrix())) < 1e-10);
    assert!(max_abs(&(pair.p_spinor() - p.matrix())) < 1e-10);
}

#[test]
fn pair_with_noether_cross_term() {
    let space = particle_space();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pair = resolve_pair(&timelike(&mut rng), &timelike(&mut rng), &noether_cross(re(1.0)), &space)
        .unwrap();
    // d*_A∙c^B = μ δ_A^B
    for a in 0..2 {
        for b in 0..2 {
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((pair.dstar[a].dot(&pair.c[b]) - re(want)).norm() < 1e-14);
        }
    }
}

#[test]
fn pair_with_random_cross_term_keeps_same_kind_products_zero() {
    let space = particle_space();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let x = timelike(&mut rng);
        let p = timelike(&mut rng);
        let m = crate::linalg::random_matrix(&mut rng, 2, 2);
        let pair = resolve_pair(&x, &p, &m, &space).unwrap();
        let cs = pair.c.to_vec();
        let ds = pair.dstar.to_vec();
        assert!(max_abs(&(oracle_gram(&cs) - x.matrix())) < 1e-10);
        assert!(max_abs(&(oracle_gram(&ds) - p.matrix())) < 1e-10);
        for a in 0..2 {
            for b in 0..2 {
                assert!((oracle_bullet(&cs[a], &ds[b]) - m[(a, b)]).norm() < 1e-10);
                assert!(oracle_bullet(&cs[a], &cs[b]).norm() < 1e-12);
                assert!(oracle_bullet(&ds[a], &ds[b]).norm() < 1e-12);
                assert!(oracle_bullet(&cs[a], &ds[b].conj()).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn pair_requires_h_block() {
    let space = GeneratorSpace::with_blocks(&[("c", 2), ("d", 2)]).unwrap();
    let x = HermitianMatrix::from_real_diagonal(&[1.0, 1.0]);
    assert!(matches!(
        resolve_pair(&x, &x, &CMat::zeros(2, 2), &space),
        Err(crate::Error::MissingBlock(_))
    ));
}

fn cvec(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b)), dim)
}

proptest! {
    #[test]
    fn bullet_is_symmetric_bilinear_and_conjugation_compatible(
        u in cvec(6), v in cvec(6), w in cvec(6), alpha in (-3.0..3.0f64, -3.0..3.0f64)
    ) {
        let space = GeneratorSpace::allocate(3, 3).unwrap();
        let u = ClVector::from_coeffs(&space, u).unwrap();
        let v = ClVector::from_coeffs(&space, v).unwrap();
        let w = ClVector::from_coeffs(&space, w).unwrap();
        let alpha = c(alpha.0, alpha.1);
        prop_assert!((u.dot(&v) - v.dot(&u)).norm() < 1e-12);
        let lhs = (&u.scale(alpha) + &v).dot(&w);
        let rhs = alpha * u.dot(&w) + v.dot(&w);
        prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
        prop_assert_eq!(u.conj().conj(), u.clone());
        prop_assert!((u.conj().dot(&v.conj()) - u.dot(&v).conj()).norm() < 1e-12);
    }

    #[test]
    fn resolution_reproduces_random_hermitian(seed in 0u64..10_000, n in 1usize..=8, zeros in 0usize..3) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eigs: Vec<f64> = (0..n)
            .map(|k| if k < zeros.min(n) { 0.0 } else { rng.gen_range(-3.0..3.0) })
            .collect();
        let h = with_spectrum(&mut rng, &eigs);
        let space = GeneratorSpace::allocate(2 * n, 2 * n).unwrap();
        let r = resolve_hermitian(&h, &space).unwrap();
        prop_assert!(max_abs(&(oracle_gram(&r.vectors) - h.matrix())) < 1e-10);
        prop_assert!(r.isotropy_residual() < 1e-12);
    }
}
