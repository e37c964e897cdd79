use cliffdyn::linalg::{c, max_abs, re};
use cliffdyn::spinor::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn real4() -> impl Strategy<Value = FourVector> {
    prop::array::uniform4(-10.0..10.0f64)
}

fn complex4() -> impl Strategy<Value = ComplexFourVector> {
    prop::array::uniform4((-10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b)| c(a, b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn roundtrip_and_hermiticity(v in real4()) {
        let s = vec_to_spinor(&v);
        prop_assert!(max_abs(&(&s - s.adjoint())) == 0.0);
        let back = spinor_to_vec(&s);
        for m in 0..4 {
            prop_assert!((back[m] - v[m]).abs() <= 1e-15 * (1.0 + v[m].abs()));
        }
    }

    #[test]
    fn determinant_is_the_minkowski_square(v in real4()) {
        let direct = v[0] * v[0] - v[1] * v[1] - v[2] * v[2] - v[3] * v[3];
        let scale = v.iter().map(|x| x * x).sum::<f64>().max(1.0);
        prop_assert!((minkowski_norm(&vec_to_spinor(&v)) - direct).abs() < 1e-12 * scale);
        prop_assert!((minkowski_dot(&v, &v) - direct).abs() < 1e-12 * scale);
    }

    #[test]
    fn contraction_identity_for_complex_vectors(v in complex4()) {
        prop_assert!(four_vector_identity_residual(&vec_to_spinor_c(&v)) < 1e-12);
        let back = spinor_to_vec_c(&vec_to_spinor_c(&v));
        for m in 0..4 {
            prop_assert!((back[m] - v[m]).norm() < 1e-13 * (1.0 + v[m].norm()));
        }
    }

    #[test]
    fn determinant_of_complex_vector(v in complex4()) {
        let d = det2(&vec_to_spinor_c(&v));
        let direct: Complex64 = v[0] * v[0] - v[1] * v[1] - v[2] * v[2] - v[3] * v[3];
        prop_assert!((d - direct).norm() < 1e-12 * (1.0 + direct.norm()));
    }
}

#[test]
fn sigma_matrices_are_a_basis() {
    // trace orthogonality: tr(σ_μ σ_ν) = 2δ
    for mu in 0..4 {
        for nu in 0..4 {
            let t = (sigma(mu) * sigma(nu)).trace();
            assert_eq!(t, re(if mu == nu { 2.0 } else { 0.0 }));
        }
    }
}
