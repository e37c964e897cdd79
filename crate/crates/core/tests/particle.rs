use cliffdyn::clifford::{noether_cross, particle_space, resolve_pair, ClVector, GeneratorSpace, HermitianMatrix};
use cliffdyn::linalg::{c, max_abs, random_matrix, re, CMat};
use cliffdyn::particle::*;
use cliffdyn::spinor::{lower_both, minkowski_dot, vec_to_spinor, FourVector};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn on_shell(mass: f64, v: [f64; 3]) -> FourVector {
    let e = (mass * mass + v.iter().map(|a| a * a).sum::<f64>()).sqrt();
    [e, v[0], v[1], v[2]]
}

fn state(x: FourVector, p: FourVector, m: &CMat, mass: f64, tau: f64) -> ParticleState {
    let xs = HermitianMatrix::new(vec_to_spinor(&x)).unwrap();
    let ps = HermitianMatrix::new(lower_both(&vec_to_spinor(&p))).unwrap();
    let pair = resolve_pair(&xs, &ps, m, &particle_space()).unwrap();
    ParticleState::from_pair(pair, tau, mass).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, mass: f64, mu: Complex64) -> ParticleState {
    let p = on_shell(mass, [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
    // time-like x keeps the Gram positive, which resolution does not need but is typical
    let x = [3.0 + rng.gen_range(0.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    state(x, p, &noether_cross(mu), mass, 0.0)
}

#[test]
fn state_reproduces_phase_space_point() {
    let p = on_shell(1.3, [0.2, -0.4, 0.1]);
    let x = [0.5, 1.0, -2.0, 0.25];
    let s = state(x, p, &noether_cross(re(0.7)), 1.3, 0.0);
    for k in 0..4 {
        assert!((s.x()[k] - x[k]).abs() < 1e-12);
        assert!((s.p()[k] - p[k]).abs() < 1e-12);
    }
    assert!((s.mu() - 0.7).abs() < 1e-14);
    assert!(s.noether_residual() < 1e-14);
}

#[test]
fn hamiltonian_values() {
    let mass = 1.5;
    let s = state([1.0, 0.0, 0.0, 0.0], on_shell(mass, [0.3, 0.0, 0.4]), &noether_cross(re(1.0)), mass, 0.0);
    assert!(hamiltonian_c5(&s, 2.0).abs() < 1e-12);
    let rest = state([1.0, 0.0, 0.0, 0.0], [2.0 * mass, 0.0, 0.0, 0.0], &noether_cross(re(1.0)), mass, 0.0);
    assert!((hamiltonian_c5(&rest, 1.0) - 3.0 * mass * mass).abs() < 1e-12);
    assert_eq!(hamiltonian_c5(&rest, 0.0), 0.0);
}

#[test]
fn free_flow_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s = random_state(&mut rng, 1.0, re(0.8));
    let d = canonical_rhs(&s, 0.6);
    assert!(d.ddstar.iter().all(|v| v.max_abs() == 0.0));
    let zero = canonical_rhs(&s, 0.0);
    assert!(zero.dc.iter().chain(&zero.ddstar).all(|v| v.max_abs() == 0.0));
}

/// d x^{AḂ}/dτ = ċ^A∙c*^Ḃ + c^A∙ċ*^Ḃ should equal 2μ ∂H/∂p_{AḂ}, i.e.
/// dx^μ/dτ = μ ∂H/∂p_μ = 2 e μ p^μ for the free Hamiltonian.
#[test]
fn velocity_is_proportional_to_momentum() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let mu = rng.gen_range(0.2..2.0);
        let e = rng.gen_range(0.2..2.0);
        let s = random_state(&mut rng, 1.1, re(mu));
        let d = canonical_rhs(&s, e);
        let xdot = CMat::from_fn(2, 2, |a, b| d.dc[a].dot(&s.c[b].conj()) + s.c[a].dot(&d.dc[b].conj()));
        let v = cliffdyn::spinor::spinor_to_vec(&xdot);
        let p = s.p();
        for k in 0..4 {
            assert!((v[k] - 2.0 * e * mu * p[k]).abs() < 1e-12, "{v:?} vs {p:?}");
        }
    }
}

#[test]
fn constant_einbein_trajectory() {
    let mass = 1.2;
    let e = EinbeinFn::constant(0.5, 0.0);
    let p = on_shell(mass, [0.3, -0.2, 0.5]);
    let mu0 = mu_of_tau(&e, mass, 1.0);
    let s0 = state([0.0, 0.1, 0.2, 0.3], p, &noether_cross(re(mu0)), mass, 1.0);
    let traj = integrate(&s0, &e, 6.0, 2000).unwrap();
    let first = &traj.states[0];
    for s in &traj.states {
        assert!(max_abs(&(s.p_spinor() - first.p_spinor())) < 1e-12);
    }
    let summary = summarize(&traj, &e, mass);
    assert!(summary.max_straight_line_error.unwrap() < 1e-8, "{summary:?}");
    assert!(summary.max_mu_error < 1e-8, "{summary:?}");
    assert!(summary.max_charge_drift < 1e-9, "{summary:?}");
    assert!(traj.turning_point.is_none());
}

#[test]
fn linear_einbein_long_run() {
    let mass = 0.9;
    let e = EinbeinFn { kind: Einbein::Linear { a: 0.3, b: 0.05 }, tau0: 0.0 };
    let p = on_shell(mass, [0.1, 0.7, -0.3]);
    let s0 = state([1.0, 0.0, 0.0, 0.0], p, &noether_cross(re(0.0)), mass, 0.0);
    let traj = integrate(&s0, &e, 10.0, 10_000).unwrap();
    let summary = summarize(&traj, &e, mass);
    assert!(summary.max_constraint_drift < 1e-8, "{summary:?}");
    assert!(summary.max_charge_drift < 1e-9, "{summary:?}");
    assert!(summary.max_mu_error < 1e-8, "{summary:?}");
    assert!(summary.max_straight_line_error.unwrap() < 1e-8, "{summary:?}");
    // a trajectory that begins at the turning point is still reparametrizable
    assert!(traj.proper_times().is_ok());
}

#[test]
fn reparametrized_equations_by_finite_differences() {
    let mass = 1.0;
    let e = EinbeinFn { kind: Einbein::Linear { a: 1.0, b: 0.2 }, tau0: -1.0 };
    let p = on_shell(mass, [0.4, 0.0, -0.6]);
    let s0 = state([0.0; 4], p, &noether_cross(re(mu_of_tau(&e, mass, 0.0))), mass, 0.0);
    let traj = integrate(&s0, &e, 4.0, 4000).unwrap();
    let tb = traj.proper_times().unwrap();
    let pts = &traj.points;
    let mut worst = 0.0_f64;
    for k in 1..pts.len() - 1 {
        for mu in 0..4 {
            let dx = (pts[k + 1].x[mu] - pts[k - 1].x[mu]) / (tb[k + 1] - tb[k - 1]);
            let pm = cliffdyn::spinor::METRIC[mu] * pts[k].p_lower[mu];
            worst = worst.max((dx - pm / mass).abs());
            let dp = (pts[k + 1].p_lower[mu] - pts[k - 1].p_lower[mu]) / (tb[k + 1] - tb[k - 1]);
            worst = worst.max(dp.abs());
        }
    }
    assert!(worst < 1e-7, "{worst}");
}

#[test]
fn crossing_the_turning_point_is_refused() {
    let mass = 1.0;
    let e = EinbeinFn::constant(1.0, 2.0);
    let p = on_shell(mass, [0.0, 0.0, 0.0]);
    let s0 = state([0.0; 4], p, &noether_cross(re(mu_of_tau(&e, mass, 0.0))), mass, 0.0);
    let traj = integrate(&s0, &e, 4.0, 400).unwrap();
    let tp = traj.turning_point.expect("sign change of mu");
    assert!((tp - 2.0).abs() < 1e-9);
    assert!(matches!(traj.proper_times(), Err(cliffdyn::Error::TurningPoint { .. })));
}

#[test]
fn noether_charges_for_constrained_and_generic_cross_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let s = random_state(&mut rng, 1.0, re(1.5));
    let ch = noether_charges(&s);
    assert!(max_abs(&ch.j_ab) < 1e-13);
    assert!(ch.j.abs() < 1e-13);

    // μ complex: j = −2 Im tr M = −4 Im μ
    let s = random_state(&mut rng, 1.0, c(0.5, 0.25));
    assert!((noether_charges(&s).j + 1.0).abs() < 1e-13);

    // oracle: J_AB straight from bullet products with c_1 = −c^2, c_2 = c^1
    let mut m = CMat::zeros(2, 2);
    m[(0, 1)] = re(0.6);
    let s = state([2.0, 0.0, 0.0, 0.0], on_shell(1.0, [0.0; 3]), &m, 1.0, 0.0);
    let c_low = [-&s.c[1], s.c[0].clone()];
    let oracle = CMat::from_fn(2, 2, |a, b| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, y) in [(a, b), (b, a)] {
            let u = &s.dstar[x];
            let v = &c_low[y];
            for k in 0..u.space().dim() {
                acc += u.coeffs()[k] * v.coeffs()[k] * 2.0 * f64::from(u.space().sign(k).unwrap());
            }
        }
        acc
    });
    let ch = noether_charges(&s);
    assert!(max_abs(&(&ch.j_ab - &oracle)) < 1e-13);
    // M_12 = c^1∙d*_2 = 0.6 enters only J_22 = 2 d*_2∙c^1
    assert!((ch.j_ab[(1, 1)] - re(1.2)).norm() < 1e-13);
    assert!(ch.j_ab[(0, 0)].norm() < 1e-13 && ch.j_ab[(0, 1)].norm() < 1e-13);
}

#[test]
fn charges_survive_generic_cross_terms_along_flow() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m = random_matrix(&mut rng, 2, 2);
    let s0 = state([1.0, 0.0, 0.5, 0.0], on_shell(1.0, [0.2, 0.1, 0.0]), &m, 1.0, 0.0);
    let traj = integrate(&s0, &EinbeinFn::constant(0.7, 0.0), 3.0, 3000).unwrap();
    let summary = summarize(&traj, &EinbeinFn::constant(0.7, 0.0), 1.0);
    assert!(summary.max_charge_drift < 1e-9, "{summary:?}");
}

#[test]
fn bracket_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let s = random_state(&mut rng, 1.0, re(1.0));
    let b = clifford_bracket(&Polynomial::x(0), &Polynomial::p_lower(0), &s);
    assert!((b - 1.0).abs() < 1e-12, "{b}");
    let n = Polynomial::random(&mut rng, 3, 3);
    assert!(clifford_bracket_c(&n, &n, &s).norm() < 1e-12);
}

#[test]
fn bracket_differs_from_poisson_without_constraint() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = random_matrix(&mut rng, 2, 2);
    let s = state([3.0, 0.1, 0.2, 0.0], on_shell(1.0, [0.3, 0.2, 0.1]), &m, 1.0, 0.0);
    let (x, p) = (s.x(), s.p());
    let mut worst = 0.0_f64;
    for mu in 0..4 {
        for nu in 0..4 {
            let (n, mm) = (Polynomial::x(mu), Polynomial::p_lower(nu));
            worst = worst.max((clifford_bracket(&n, &mm, &s) - s.mu() * poisson_bracket(&n, &mm, &x, &p)).abs());
        }
    }
    assert!(worst > 1e-3, "generic cross term should break the reduction, residual {worst}");
}

#[test]
fn bracket_reduces_to_poisson_for_many_observables() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let mu = rng.gen_range(-2.0..2.0);
        let mass = rng.gen_range(0.5..2.0);
        let s = random_state(&mut rng, mass, re(mu));
        let n = Polynomial::random(&mut rng, 4, 3);
        let m = Polynomial::random(&mut rng, 4, 3);
        let cb = clifford_bracket_c(&n, &m, &s);
        let pb = poisson_bracket(&n, &m, &s.x(), &s.p());
        assert!((cb - re(mu * pb)).norm() < 1e-9 * (1.0 + pb.abs()), "{cb} vs {}", mu * pb);
        let cb_swapped = clifford_bracket_c(&m, &n, &s);
        assert!((cb + cb_swapped).norm() < 1e-12 * (1.0 + cb.norm()));
    }
}

#[test]
fn interacting_hamiltonian_flow_matches_space_time_equations() {
    // H = e(p² − m²) + k x·x: dp_μ/dτ = −μ ∂H/∂x^μ with the Noether constraint
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let s = random_state(&mut rng, 1.0, re(0.9));
    let mut h = Polynomial::default();
    for mu in 0..4 {
        let mut pw = [0; 8];
        pw[4 + mu] = 2;
        h.terms.push(Monomial { coef: 0.5 * cliffdyn::spinor::METRIC[mu], powers: pw });
        let mut pw = [0; 8];
        pw[mu] = 2;
        h.terms.push(Monomial { coef: 0.3 * cliffdyn::spinor::METRIC[mu], powers: pw });
    }
    let d = flow(&s, &h);
    let pdot = CMat::from_fn(2, 2, |a, b| d.ddstar[a].dot(&s.dstar[b].conj()) + s.dstar[a].dot(&d.ddstar[b].conj()));
    let pdot_up = cliffdyn::spinor::spinor_to_vec(&cliffdyn::spinor::raise_both(&pdot));
    let x = s.x();
    let gx = h.grad_x(&x, &s.p());
    for k in 0..4 {
        // dp^μ/dτ = −μ η^{μμ} ∂H/∂x^μ
        let want = -0.9 * cliffdyn::spinor::METRIC[k] * gx[k];
        assert!((pdot_up[k] - want).abs() < 1e-12, "{k}: {} vs {want}", pdot_up[k]);
    }
}

fn unit_velocity(space: &std::sync::Arc<GeneratorSpace>, scale: f64) -> [ClVector; 2] {
    let b = cliffdyn::clifford::standard_basis_of(space, "c").unwrap();
    [b.f[0].scale(re(scale)), b.f[1].scale(re(scale))]
}

#[test]
fn quartic_root_action() {
    let space = particle_space();
    let m = 2.25;
    // V = identity gives ½VV = det V = 1
    let v = unit_velocity(&space, 1.0);
    assert!((lagrangian_c2(&v, m).unwrap() - 4.0 * 1.5).abs() < 1e-14);
    let v3 = unit_velocity(&space, 3.0);
    assert!((lagrangian_c2(&v3, m).unwrap() - 3.0 * lagrangian_c2(&v, m).unwrap()).abs() < 1e-12);
    let b = cliffdyn::clifford::standard_basis_of(&space, "c").unwrap();
    let spacelike = [b.f[0].clone(), b.e[1].clone()];
    assert!(lagrangian_c2(&spacelike, m).is_err());
    assert!((polyakov(&v, 1.0, m).unwrap() - (3.0 + m * m)).abs() < 1e-14);
}

#[test]
fn conjugate_momenta_are_on_shell() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let space = particle_space();
    for _ in 0..20 {
        let m = rng.gen_range(0.3..3.0);
        let vel = on_shell(rng.gen_range(0.5..2.0), [rng.gen_range(-1.0..1.0), 0.3, -0.2]);
        let h = HermitianMatrix::new(vec_to_spinor(&vel)).unwrap();
        let r = cliffdyn::clifford::resolve_hermitian_in(&h, &space, "c").unwrap();
        let cdot = [r.vectors[0].clone(), r.vectors[1].clone()];
        let d = momentum_from_velocity(&cdot, m).unwrap();
        let p_low = CMat::from_fn(2, 2, |a, b| d[a].dot(&d[b].conj()));
        let p = cliffdyn::spinor::spinor_to_vec(&cliffdyn::spinor::raise_both(&p_low));
        assert!((minkowski_dot(&p, &p) - m * m).abs() < 1e-10 * m * m);
        // and p^μ is parallel to the velocity four-vector
        let ratio = p[0] / vel[0];
        for k in 1..4 {
            assert!((p[k] - ratio * vel[k]).abs() < 1e-10);
        }
    }
}

#[test]
fn config_run_and_csv() {
    let cfg: ParticleConfig = serde_json::from_str(
        r#"{"mass": 1.0, "einbein": {"type": "const", "params": [0.5]}, "tau0": 0.0,
            "tau_end": 2.0, "steps": 200, "gram": {"x": [0,0,0,0], "p": [1.25, 0.75, 0, 0]}}"#,
    )
    .unwrap();
    let (traj, summary) = cfg.run().unwrap();
    assert_eq!(summary.steps, 200);
    assert!(summary.constraint_initial.abs() < 1e-12);
    let mut buf = Vec::new();
    traj.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 202);
    assert!(text.starts_with("tau,tau_bar,x0"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_antisymmetric_and_real(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = rng.gen_range(-1.0..1.0);
        let s = random_state(&mut rng, 1.0, re(mu));
        let n = Polynomial::random(&mut rng, 3, 3);
        let m = Polynomial::random(&mut rng, 3, 3);
        let ab = clifford_bracket_c(&n, &m, &s);
        let ba = clifford_bracket_c(&m, &n, &s);
        prop_assert!((ab + ba).norm() < 1e-11 * (1.0 + ab.norm()));
        prop_assert!(ab.im.abs() < 1e-11 * (1.0 + ab.norm()));
    }
}
