use std::sync::Arc;

use cliffdyn::clifford::{noether_cross, particle_space, resolve_pair, HermitianMatrix};
use cliffdyn::linalg::{c, commutator, max_abs, random_hermitian, random_unitary, re, unitary_exp, CMat, I};
use cliffdyn::matrixmech::*;
use cliffdyn::particle::{integrate, EinbeinFn, ParticleState};
use cliffdyn::spinor::{lower_both, vec_to_spinor, FourVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MASS: f64 = 1.0;

fn on_shell(v: [f64; 3]) -> FourVector {
    let e = (MASS * MASS + v.iter().map(|a| a * a).sum::<f64>()).sqrt();
    [e, v[0], v[1], v[2]]
}

fn particle(x: FourVector, p: FourVector, mu: f64) -> ParticleState {
    let xs = HermitianMatrix::new(vec_to_spinor(&x)).unwrap();
    let ps = HermitianMatrix::new(lower_both(&vec_to_spinor(&p))).unwrap();
    ParticleState::from_pair(resolve_pair(&xs, &ps, &noether_cross(re(mu)), &particle_space()).unwrap(), 0.0, MASS)
        .unwrap()
}

fn three_particles(mu: f64) -> (Vec<ParticleState>, NSystem) {
    let ps = vec![
        particle([0.0, 0.0, 0.0, 0.0], on_shell([0.1, 0.0, 0.0]), mu),
        particle([1.0, 0.5, -0.5, 0.0], on_shell([0.0, 0.3, -0.2]), mu),
        particle([-2.0, 1.0, 1.0, 1.0], on_shell([-0.4, 0.1, 0.6]), mu),
    ];
    let sys = assemble(&ps).unwrap();
    (ps, sys)
}

fn is_diagonal(m: &CMat, tol: f64) -> bool {
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)].norm() <= tol))
}

#[test]
fn single_particle_restriction() {
    let p = particle([0.3, 0.1, 0.2, -0.1], on_shell([0.2, 0.2, 0.2]), 1.0);
    let sys = assemble(std::slice::from_ref(&p)).unwrap();
    let (x, pm) = (sys.x(), sys.p());
    for mu in 0..4 {
        assert!((x[mu][(0, 0)].re - p.x()[mu]).abs() < 1e-12);
        assert!((pm[mu][(0, 0)].re - p.p()[mu]).abs() < 1e-12);
    }
}

#[test]
fn assembled_matrices_are_diagonal_and_commute() {
    let (ps, sys) = three_particles(1.0);
    let (x, p) = (sys.x(), sys.p_lower());
    for mu in 0..4 {
        assert!(is_diagonal(&x[mu], 0.0) && is_diagonal(&p[mu], 0.0));
        for (i, part) in ps.iter().enumerate() {
            assert!((x[mu][(i, i)].re - part.x()[mu]).abs() < 1e-12);
        }
        for nu in 0..4 {
            assert_eq!(max_abs(&commutator(&x[mu], &x[nu])), 0.0);
            assert_eq!(max_abs(&commutator(&p[mu], &p[nu])), 0.0);
            assert_eq!(max_abs(&commutator(&x[mu], &p[nu])), 0.0);
        }
    }
    assert!(sys.constraint_residual() < 1e-14);
}

#[test]
fn overlapping_particles_in_one_space_are_rejected() {
    let a = particle([0.0; 4], on_shell([0.0; 3]), 1.0);
    let mut b = a.clone();
    b.tau = 1.0;
    assert!(matches!(assemble(&[a, b]), Err(cliffdyn::Error::OverlappingBlocks(0, 1))));
}

#[test]
fn gauge_transform_is_a_similarity() {
    let (_, sys) = three_particles(0.8);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = random_unitary(&mut rng, 3);
    let g = sys.gauge_transform(&u).unwrap();
    let (x, p, xg, pg) = (sys.x(), sys.p(), g.x(), g.p());
    for mu in 0..4 {
        assert!(max_abs(&(&xg[mu] - &u * &x[mu] * u.adjoint())) < 1e-11);
        assert!(max_abs(&(&pg[mu] - &u * &p[mu] * u.adjoint())) < 1e-11);
        assert!(cliffdyn::linalg::hermitian_deviation(&xg[mu]) < 1e-12);
    }
    assert!(g.constraint_residual() < 1e-11);
    assert!((g.mu() - 0.8).abs() < 1e-12);
    assert_eq!(sys.gauge_transform(&CMat::identity(3, 3)).unwrap(), sys);
    let mut bad = u.clone();
    bad[(0, 0)] += re(1e-6);
    assert!(matches!(sys.gauge_transform(&bad), Err(cliffdyn::Error::NotUnitary { .. })));
}

#[test]
fn charges_vanish_for_every_weight_matrix() {
    let (_, sys) = three_particles(1.3);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..5 {
        let phi = CMat::from_fn(3, 3, |i, j| if i == j { re(rng.gen_range(-2.0..2.0)) } else { re(0.0) });
        assert!(weight_matrix_residual(&phi, &sys.p_lower()) < 1e-13);
        let (j_ab, j) = sys.charges(&phi);
        assert!(max_abs(&j_ab) < 1e-12 && j.abs() < 1e-12);
        // weights transform along with the system
        let u = random_unitary(&mut rng, 3);
        let g = sys.gauge_transform(&u).unwrap();
        let (jg, _) = g.charges(&(&u * &phi * u.adjoint()));
        assert!(max_abs(&jg) < 1e-11);
    }
    // a non-diagonal Φ does not commute with diagonal P
    let phi = CMat::from_fn(3, 3, |i, j| if i + j == 1 { re(1.0) } else { re(0.0) });
    assert!(weight_matrix_residual(&phi, &sys.p_lower()) > 1e-3);
}

#[test]
fn classical_evolution_is_a_straight_line() {
    let (_, sys) = three_particles(0.9);
    let traj = evolve_matrix_classical(&sys, 3.0, 600, 50).unwrap();
    let (x0, p0) = (sys.x(), sys.p());
    for (t, s) in traj.tau_bar.iter().zip(&traj.systems) {
        let x = s.x();
        for mu in 0..4 {
            assert!(max_abs(&(&x[mu] - &x0[mu] - &p0[mu] * re(t / MASS))) < 1e-9);
            assert!(max_abs(&(&s.p()[mu] - &p0[mu])) < 1e-13);
        }
        assert!(s.constraint_residual() < 1e-9);
    }
}

#[test]
fn eigenvalues_follow_single_particle_trajectories() {
    // μ = 1 at τ = 0 means a turning point at τ0 = −1 for e = 1, m = 1
    let (ps, sys) = three_particles(1.0);
    let e = EinbeinFn::constant(1.0, -1.0);
    let traj = evolve_matrix_classical(&sys, 2.0, 400, 400).unwrap();
    let last = traj.systems.last().unwrap();
    let tb_end = *traj.tau_bar.last().unwrap();
    let x = last.x();
    for (i, p0) in ps.iter().enumerate() {
        let single = integrate(p0, &e, 4.0, 4000).unwrap();
        let k = single.points.iter().position(|pt| pt.tau_bar >= tb_end).unwrap();
        let (a, b) = (&single.points[k - 1], &single.points[k]);
        let w = (tb_end - a.tau_bar) / (b.tau_bar - a.tau_bar);
        for mu in 0..4 {
            let want = a.x[mu] + w * (b.x[mu] - a.x[mu]);
            // linear interpolation between steps of a straight line is exact
            assert!((x[mu][(i, i)].re - want).abs() < 1e-8, "particle {i}, mu {mu}");
        }
    }
    let ev = traj.eigenvalues().unwrap();
    let mut diag: Vec<f64> = (0..3).map(|i| x[0][(i, i)].re).collect();
    diag.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for (a, b) in diag.iter().zip(&ev.last().unwrap()[0]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn evolution_commutes_with_global_gauge() {
    let (_, sys) = three_particles(1.1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = random_unitary(&mut rng, 3);
    let a = evolve_matrix_classical(&sys.gauge_transform(&u).unwrap(), 2.0, 200, 200).unwrap();
    let b = evolve_matrix_classical(&sys, 2.0, 200, 200).unwrap();
    let ga = a.systems.last().unwrap();
    let gb = b.systems.last().unwrap().gauge_transform(&u).unwrap();
    for k in 0..2 {
        for i in 0..3 {
            assert!((&ga.kets[k][i] - &gb.kets[k][i]).max_abs() < 1e-10);
            assert!((&ga.bras[k][i] - &gb.bras[k][i]).max_abs() < 1e-10);
        }
    }
}

#[test]
fn classical_state_vector_stays_on_one_integral_curve() {
    let (_, sys) = three_particles(1.0);
    let traj = evolve_matrix_classical(&sys, 1.5, 300, 30).unwrap();
    let s = StateVector::basis(3, 1);
    let h = CMat::zeros(3, 3);
    let s_t = evolve_state(&s, &Connection::Zero, &h, 1.0, 1.5, 10).unwrap();
    assert_eq!(s_t, s);
    for snap in &traj.systems {
        for a in 0..2 {
            let e = s_t.expectation_ket(&snap.kets[a]);
            assert!((&e - &snap.kets[a][1]).max_abs() == 0.0);
        }
    }
    let half = StateVector::normalized(cliffdyn::matrixmech::CVec::from_vec(vec![re(1.0), re(1.0), re(0.0)])).unwrap();
    let x = sys.x();
    let want = 0.5 * (x[1][(0, 0)].re + x[1][(1, 1)].re);
    assert!((half.expectation(&x[1]).re - want).abs() < 1e-14);
}

#[test]
fn truncated_oscillator_commutator() {
    let hbar = 0.7;
    let (x, p) = truncated_oscillator(20, 1.3, 0.9, hbar);
    let d = commutator(&x, &p) - CMat::identity(20, 20) * (I * hbar);
    for i in 0..20 {
        for j in 0..20 {
            if i == 19 && j == 19 {
                // trace of a commutator vanishes, so the corner carries −20 iħ + iħ
                assert!((d[(i, j)] - I * (-20.0 * hbar)).norm() < 1e-12);
            } else {
                assert!(d[(i, j)].norm() < 1e-12, "({i},{j})");
            }
        }
    }
    assert!(ccr_defect(&x, &p, hbar, 19) < 1e-12);
}

#[test]
fn heisenberg_free_and_oscillator_flows() {
    let hbar = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let x0: Vec<CMat> = (0..4).map(|_| random_hermitian(&mut rng, 5)).collect();
    let p0: Vec<CMat> = vec![CMat::identity(5, 5) * re(1.5), CMat::zeros(5, 5), CMat::zeros(5, 5), CMat::zeros(5, 5)];
    let h = FreeMatrixHamiltonian { mass: 1.5 };
    let t = evolve_heisenberg(&x0, &p0, &h, hbar, 2.0, 200, 200).unwrap();
    for mu in 0..4 {
        assert_eq!(t.last_p()[mu], p0[mu]);
    }

    let (x, p) = truncated_oscillator(20, 1.0, 1.0, hbar);
    let osc = Oscillator1D { mass: 1.0, omega: 1.0 };
    let c0 = commutator(&x, &p);
    let t = evolve_heisenberg(&[x], &[p], &osc, hbar, 3.0, 10_000, 1000).unwrap();
    for (xk, pk) in t.x.iter().zip(&t.p) {
        assert!(max_abs(&(commutator(&xk[0], &pk[0]) - &c0)) < 1e-9);
        assert!(cliffdyn::linalg::hermitian_deviation(&xk[0]) < 1e-10);
    }
}

#[test]
fn schrodinger_gauge_freezes_matrices() {
    let hbar = 1.0;
    let (x, p) = truncated_oscillator(20, 1.0, 1.0, hbar);
    let osc = Oscillator1D { mass: 1.0, omega: 1.0 };
    let t = covariant_evolve(std::slice::from_ref(&x), std::slice::from_ref(&p), &osc, &Connection::Schrodinger, hbar, 5.0, 1000, 1000).unwrap();
    assert!(max_abs(&(&t.last_x()[0] - &x)) < 1e-9);
    assert!(max_abs(&(&t.last_p()[0] - &p)) < 1e-9);

    let zero = covariant_evolve(std::slice::from_ref(&x), std::slice::from_ref(&p), &osc, &Connection::Zero, hbar, 1.0, 100, 100).unwrap();
    let heis = evolve_heisenberg(&[x], &[p], &osc, hbar, 1.0, 100, 100).unwrap();
    assert_eq!(zero.last_x(), heis.last_x());
}

#[test]
fn pictures_agree_on_expectations() {
    let hbar = 1.0;
    let n = 20;
    let (x, p) = truncated_oscillator(n, 1.0, 1.0, hbar);
    let osc = Oscillator1D { mass: 1.0, omega: 1.0 };
    let hm = osc.h(std::slice::from_ref(&x), std::slice::from_ref(&p));
    let mut amps = cliffdyn::matrixmech::CVec::zeros(n);
    amps[0] = re(1.0);
    amps[1] = c(0.5, 0.5);
    amps[3] = re(-0.3);
    let s0 = StateVector::normalized(amps).unwrap();
    let heis = evolve_heisenberg(std::slice::from_ref(&x), std::slice::from_ref(&p), &osc, hbar, 2.0, 2000, 100).unwrap();
    let mut s = s0.clone();
    let mut prev = 0.0;
    for (k, t) in heis.tau.iter().enumerate() {
        if k > 0 {
            s = evolve_state(&s, &Connection::Schrodinger, &hm, hbar, t - prev, 100).unwrap();
        }
        prev = *t;
        let hx = s0.expectation(&interior(&heis.x[k][0], n - 4).resize(n, n, re(0.0)));
        let sx = s.expectation(&interior(&x, n - 4).resize(n, n, re(0.0)));
        assert!((hx - sx).norm() < 1e-8 || k == 0, "{t}: {hx} vs {sx}");
        assert!((s0.expectation(&heis.x[k][0]) - s.expectation(&x)).norm() < 1e-8);
        assert!((s0.expectation(&heis.p[k][0]) - s.expectation(&p)).norm() < 1e-8);
    }
    assert!((s.norm() - 1.0).abs() < 1e-10);
}

#[test]
fn state_norm_over_many_steps() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = random_hermitian(&mut rng, 6);
    let s = StateVector::normalized(cliffdyn::matrixmech::CVec::from_fn(6, |i, _| c(i as f64, 1.0))).unwrap();
    let out = evolve_state(&s, &Connection::Constant(g.clone()), &g, 1.0, 10.0, 10_000).unwrap();
    assert!((out.norm() - 1.0).abs() < 1e-10);
    let exact = unitary_exp(&g, 10.0) * s.amps();
    assert!((out.amps() - exact).norm() < 1e-9);
}

#[test]
fn connection_transformation_law() {
    let hbar = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let n = 4;
    let x0 = vec![random_hermitian(&mut rng, n)];
    let p0 = vec![random_hermitian(&mut rng, n)];
    let osc = Oscillator1D { mass: 1.0, omega: 0.7 };
    let gamma = Connection::Constant(random_hermitian(&mut rng, n));
    let k = random_hermitian(&mut rng, n);
    let u0 = random_unitary(&mut rng, n);
    let u: Arc<dyn Fn(f64) -> CMat + Send + Sync> = Arc::new(move |t| unitary_exp(&k, t) * &u0);
    let gamma_u = gamma.transformed(u.clone()).unwrap();
    let a = covariant_evolve(&x0, &p0, &osc, &gamma, hbar, 1.0, 1000, 100).unwrap();
    let ux0 = vec![u(0.0) * &x0[0] * u(0.0).adjoint()];
    let up0 = vec![u(0.0) * &p0[0] * u(0.0).adjoint()];
    let b = covariant_evolve(&ux0, &up0, &osc, &gamma_u, hbar, 1.0, 1000, 100).unwrap();
    for (i, t) in a.tau.iter().enumerate() {
        let ut = u(*t);
        let want = &ut * &a.x[i][0] * ut.adjoint();
        assert!(max_abs(&(&b.x[i][0] - &want)) < 1e-9, "{t}");
    }
    assert!(Connection::Schrodinger.transformed(u).is_err());
}

#[test]
fn quantum_flow_is_unitarily_covariant() {
    let hbar = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (x, p) = truncated_oscillator(8, 1.0, 1.2, hbar);
    let osc = Oscillator1D { mass: 1.0, omega: 1.2 };
    let u = random_unitary(&mut rng, 8);
    let a = evolve_heisenberg(std::slice::from_ref(&x), std::slice::from_ref(&p), &osc, hbar, 1.0, 500, 500).unwrap();
    let b = evolve_heisenberg(&[&u * &x * u.adjoint()], &[&u * &p * u.adjoint()], &osc, hbar, 1.0, 500, 500).unwrap();
    assert!(max_abs(&(&b.last_x()[0] - &u * &a.last_x()[0] * u.adjoint())) < 1e-10);
}

#[test]
fn born_rule_utilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x = CMat::from_diagonal(&cliffdyn::matrixmech::CVec::from_vec(vec![re(3.0), re(1.0), re(-2.0)]));
    let s = StateVector::normalized(cliffdyn::matrixmech::CVec::from_vec(vec![re(1.0), re(0.0), re(1.0)])).unwrap();
    let (vals, probs) = born_probabilities(&s, &x).unwrap();
    assert_eq!(vals, vec![3.0, 1.0, -2.0]);
    assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    assert!((probs[0] - 0.5).abs() < 1e-14 && probs[1] < 1e-14);
    for _ in 0..50 {
        let (i, v) = born_sample(&s, &x, &mut rng).unwrap();
        assert!(i != 1 && v == vals[i]);
    }
    assert!(StateVector::new(cliffdyn::matrixmech::CVec::from_vec(vec![re(1.0), re(1.0)])).is_err());
}

#[test]
fn slow_particles_have_unit_time_rate() {
    for v in [1e-3, 1e-2, 0.1] {
        let p = on_shell([v, 0.0, 0.0]);
        let rate = proper_time_rate(&p, MASS);
        assert!((rate - 1.0).abs() <= v * v / (MASS * MASS));
    }
}

#[test]
fn config_runs() {
    let cfg: MatrixConfig = serde_json::from_str(
        r#"{"mass": 1.0, "particles": [{"x": [0,0,0,0], "p": [1.25, 0.75, 0, 0]},
            {"x": [1,0,0,0], "p": [1, 0, 0, 0]}], "gauge_seed": 3, "tau_end": 1.0, "steps": 100, "record_every": 10}"#,
    )
    .unwrap();
    let (report, csv) = cfg.run().unwrap();
    assert!(report.max_straight_line_error.unwrap() < 1e-9);
    assert_eq!(csv.lines().count(), 12);

    let cfg: MatrixConfig = serde_json::from_str(
        r#"{"mass": 1.0, "hbar": 1.0, "oscillator": {"levels": 12, "omega": 1.0}, "picture": "schrodinger",
            "tau_end": 1.0, "steps": 200, "record_every": 20}"#,
    )
    .unwrap();
    let (report, csv) = cfg.run().unwrap();
    assert!(report.norm_drift.unwrap() < 1e-10);
    assert!(report.max_ccr_interior_defect.unwrap() < 1e-12);
    assert!(csv.starts_with("tau,E_X,E_P"));
}
