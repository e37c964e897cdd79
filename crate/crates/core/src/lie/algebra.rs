use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::presentation::LiePresentation;
use super::sample::{CurrentSample, LocalGradient, SYM_PAIRS};
use crate::linalg::{c, lstsq, re, CMat};
use crate::spinor::{epsilon, raise_both, spinor_to_vec_c, METRIC};
use crate::{Error, Result};

pub const J_LABELS: [&str; 6] = ["J11", "J12", "J22", "J11*", "J12*", "J22*"];

/// Jacobi residual above which an assembled algebra is rejected.
pub const JACOBI_LIMIT: f64 = 1e-9;

/// Structure constants of the total `SL(2,ℂ)` charges and their conjugates.
#[derive(Debug, Clone)]
pub struct ChargeAlgebra {
    /// `{j^tot_a, j^tot_b} = Σ_c f_abc j^tot_c`
    pub classical: LiePresentation,
    /// `[J_a, J_b] = iħ f_abc J_c` with `ħ = 1`.
    pub quantum: LiePresentation,
    pub fit_residual: f64,
    /// Largest fitted coefficient of `c^A∙d*_A`, which must not appear.
    pub nu_coefficient: f64,
    /// `max |{j_AB, j̄_ĖḞ}|` over nodes.
    pub mixed_max: f64,
    /// `max |{j^tot_a, j^tot_b} − Σ_c f_abc j^tot_c|` with the integrated bracket.
    pub integrated_residual: f64,
}

/// Fits `y_k ≈ Σ_i β_i x_i(k)` over all nodes; returns `β` and `max |y − Xβ|`.
fn fit(x: &CMat, y: &CMat) -> Result<(Vec<Complex64>, f64)> {
    let (beta, rank) = lstsq(x, y, 1e-12);
    if rank < x.ncols() {
        return Err(Error::RankDeficient { rank, needed: x.ncols() });
    }
    let res = x * &beta - y;
    Ok((beta.iter().copied().collect(), crate::linalg::max_abs(&res)))
}

fn fit_block<G>(sample: &CurrentSample, conjugate: bool, grad: G) -> Result<([[Vec<Complex64>; 3]; 3], f64, f64)>
where
    G: Fn(usize, usize, usize) -> LocalGradient,
{
    let n = sample.len();
    let pick = |z: Complex64| if conjugate { z.conj() } else { z };
    let x = CMat::from_fn(n, 4, |k, i| pick(if i < 3 { sample.j[k][i] } else { sample.nu(k) }));
    let mut out: [[Vec<Complex64>; 3]; 3] = Default::default();
    let (mut worst, mut nu): (f64, f64) = (0.0, 0.0);
    for (a, &(a0, a1)) in SYM_PAIRS.iter().enumerate() {
        for (b, &(b0, b1)) in SYM_PAIRS.iter().enumerate() {
            let y = CMat::from_fn(n, 1, |k, _| {
                super::sample::local_bracket(&grad(k, a0, a1), &grad(k, b0, b1))
            });
            let (beta, res) = fit(&x, &y)?;
            worst = worst.max(res);
            nu = nu.max(beta[3].norm());
            out[a][b] = beta[..3].to_vec();
        }
    }
    Ok((out, worst, nu))
}

/// Reads the structure constants of the total charges off the pointwise
/// brackets, fitting each against `j_11, j_12, j_22` and `c^A∙d*_A`. The sample
/// must vary enough along the curve to separate the four functions.
pub fn charge_algebra(sample: &CurrentSample) -> Result<ChargeAlgebra> {
    let (jj, res_j, nu_j) = fit_block(sample, false, |k, a, b| sample.j_gradient(k, a, b))?;
    let (bb, res_b, nu_b) = fit_block(sample, true, |k, a, b| sample.jbar_gradient(k, a, b))?;
    let mut classical = LiePresentation::zeros(J_LABELS);
    for a in 0..3 {
        for b in 0..3 {
            for cc in 0..3 {
                classical.set(a, b, cc, jj[a][b][cc]);
                classical.set(a + 3, b + 3, cc + 3, bb[a][b][cc]);
            }
        }
    }
    let mut mixed_max: f64 = 0.0;
    for k in 0..sample.len() {
        for &ab in &SYM_PAIRS {
            for &ef in &SYM_PAIRS {
                mixed_max = mixed_max.max(sample.mixed_bracket(ab, ef, k, k).norm());
            }
        }
    }
    let tot = sample.total_j();
    let mut integrated: f64 = 0.0;
    for (a, &(a0, a1)) in SYM_PAIRS.iter().enumerate() {
        for (b, &(b0, b1)) in SYM_PAIRS.iter().enumerate() {
            let got = sample.total_bracket(|k| sample.j_gradient(k, a0, a1), |k| sample.j_gradient(k, b0, b1));
            let want: Complex64 = (0..3).map(|cc| classical.get(a, b, cc) * tot[cc]).sum();
            integrated = integrated.max((got - want).norm());
        }
    }
    let quantum = classical.scaled(c(0.0, 1.0));
    let jac = quantum.jacobi_residual();
    if jac > JACOBI_LIMIT {
        return Err(Error::Residual { what: "Jacobi identity of the charge algebra".into(), residual: jac, tolerance: JACOBI_LIMIT });
    }
    Ok(ChargeAlgebra {
        classical,
        quantum,
        fit_residual: res_j.max(res_b),
        nu_coefficient: nu_j.max(nu_b),
        mixed_max,
        integrated_residual: integrated,
    })
}

/// `N_1 = (i/4)(J_22 − J_11)`, `N_2 = −¼(J_11 + J_22)`, `N_3 = −(i/2) J_12` as rows over `J_11, J_12, J_22`.
pub fn n_matrix() -> CMat {
    let z = re(0.0);
    CMat::from_row_slice(3, 3, &[c(0.0, -0.25), z, c(0.0, 0.25), re(-0.25), z, re(-0.25), z, c(0.0, -0.5), z])
}

/// `[e_i, e_j] = ε_ijk e_k`
pub fn levi_civita_presentation() -> LiePresentation {
    let mut p = LiePresentation::zeros(["e1", "e2", "e3"]);
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        p.set(i, j, k, re(1.0));
        p.set(j, i, k, re(-1.0));
    }
    p
}

/// The two commuting `su(2)` pieces spanned by `N_k` and `N_k†`.
#[derive(Debug, Clone)]
pub struct NkDecomposition {
    pub n: LiePresentation,
    pub n_dagger: LiePresentation,
    /// `κ` in `[N_i, N_j] = κ ε_ijk N_k`, and its counterpart for `N†`.
    pub scale: Complex64,
    pub scale_dagger: Complex64,
    pub su2_residual: f64,
    /// Largest coefficient of `N†` in `[N, N]` or of anything in `[N, N†]`.
    pub cross_residual: f64,
    /// Largest symmetric coefficient in `[N∙N, N_j]`.
    pub casimir_residual: f64,
}

fn casimir_residual(p: &LiePresentation) -> f64 {
    // [N∙N, N_j] = Σ_kl f_kjl (N_k N_l + N_l N_k); only the part symmetric in (k, l) survives
    let mut worst: f64 = 0.0;
    for j in 0..3 {
        for k in 0..3 {
            for l in 0..3 {
                worst = worst.max((p.get(k, j, l) + p.get(l, j, k)).norm());
            }
        }
    }
    worst
}

pub fn nk_decomposition(charges: &LiePresentation) -> Result<NkDecomposition> {
    let t = n_matrix();
    let mut full = CMat::zeros(6, 6);
    full.view_mut((0, 0), (3, 3)).copy_from(&t);
    full.view_mut((3, 3), (3, 3)).copy_from(&t.map(|z| z.conj()));
    let nb = charges.change_basis(&full, ["N1", "N2", "N3", "N1+", "N2+", "N3+"])?;
    let (n, leak_a) = nb.restrict(&[0, 1, 2]);
    let (n_dagger, leak_b) = nb.restrict(&[3, 4, 5]);
    let mut cross: f64 = leak_a.max(leak_b);
    for i in 0..3 {
        for j in 3..6 {
            cross = cross.max(nb.bracket(i, j).iter().fold(0.0, |m, v| m.max(v.norm())));
        }
    }
    let lc = levi_civita_presentation();
    let (scale, ra) = n.fit_scale(&lc)?;
    let (scale_dagger, rb) = n_dagger.fit_scale(&lc)?;
    Ok(NkDecomposition {
        casimir_residual: casimir_residual(&n).max(casimir_residual(&n_dagger)),
        n,
        n_dagger,
        scale,
        scale_dagger,
        su2_residual: ra.max(rb),
        cross_residual: cross,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareReport {
    /// `s` in `{p_EḞ, j_AB} = s(ε_EA p_BḞ + ε_EB p_AḞ)` fitted pointwise.
    pub pj_sign: [f64; 2],
    pub pj_sign_dagger: [f64; 2],
    pub pj_fit_residual: f64,
    pub pp_max: f64,
    /// `α` in `[X_a, X_b] ≈ α c_abc X_c` against the matrix representation.
    pub alpha: [f64; 2],
    pub residual: f64,
    pub jacobi_residual: f64,
    /// The same comparison with `s = s̄ = +1`.
    pub opposite_sign_residual: f64,
    pub opposite_sign_jacobi: f64,
}

pub const POINCARE_LABELS: [&str; 10] = ["M01", "M02", "M03", "M12", "M13", "M23", "P0", "P1", "P2", "P3"];

/// Translations and Lorentz generators of the affine action on `ℝ⁴`,
/// `(L_μν)^ρ_σ = δ^ρ_μ η_νσ − δ^ρ_ν η_μσ`, `(T_μ)^ρ_4 = η_μρ`.
pub fn poincare_matrices() -> Vec<CMat> {
    let mut out = Vec::with_capacity(10);
    for (mu, nu) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
        let mut l = CMat::zeros(5, 5);
        for s in 0..4 {
            if s == nu {
                l[(mu, s)] += re(METRIC[nu]);
            }
            if s == mu {
                l[(nu, s)] -= re(METRIC[mu]);
            }
        }
        out.push(l);
    }
    for mu in 0..4 {
        let mut t = CMat::zeros(5, 5);
        t[(mu, 4)] = re(METRIC[mu]);
        out.push(t);
    }
    out
}

/// Structure constants of a matrix basis, decomposing each commutator by least squares.
pub fn matrix_presentation<S: Into<String>>(basis: &[CMat], labels: impl IntoIterator<Item = S>) -> Result<LiePresentation> {
    let n = basis.len();
    let len = basis[0].len();
    let cols = CMat::from_fn(len, n, |r, k| basis[k][r]);
    let mut p = LiePresentation::zeros(labels);
    for a in 0..n {
        for b in 0..n {
            let comm = crate::linalg::commutator(&basis[a], &basis[b]);
            let y = CMat::from_column_slice(len, 1, comm.as_slice());
            let (beta, res) = fit(&cols, &y)?;
            if res > 1e-12 {
                return Err(Error::Residual { what: "matrix basis is not closed".into(), residual: res, tolerance: 1e-12 });
            }
            for (k, v) in beta.into_iter().enumerate() {
                p.set(a, b, k, v);
            }
        }
    }
    Ok(p)
}

fn p_index(e: usize, f: usize) -> usize {
    6 + 2 * e + f
}

/// Fits the sign of the momentum-charge brackets, assembles the ten-generator
/// algebra of `J`, `J†` and `P_{AḂ}`, rewrites it through `M_μν` and `P_μ`,
/// and compares it with the matrix representation.
pub fn poincare_check(sample: &CurrentSample, charges: &ChargeAlgebra) -> Result<PoincareReport> {
    let tot = sample.total_dstar();
    let eps = epsilon();
    let n = sample.len();
    // pointwise fit of {p_EF, j_AB} and {p_EF, j̄_AB} against their patterns
    let mut ys = Vec::new();
    let mut xs = Vec::new();
    let mut ys_bar = Vec::new();
    let mut xs_bar = Vec::new();
    let mut pp_max: f64 = 0.0;
    for k in 0..n {
        let d = &sample.dstar[k];
        let pi = |x: usize, y: usize| d[x].dot(&tot[y].conj());
        let pi_bar = |x: usize, y: usize| tot[x].dot(&d[y].conj());
        for e in 0..2 {
            for f in 0..2 {
                let pg = sample.p_gradient(&tot, e, f);
                for &(a, b) in &SYM_PAIRS {
                    ys.push(super::sample::local_bracket(&pg, &sample.j_gradient(k, a, b)));
                    xs.push(eps[(e, a)] * pi(b, f) + eps[(e, b)] * pi(a, f));
                    ys_bar.push(super::sample::local_bracket(&pg, &sample.jbar_gradient(k, a, b)));
                    xs_bar.push(eps[(f, a)] * pi_bar(e, b) + eps[(f, b)] * pi_bar(e, a));
                }
                for g in 0..2 {
                    for h in 0..2 {
                        let other = sample.p_gradient(&tot, g, h);
                        pp_max = pp_max.max(super::sample::local_bracket(&pg, &other).norm());
                    }
                }
            }
        }
    }
    let col = |v: &[Complex64]| CMat::from_column_slice(v.len(), 1, v);
    let (s, r1) = fit(&col(&xs), &col(&ys))?;
    let (sb, r2) = fit(&col(&xs_bar), &col(&ys_bar))?;
    let (s, sb) = (s[0], sb[0]);

    let full = assemble_poincare(charges, s, sb);
    let jacobi_residual = full.jacobi_residual();
    let opposite = assemble_poincare(charges, re(1.0), re(1.0));

    let t = poincare_basis();
    let mp = full.change_basis(&t, POINCARE_LABELS)?;
    let oracle = matrix_presentation(&poincare_matrices(), POINCARE_LABELS)?;
    let (alpha, residual) = mp.fit_scale(&oracle)?;
    let (_, opposite_residual) = opposite.change_basis(&t, POINCARE_LABELS)?.fit_scale(&oracle)?;
    Ok(PoincareReport {
        pj_sign: [s.re, s.im],
        pj_sign_dagger: [sb.re, sb.im],
        pj_fit_residual: r1.max(r2),
        pp_max,
        alpha: [alpha.re, alpha.im],
        residual,
        jacobi_residual,
        opposite_sign_residual: opposite_residual,
        opposite_sign_jacobi: opposite.jacobi_residual(),
    })
}

/// The ten-generator algebra of `J_AB`, `J†_ĖḞ` and `P_{AḂ}` (`ħ = 1`) with
/// `[P_EḞ, J_AB] = i s (ε_EA P_BḞ + ε_EB P_AḞ)` and the conjugate relation with `s̄`.
pub fn assemble_poincare(charges: &ChargeAlgebra, s: Complex64, sb: Complex64) -> LiePresentation {
    let eps = epsilon();
    let i = c(0.0, 1.0);
    let mut full = LiePresentation::zeros(["J11", "J12", "J22", "J11*", "J12*", "J22*", "P11", "P12", "P21", "P22"]);
    for a in 0..6 {
        for b in 0..6 {
            for cc in 0..6 {
                full.set(a, b, cc, charges.quantum.get(a, b, cc));
            }
        }
    }
    for e in 0..2 {
        for f in 0..2 {
            for (ji, &(a, b)) in SYM_PAIRS.iter().enumerate() {
                let mut v = vec![re(0.0); 10];
                v[p_index(b, f)] += i * s * eps[(e, a)];
                v[p_index(a, f)] += i * s * eps[(e, b)];
                full.set_bracket(p_index(e, f), ji, &v);
                let mut w = vec![re(0.0); 10];
                w[p_index(e, b)] += i * sb * eps[(f, a)];
                w[p_index(e, a)] += i * sb * eps[(f, b)];
                full.set_bracket(p_index(e, f), ji + 3, &w);
            }
        }
    }
    full
}

/// Rows expressing `M_01..M_23, P_0..P_3` over `J, J†, P_{AḂ}`:
/// `M_ij = ε_ijk (N_k + N_k†)`, `M_0k = −i(N_k − N_k†)`, `P_μ = η_μν P^ν`.
/// The frame singled out by the `N_k` has its third axis reversed relative to
/// the σ-matrix dictionary, so `P_3` is taken with the opposite sign.
pub fn poincare_basis() -> CMat {
    let t = n_matrix();
    let i = c(0.0, 1.0);
    let mut out = CMat::zeros(10, 10);
    let mut put = |row: usize, k: usize, wn: Complex64, wd: Complex64| {
        for a in 0..3 {
            out[(row, a)] += wn * t[(k, a)];
            out[(row, a + 3)] += wd * t[(k, a)].conj();
        }
    };
    for k in 0..3 {
        put(k, k, -i, i);
    }
    put(3, 2, re(1.0), re(1.0));
    put(4, 1, re(-1.0), re(-1.0));
    put(5, 0, re(1.0), re(1.0));
    for e in 0..2 {
        for f in 0..2 {
            let mut unit = CMat::zeros(2, 2);
            unit[(e, f)] = re(1.0);
            let v = spinor_to_vec_c(&raise_both(&unit));
            for mu in 0..4 {
                let flip = if mu == 3 { -1.0 } else { 1.0 };
                out[(6 + mu, p_index(e, f))] = v[mu] * METRIC[mu] * flip;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryReport {
    /// `max |{I(u_k), I(u_k)}|`
    pub ii_max: f64,
    /// `max |{I(u_k), j_AB(u_k)}|` and the same with `j̄`.
    pub ij_max: f64,
    /// `∫ du I`
    pub total: f64,
}

pub fn unitary_current_check(sample: &CurrentSample) -> UnitaryReport {
    let mut ii: f64 = 0.0;
    let mut ij: f64 = 0.0;
    for k in 0..sample.len() {
        let g = sample.unitary_gradient(k);
        let w = sample.nodes[k].weight;
        ii = ii.max(super::sample::local_bracket(&g, &g).norm() / w);
        for &(a, b) in &SYM_PAIRS {
            ij = ij.max(super::sample::local_bracket(&g, &sample.j_gradient(k, a, b)).norm() / w);
            ij = ij.max(super::sample::local_bracket(&g, &sample.jbar_gradient(k, a, b)).norm() / w);
        }
    }
    UnitaryReport { ii_max: ii, ij_max: ij, total: sample.total_unitary().re }
}

