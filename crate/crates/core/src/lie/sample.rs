use num_complex::Complex64;

use crate::clifford::ClVector;
use crate::linalg::{c, re};
use crate::spinor::lower;
use crate::string::{Curve, CurveNode, Spinor, WaveState};
use crate::{Error, Result};

/// Symmetric spinor pairs in the order `11, 12, 22`.
pub const SYM_PAIRS: [(usize, usize); 3] = [(0, 0), (0, 1), (1, 1)];

pub fn sym_index(a: usize, b: usize) -> usize {
    a + b
}

/// Phase-space data of a string on a spacelike curve: `c^A` and the projected
/// momenta `d*_A = v^α ε_{βα} d*^β_A` at each node.
#[derive(Debug, Clone)]
pub struct CurrentSample {
    pub nodes: Vec<CurveNode>,
    pub c: Vec<Spinor>,
    pub dstar: Vec<Spinor>,
    /// `j_AB` at each node, ordered as [`SYM_PAIRS`].
    pub j: Vec<[Complex64; 3]>,
    pub delta_u: f64,
}

/// `c_A = ε_{GA} c^G`
pub fn lower_spinor(s: &Spinor) -> Spinor {
    let w0 = lower([re(1.0), re(0.0)]);
    let w1 = lower([re(0.0), re(1.0)]);
    std::array::from_fn(|a| {
        let mut v = s[0].scale(w0[a]);
        v.axpy(w1[a], &s[1]);
        v
    })
}

fn j_values(c: &Spinor, dstar: &Spinor) -> [Complex64; 3] {
    let cl = lower_spinor(c);
    SYM_PAIRS.map(|(a, b)| cl[a].dot(&dstar[b]) + cl[b].dot(&dstar[a]))
}

/// Samples `c^A` and `d*_A` at the composite-Simpson nodes of `curve`.
pub fn sample_currents(state: &WaveState, curve: &Curve, panels: usize) -> Result<CurrentSample> {
    let nodes = curve.nodes(panels)?;
    let mut cs = Vec::with_capacity(nodes.len());
    let mut ds = Vec::with_capacity(nodes.len());
    for node in &nodes {
        let [dt, dsig] = state.dstar_upper(node.tau, node.sigma)?;
        let [vt, vs] = node.tangent;
        let proj: Spinor = std::array::from_fn(|a| {
            let mut v = dt[a].scale(re(vs));
            v.axpy(re(-vt), &dsig[a]);
            v
        });
        cs.push(state.eval_c(node.tau, node.sigma));
        ds.push(proj);
    }
    CurrentSample::from_parts(nodes, cs, ds)
}

impl CurrentSample {
    /// Builds a sample from explicit values; `delta_u` is the node spacing.
    pub fn from_parts(nodes: Vec<CurveNode>, c: Vec<Spinor>, dstar: Vec<Spinor>) -> Result<Self> {
        if nodes.len() < 2 || c.len() != nodes.len() || dstar.len() != nodes.len() {
            return Err(Error::Dimension { expected: nodes.len(), got: c.len().min(dstar.len()) });
        }
        if nodes.iter().any(|n| !(n.weight > 0.0)) {
            return Err(Error::Domain("quadrature weights must be positive".into()));
        }
        let j = c.iter().zip(&dstar).map(|(c, d)| j_values(c, d)).collect();
        let delta_u = nodes[1].sigma - nodes[0].sigma;
        Ok(CurrentSample { nodes, c, dstar, j, delta_u })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn integrate(&self, f: impl Fn(usize) -> Complex64) -> Complex64 {
        (0..self.len()).map(|k| f(k) * self.nodes[k].weight).sum()
    }

    /// `j^tot_AB = ∫ du j_AB`
    pub fn total_j(&self) -> [Complex64; 3] {
        std::array::from_fn(|i| self.integrate(|k| self.j[k][i]))
    }

    /// `c^A ∙ d*_A` at node `k`.
    pub fn nu(&self, k: usize) -> Complex64 {
        self.c[k][0].dot(&self.dstar[k][0]) + self.c[k][1].dot(&self.dstar[k][1])
    }

    /// Projected unitary current `i(c^A∙d*_A − c.c.)` at node `k`.
    pub fn unitary(&self, k: usize) -> Complex64 {
        let nu = self.nu(k);
        c(0.0, 1.0) * (nu - nu.conj())
    }

    pub fn total_unitary(&self) -> Complex64 {
        self.integrate(|k| self.unitary(k))
    }

    /// `d*^tot_A = ∫ du d*_A`
    pub fn total_dstar(&self) -> Spinor {
        let space = self.c[0][0].space();
        let mut tot = [ClVector::zero(space), ClVector::zero(space)];
        for (k, d) in self.dstar.iter().enumerate() {
            for a in 0..2 {
                tot[a].axpy(re(self.nodes[k].weight), &d[a]);
            }
        }
        tot
    }

    /// `p^tot_{EḞ} = d*^tot_E ∙ d^tot_Ḟ`
    pub fn total_p(&self) -> [[Complex64; 2]; 2] {
        let d = self.total_dstar();
        std::array::from_fn(|e| std::array::from_fn(|f| d[e].dot(&d[f].conj())))
    }
}

/// Derivatives of a local density with respect to `c^G`, `c^{*Ġ}`, `d*_G`, `d_Ġ`
/// at one node. `None` marks an identically vanishing derivative.
#[derive(Debug, Clone, Default)]
pub struct LocalGradient {
    pub dc: Option<Spinor>,
    pub dc_bar: Option<Spinor>,
    pub ddstar: Option<Spinor>,
    pub dd: Option<Spinor>,
}

fn pair(x: &Option<Spinor>, y: &Option<Spinor>) -> Complex64 {
    match (x, y) {
        (Some(x), Some(y)) => x[0].dot(&y[0]) + x[1].dot(&y[1]),
        _ => Complex64::new(0.0, 0.0),
    }
}

/// `∂f/∂c∙∂g/∂d* + ∂f/∂c*∙∂g/∂d − (f ↔ g)`, the bracket density without the δ.
pub fn local_bracket(f: &LocalGradient, g: &LocalGradient) -> Complex64 {
    pair(&f.dc, &g.ddstar) + pair(&f.dc_bar, &g.dd) - pair(&g.dc, &f.ddstar) - pair(&g.dc_bar, &f.dd)
}

fn conj_spinor(s: &Spinor) -> Spinor {
    [s[0].conj(), s[1].conj()]
}

impl CurrentSample {
    fn zero_spinor(&self) -> Spinor {
        let space = self.c[0][0].space();
        [ClVector::zero(space), ClVector::zero(space)]
    }

    /// `∂j_AB/∂c^G = ε_{GA} d*_B + ε_{GB} d*_A`, `∂j_AB/∂d*_G = δ_{GB} c_A + δ_{GA} c_B`.
    pub fn j_gradient(&self, k: usize, a: usize, b: usize) -> LocalGradient {
        let d = &self.dstar[k];
        let cl = lower_spinor(&self.c[k]);
        let eps = crate::spinor::epsilon();
        let dc: Spinor = std::array::from_fn(|g| {
            let mut v = d[b].scale(eps[(g, a)]);
            v.axpy(eps[(g, b)], &d[a]);
            v
        });
        let mut ddstar = self.zero_spinor();
        ddstar[b] = &ddstar[b] + &cl[a];
        ddstar[a] = &ddstar[a] + &cl[b];
        LocalGradient { dc: Some(dc), ddstar: Some(ddstar), ..Default::default() }
    }

    /// Gradient of the conjugate density `j̄_ȦḂ`.
    pub fn jbar_gradient(&self, k: usize, a: usize, b: usize) -> LocalGradient {
        let g = self.j_gradient(k, a, b);
        LocalGradient {
            dc_bar: g.dc.as_ref().map(conj_spinor),
            dd: g.ddstar.as_ref().map(conj_spinor),
            ..Default::default()
        }
    }

    /// Gradient of `i(c^A∙d*_A − c^{*Ȧ}∙d_Ȧ)`.
    pub fn unitary_gradient(&self, k: usize) -> LocalGradient {
        let i = c(0.0, 1.0);
        let scale = |s: &Spinor, w: Complex64| -> Spinor { [s[0].scale(w), s[1].scale(w)] };
        LocalGradient {
            dc: Some(scale(&self.dstar[k], i)),
            ddstar: Some(scale(&self.c[k], i)),
            dc_bar: Some(scale(&conj_spinor(&self.dstar[k]), -i)),
            dd: Some(scale(&conj_spinor(&self.c[k]), -i)),
        }
    }

    /// Density of `p^tot_{EḞ}` at any node: `∂/∂d*_G = δ_{GE} d^tot_Ḟ`,
    /// `∂/∂d_Ġ = δ_{ĠḞ} d*^tot_E`.
    pub fn p_gradient(&self, tot: &Spinor, e: usize, f: usize) -> LocalGradient {
        let mut ddstar = self.zero_spinor();
        ddstar[e] = tot[f].conj();
        let mut dd = self.zero_spinor();
        dd[f] = tot[e].clone();
        LocalGradient { ddstar: Some(ddstar), dd: Some(dd), ..Default::default() }
    }

    /// `{j_AB(u_k), j_EF(u_l)}` with `δ(u_k − u_l) → δ_{kl} / w_k`.
    pub fn current_bracket(&self, ab: (usize, usize), ef: (usize, usize), k: usize, l: usize) -> Complex64 {
        if k != l {
            return Complex64::new(0.0, 0.0);
        }
        local_bracket(&self.j_gradient(k, ab.0, ab.1), &self.j_gradient(k, ef.0, ef.1)) / self.nodes[k].weight
    }

    /// `{j_AB(u_k), j̄_ĖḞ(u_l)}`
    pub fn mixed_bracket(&self, ab: (usize, usize), ef: (usize, usize), k: usize, l: usize) -> Complex64 {
        if k != l {
            return Complex64::new(0.0, 0.0);
        }
        local_bracket(&self.j_gradient(k, ab.0, ab.1), &self.jbar_gradient(k, ef.0, ef.1)) / self.nodes[k].weight
    }

    /// `((j_AE ε_FB + A↔B) + E↔F)` at node `k`, the right-hand side of the
    /// current algebra without the δ.
    pub fn current_pattern(&self, ab: (usize, usize), ef: (usize, usize), k: usize) -> Complex64 {
        current_pattern(&self.j[k], ab, ef)
    }

    /// Bracket of two totals `∫ f`, `∫ g` from their densities:
    /// `Σ_k w_k local_bracket(f_k, g_k)`.
    pub fn total_bracket<F, G>(&self, f: F, g: G) -> Complex64
    where
        F: Fn(usize) -> LocalGradient,
        G: Fn(usize) -> LocalGradient,
    {
        (0..self.len()).map(|k| local_bracket(&f(k), &g(k)) * self.nodes[k].weight).sum()
    }
}

/// `((j_AE ε_FB + A↔B) + E↔F)` for symmetric `j` stored as `[j11, j12, j22]`.
pub fn current_pattern(j: &[Complex64; 3], ab: (usize, usize), ef: (usize, usize)) -> Complex64 {
    let eps = crate::spinor::epsilon();
    let jj = |x: usize, y: usize| j[sym_index(x, y)];
    let (a, b) = ab;
    let (e, f) = ef;
    jj(a, e) * eps[(f, b)] + jj(b, e) * eps[(f, a)] + jj(a, f) * eps[(e, b)] + jj(b, f) * eps[(e, a)]
}
