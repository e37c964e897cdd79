use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use crate::clifford::{hermitian_eig_matrix, ClVector};
use crate::linalg::{commutator, re, CMat, I};
use crate::ode::rk4;
use crate::spinor::{FourVector, METRIC};
use crate::{Error, Result};

pub type CVec = DVector<Complex64>;

const NORM_TOL: f64 = 1e-12;

/// Hamiltonian as a matrix function of the coordinate and momentum matrices.
pub trait MatrixHamiltonian: Send + Sync {
    fn h(&self, x: &[CMat], p: &[CMat]) -> CMat;
}

/// `(P^μ P_μ − m² 1)/(2m)` with covariant `P_μ` supplied.
#[derive(Debug, Clone, Copy)]
pub struct FreeMatrixHamiltonian {
    pub mass: f64,
}

impl MatrixHamiltonian for FreeMatrixHamiltonian {
    fn h(&self, _x: &[CMat], p: &[CMat]) -> CMat {
        let n = p[0].nrows();
        let mut out = CMat::identity(n, n) * re(-self.mass * self.mass);
        for (mu, pm) in p.iter().enumerate() {
            out += (pm * pm) * re(METRIC[mu]);
        }
        out * re(0.5 / self.mass)
    }
}

/// One-dimensional `P²/(2m) + ½ m ω² X²`.
#[derive(Debug, Clone, Copy)]
pub struct Oscillator1D {
    pub mass: f64,
    pub omega: f64,
}

impl MatrixHamiltonian for Oscillator1D {
    fn h(&self, x: &[CMat], p: &[CMat]) -> CMat {
        (&p[0] * &p[0]) * re(0.5 / self.mass) + (&x[0] * &x[0]) * re(0.5 * self.mass * self.omega * self.omega)
    }
}

/// Hermitian gauge connection `Γ(τ)`, entering as `d/dτ − iΓ`.
#[derive(Clone)]
pub enum Connection {
    /// Heisenberg picture.
    Zero,
    Constant(CMat),
    /// `Γ = −H/ħ`, evaluated on the current matrices.
    Schrodinger,
    Custom(Arc<dyn Fn(f64) -> CMat + Send + Sync>),
}

impl fmt::Debug for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Connection::Zero => write!(f, "Zero"),
            Connection::Constant(_) => write!(f, "Constant"),
            Connection::Schrodinger => write!(f, "Schrodinger"),
            Connection::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl Connection {
    pub fn eval(&self, tau: f64, h: &CMat, hbar: f64) -> CMat {
        match self {
            Connection::Zero => CMat::zeros(h.nrows(), h.ncols()),
            Connection::Constant(g) => g.clone(),
            Connection::Schrodinger => h * re(-1.0 / hbar),
            Connection::Custom(f) => f(tau),
        }
    }

    /// `Γ → U Γ U† − i U̇ U†` for a time-dependent unitary; `U̇` by
    /// fourth-order central differences.
    pub fn transformed(&self, u: Arc<dyn Fn(f64) -> CMat + Send + Sync>) -> Result<Connection> {
        let base: Arc<dyn Fn(f64) -> CMat + Send + Sync> = match self {
            Connection::Zero => {
                let u = u.clone();
                Arc::new(move |t| {
                    let n = u(t).nrows();
                    CMat::zeros(n, n)
                })
            }
            Connection::Constant(g) => {
                let g = g.clone();
                Arc::new(move |_| g.clone())
            }
            Connection::Custom(f) => f.clone(),
            Connection::Schrodinger => {
                return Err(Error::Unsupported("transforming a state-dependent connection".into()))
            }
        };
        Ok(Connection::Custom(Arc::new(move |t| {
            let h = 1e-3;
            let ut = u(t);
            let du = (u(t - 2.0 * h) - u(t + 2.0 * h) + (u(t + h) - u(t - h)) * re(8.0)) * re(1.0 / (12.0 * h));
            &ut * base(t) * ut.adjoint() - du * ut.adjoint() * I
        })))
    }
}

#[derive(Debug, Clone)]
pub struct MatrixTrajectory {
    pub tau: Vec<f64>,
    pub x: Vec<Vec<CMat>>,
    pub p: Vec<Vec<CMat>>,
}

impl MatrixTrajectory {
    pub fn last_x(&self) -> &[CMat] {
        self.x.last().expect("non-empty trajectory")
    }

    pub fn last_p(&self) -> &[CMat] {
        self.p.last().expect("non-empty trajectory")
    }
}

fn flatten(ms: &[CMat]) -> Vec<Complex64> {
    ms.iter().flat_map(|m| m.iter().copied()).collect()
}

fn unflatten(data: &[Complex64], count: usize, n: usize) -> Vec<CMat> {
    (0..count)
        .map(|k| CMat::from_column_slice(n, n, &data[k * n * n..(k + 1) * n * n]))
        .collect()
}

/// `dX/dτ̄ = i[Γ, X] + [X, H]/(iħ)`, likewise for `P`.
#[allow(clippy::too_many_arguments)]
pub fn covariant_evolve(
    x0: &[CMat],
    p0: &[CMat],
    h: &dyn MatrixHamiltonian,
    gamma: &Connection,
    hbar: f64,
    tau_end: f64,
    steps: usize,
    record_every: usize,
) -> Result<MatrixTrajectory> {
    if !(hbar > 0.0) {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    if x0.len() != p0.len() || x0.is_empty() {
        return Err(Error::Dimension { expected: x0.len(), got: p0.len() });
    }
    let n = x0[0].nrows();
    let d = x0.len();
    let rhs = |t: f64, y: &[Complex64]| -> Vec<Complex64> {
        let all = unflatten(y, 2 * d, n);
        let (x, p) = all.split_at(d);
        let hm = h.h(x, p);
        let g = gamma.eval(t, &hm, hbar);
        let deriv = |m: &CMat| commutator(&g, m) * I + commutator(m, &hm) * (-I / hbar);
        let out: Vec<CMat> = x.iter().chain(p).map(deriv).collect();
        flatten(&out)
    };
    let mut y0 = flatten(x0);
    y0.extend(flatten(p0));
    let every = record_every.max(1);
    let mut traj = MatrixTrajectory { tau: Vec::new(), x: Vec::new(), p: Vec::new() };
    rk4(rhs, 0.0, tau_end, y0, steps, |k, t, y| {
        if k % every == 0 || k == steps {
            let all = unflatten(y, 2 * d, n);
            traj.tau.push(t);
            traj.x.push(all[..d].to_vec());
            traj.p.push(all[d..].to_vec());
        }
        Ok(())
    })?;
    Ok(traj)
}

/// Heisenberg picture: the connection vanishes.
pub fn evolve_heisenberg(
    x0: &[CMat],
    p0: &[CMat],
    h: &dyn MatrixHamiltonian,
    hbar: f64,
    tau_end: f64,
    steps: usize,
    record_every: usize,
) -> Result<MatrixTrajectory> {
    covariant_evolve(x0, p0, h, &Connection::Zero, hbar, tau_end, steps, record_every)
}

/// Unit-norm amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: CVec,
}

impl StateVector {
    pub fn new(amps: CVec) -> Result<Self> {
        let dev = (amps.norm() - 1.0).abs();
        if dev > NORM_TOL {
            return Err(Error::Domain(format!("state vector norm deviates from 1 by {dev:e}")));
        }
        Ok(StateVector { amps })
    }

    pub fn normalized(amps: CVec) -> Result<Self> {
        let n = amps.norm();
        if !(n > 0.0) {
            return Err(Error::Domain("zero state vector".into()));
        }
        Ok(StateVector { amps: amps / re(n) })
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut amps = CVec::zeros(n);
        amps[i] = re(1.0);
        StateVector { amps }
    }

    pub fn amps(&self) -> &CVec {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `⟨s|M|s⟩`
    pub fn expectation(&self, m: &CMat) -> Complex64 {
        self.amps.dotc(&(m * &self.amps))
    }

    /// `⟨s|C` for a ket of Clifford vectors.
    pub fn expectation_ket(&self, kets: &[ClVector]) -> ClVector {
        let mut out = ClVector::zero(kets[0].space());
        for (i, k) in kets.iter().enumerate() {
            out.axpy(self.amps[i].conj(), k);
        }
        out
    }
}

/// Integrates `(d/dτ − iΓ)|s⟩ = 0`; `h` is the Hamiltonian matrix used by
/// state-dependent connections.
pub fn evolve_state(
    s: &StateVector,
    gamma: &Connection,
    h: &CMat,
    hbar: f64,
    tau_end: f64,
    steps: usize,
) -> Result<StateVector> {
    let rhs = |t: f64, y: &[Complex64]| -> Vec<Complex64> {
        let g = gamma.eval(t, h, hbar);
        let v = CVec::from_column_slice(y);
        (g * v * I).iter().copied().collect()
    };
    let y = rk4(rhs, 0.0, tau_end, s.amps.iter().copied().collect(), steps, |_, _, _| Ok(()))?;
    Ok(StateVector { amps: CVec::from_vec(y) })
}

/// Eigenvalues of `x` with Born weights `|⟨x_i|s⟩|²`.
pub fn born_probabilities(s: &StateVector, x: &CMat) -> Result<(Vec<f64>, Vec<f64>)> {
    let eig = hermitian_eig_matrix(x)?;
    let probs = (0..eig.values.len())
        .map(|i| eig.vectors.column(i).dotc(&s.amps).norm_sqr())
        .collect();
    Ok((eig.values, probs))
}

/// Draws an eigenvalue index of `x` with Born probabilities.
pub fn born_sample<R: Rng + ?Sized>(s: &StateVector, x: &CMat, rng: &mut R) -> Result<(usize, f64)> {
    let (values, probs) = born_probabilities(s, x)?;
    let total: f64 = probs.iter().sum();
    let mut r = rng.gen_range(0.0..total);
    for (i, p) in probs.iter().enumerate() {
        if r < *p {
            return Ok((i, values[i]));
        }
        r -= p;
    }
    let last = values.len() - 1;
    Ok((last, values[last]))
}

/// Lowering operator truncated to `n` levels: `a_{k,k+1} = √(k+1)`.
pub fn annihilation(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if j == i + 1 { re((j as f64).sqrt()) } else { re(0.0) })
}

/// `X = √(ħ/2mω)(a + a†)`, `P = i√(ħmω/2)(a† − a)` on `n` levels.
pub fn truncated_oscillator(n: usize, mass: f64, omega: f64, hbar: f64) -> (CMat, CMat) {
    let a = annihilation(n);
    let ad = a.adjoint();
    let x = (&a + &ad) * re((hbar / (2.0 * mass * omega)).sqrt());
    let p = (&ad - &a) * (I * (hbar * mass * omega / 2.0).sqrt());
    (x, p)
}

/// `max |[X, P] − iħ 1|` over the leading `interior × interior` block.
pub fn ccr_defect(x: &CMat, p: &CMat, hbar: f64, interior: usize) -> f64 {
    let n = x.nrows();
    let d = commutator(x, p) - CMat::identity(n, n) * (I * hbar);
    let k = interior.min(n);
    crate::linalg::max_abs(&d.view((0, 0), (k, k)).into_owned())
}

/// `dt/dτ̄ = p^0/m`; tends to 1 when `|p| ≪ m`.
pub fn proper_time_rate(p: &FourVector, mass: f64) -> f64 {
    p[0] / mass
}

/// Restriction to the leading `k × k` block.
pub fn interior(m: &CMat, k: usize) -> CMat {
    m.view((0, 0), (k, k)).into_owned()
}
