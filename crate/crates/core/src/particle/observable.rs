use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::spinor::{FourVector, METRIC};

/// A real function on phase space with analytic four-gradients.
///
/// `p` is contravariant and `grad_p` differentiates with respect to `p^μ`.
pub trait Observable: Send + Sync {
    fn value(&self, x: &FourVector, p: &FourVector) -> f64;
    fn grad_x(&self, x: &FourVector, p: &FourVector) -> FourVector;
    fn grad_p(&self, x: &FourVector, p: &FourVector) -> FourVector;
}

/// Ordinary Poisson bracket `∂N/∂x^μ ∂M/∂p_μ − ∂M/∂x^μ ∂N/∂p_μ`.
pub fn poisson_bracket(n: &dyn Observable, m: &dyn Observable, x: &FourVector, p: &FourVector) -> f64 {
    let (nx, np) = (n.grad_x(x, p), n.grad_p(x, p));
    let (mx, mp) = (m.grad_x(x, p), m.grad_p(x, p));
    (0..4).map(|k| METRIC[k] * (nx[k] * mp[k] - mx[k] * np[k])).sum()
}

/// Largest relative mismatch between the analytic gradients and central
/// differences with step `1e-6 · scale`.
pub fn gradient_check(obs: &dyn Observable, x: &FourVector, p: &FourVector) -> f64 {
    let scale = x.iter().chain(p).fold(1.0_f64, |a, v| a.max(v.abs()));
    let h = 1e-6 * scale;
    let gx = obs.grad_x(x, p);
    let gp = obs.grad_p(x, p);
    let mut worst = 0.0_f64;
    for k in 0..4 {
        let (mut xp, mut xm) = (*x, *x);
        xp[k] += h;
        xm[k] -= h;
        let fd = (obs.value(&xp, p) - obs.value(&xm, p)) / (2.0 * h);
        worst = worst.max((fd - gx[k]).abs() / (1.0 + gx[k].abs()));
        let (mut pp, mut pm) = (*p, *p);
        pp[k] += h;
        pm[k] -= h;
        let fd = (obs.value(x, &pp) - obs.value(x, &pm)) / (2.0 * h);
        worst = worst.max((fd - gp[k]).abs() / (1.0 + gp[k].abs()));
    }
    worst
}

/// `coef · Π x^μ^a_μ · Π (p^μ)^b_μ`; powers indexed x0..x3 then p0..p3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coef: f64,
    pub powers: [u32; 8],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn monomial(coef: f64, powers: [u32; 8]) -> Self {
        Polynomial { terms: vec![Monomial { coef, powers }] }
    }

    /// The coordinate `x^μ`.
    pub fn x(mu: usize) -> Self {
        let mut powers = [0; 8];
        powers[mu] = 1;
        Self::monomial(1.0, powers)
    }

    /// The covariant momentum `p_μ`.
    pub fn p_lower(mu: usize) -> Self {
        let mut powers = [0; 8];
        powers[4 + mu] = 1;
        Self::monomial(METRIC[mu], powers)
    }

    /// Random polynomial with `n_terms` monomials of total degree ≤ `max_degree`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n_terms: usize, max_degree: u32) -> Self {
        let terms = (0..n_terms)
            .map(|_| {
                let mut powers = [0u32; 8];
                let degree = rng.gen_range(1..=max_degree);
                for _ in 0..degree {
                    powers[rng.gen_range(0..8)] += 1;
                }
                Monomial { coef: rng.gen_range(-1.0..1.0), powers }
            })
            .collect();
        Polynomial { terms }
    }

    fn vars(x: &FourVector, p: &FourVector) -> [f64; 8] {
        [x[0], x[1], x[2], x[3], p[0], p[1], p[2], p[3]]
    }

    fn partial(&self, v: &[f64; 8], k: usize) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.powers[k] > 0)
            .map(|t| {
                let mut prod = t.coef * f64::from(t.powers[k]);
                for (j, &e) in t.powers.iter().enumerate() {
                    let e = if j == k { e - 1 } else { e };
                    prod *= v[j].powi(e as i32);
                }
                prod
            })
            .sum()
    }
}

impl Observable for Polynomial {
    fn value(&self, x: &FourVector, p: &FourVector) -> f64 {
        let v = Self::vars(x, p);
        self.terms
            .iter()
            .map(|t| t.coef * t.powers.iter().zip(&v).map(|(&e, &b)| b.powi(e as i32)).product::<f64>())
            .sum()
    }

    fn grad_x(&self, x: &FourVector, p: &FourVector) -> FourVector {
        let v = Self::vars(x, p);
        std::array::from_fn(|k| self.partial(&v, k))
    }

    fn grad_p(&self, x: &FourVector, p: &FourVector) -> FourVector {
        let v = Self::vars(x, p);
        std::array::from_fn(|k| self.partial(&v, 4 + k))
    }
}

/// `e · (p^μ p_μ − m²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeHamiltonian {
    pub e: f64,
    pub mass: f64,
}

impl Observable for FreeHamiltonian {
    fn value(&self, _x: &FourVector, p: &FourVector) -> f64 {
        self.e * (crate::spinor::minkowski_dot(p, p) - self.mass * self.mass)
    }

    fn grad_x(&self, _x: &FourVector, _p: &FourVector) -> FourVector {
        [0.0; 4]
    }

    fn grad_p(&self, _x: &FourVector, p: &FourVector) -> FourVector {
        std::array::from_fn(|k| 2.0 * self.e * METRIC[k] * p[k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn canonical_pair_bracket() {
        let x = [0.3, -1.0, 2.0, 0.5];
        let p = [2.0, 0.1, 0.2, -0.3];
        for mu in 0..4 {
            for nu in 0..4 {
                let b = poisson_bracket(&Polynomial::x(mu), &Polynomial::p_lower(nu), &x, &p);
                assert_eq!(b, if mu == nu { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn analytic_gradients_match_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let x = [0.3, -0.7, 0.4, 0.5];
        let p = [1.5, 0.1, 0.2, -0.3];
        for _ in 0..20 {
            let poly = Polynomial::random(&mut rng, 4, 4);
            assert!(gradient_check(&poly, &x, &p) < 1e-6);
        }
        assert!(gradient_check(&FreeHamiltonian { e: 0.7, mass: 1.3 }, &x, &p) < 1e-6);
    }
}
