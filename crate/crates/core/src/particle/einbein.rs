use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::quadrature::adaptive_simpson;
use crate::{Error, Result};

/// Positive gauge function `e(τ)`.
#[derive(Clone)]
pub enum Einbein {
    Const(f64),
    /// `a + b τ`
    Linear { a: f64, b: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Einbein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Einbein::Const(e) => write!(f, "Const({e})"),
            Einbein::Linear { a, b } => write!(f, "Linear({a} + {b} t)"),
            Einbein::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// An einbein together with the turning point `τ_0` where `μ` vanishes.
#[derive(Debug, Clone)]
pub struct EinbeinFn {
    pub kind: Einbein,
    pub tau0: f64,
}

impl EinbeinFn {
    pub fn constant(e: f64, tau0: f64) -> Self {
        EinbeinFn { kind: Einbein::Const(e), tau0 }
    }

    pub fn eval(&self, tau: f64) -> f64 {
        match &self.kind {
            Einbein::Const(e) => *e,
            Einbein::Linear { a, b } => a + b * tau,
            Einbein::Custom(f) => f(tau),
        }
    }

    /// Checks `e > 0` on `[a, b]` (exactly for the closed forms, by sampling
    /// otherwise).
    pub fn check_positive(&self, a: f64, b: f64) -> Result<()> {
        let bad = match &self.kind {
            Einbein::Const(_) | Einbein::Linear { .. } => [a, b].into_iter().find(|&t| !(self.eval(t) > 0.0)),
            Einbein::Custom(_) => (0..=256)
                .map(|k| a + (b - a) * k as f64 / 256.0)
                .find(|&t| !(self.eval(t) > 0.0)),
        };
        match bad {
            Some(t) => Err(Error::Domain(format!("einbein is not positive at tau = {t}"))),
            None => Ok(()),
        }
    }
}

/// `μ(τ) = ∫_{τ0}^{τ} m² e(t) dt`.
pub fn mu_of_tau(e: &EinbeinFn, mass: f64, tau: f64) -> f64 {
    let m2 = mass * mass;
    let scale = m2 * (tau - e.tau0).abs() * e.eval(tau).abs().max(e.eval(e.tau0).abs()).max(1.0);
    adaptive_simpson(|t| m2 * e.eval(t), e.tau0, tau, 1e-14 * scale.max(1e-300), 50)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EinbeinJson {
    #[serde(rename = "type")]
    pub kind: String,
    pub params: Vec<f64>,
}

impl EinbeinJson {
    pub fn build(&self, tau0: f64) -> Result<EinbeinFn> {
        let kind = match (self.kind.as_str(), self.params.as_slice()) {
            ("const", [e]) => Einbein::Const(*e),
            ("linear", [a, b]) => Einbein::Linear { a: *a, b: *b },
            ("const", _) => return Err(Error::Domain("const einbein takes one parameter".into())),
            ("linear", _) => return Err(Error::Domain("linear einbein takes two parameters [a, b]".into())),
            (other, _) => return Err(Error::Unsupported(format!("einbein type {other:?}"))),
        };
        Ok(EinbeinFn { kind, tau0 })
    }
}
