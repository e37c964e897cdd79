//! Classic fourth-order Runge–Kutta on flat complex state vectors.

use num_complex::Complex64;

use crate::{Error, Result};

pub fn rk4_step<F>(f: &F, t: f64, y: &[Complex64], h: f64) -> Vec<Complex64>
where
    F: Fn(f64, &[Complex64]) -> Vec<Complex64>,
{
    let n = y.len();
    let k1 = f(t, y);
    let mut tmp: Vec<Complex64> = (0..n).map(|i| y[i] + k1[i] * (0.5 * h)).collect();
    let k2 = f(t + 0.5 * h, &tmp);
    for i in 0..n {
        tmp[i] = y[i] + k2[i] * (0.5 * h);
    }
    let k3 = f(t + 0.5 * h, &tmp);
    for i in 0..n {
        tmp[i] = y[i] + k3[i] * h;
    }
    let k4 = f(t + h, &tmp);
    (0..n)
        .map(|i| y[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0))
        .collect()
}

/// Integrates from `t0` to `t1` in `steps` equal steps, calling `observe`
/// with the initial state and after every step.
pub fn rk4<F, O>(f: F, t0: f64, t1: f64, y0: Vec<Complex64>, steps: usize, mut observe: O) -> Result<Vec<Complex64>>
where
    F: Fn(f64, &[Complex64]) -> Vec<Complex64>,
    O: FnMut(usize, f64, &[Complex64]) -> Result<()>,
{
    if steps == 0 {
        return Err(Error::Domain("at least one integration step is required".into()));
    }
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    observe(0, t0, &y)?;
    for k in 0..steps {
        let t = t0 + h * k as f64;
        y = rk4_step(&f, t, &y, h);
        if y.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { step: k + 1 });
        }
        observe(k + 1, t0 + h * (k + 1) as f64, &y)?;
    }
    Ok(y)
}
