//! One-dimensional quadrature.

/// Adaptive Simpson with Richardson correction. `tol` is an absolute target
/// for the whole interval; recursion stops at `max_depth`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Composite Simpson weights for `n` equal panels (`n` even) on `[a, b]`.
/// Returns the nodes and weights.
pub fn simpson_rule(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2 && n.is_multiple_of(2), "Simpson needs an even panel count");
    let h = (b - a) / n as f64;
    let nodes = (0..=n).map(|k| a + h * k as f64).collect();
    let weights = (0..=n)
        .map(|k| {
            let w = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * h / 3.0
        })
        .collect();
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_and_transcendentals() {
        assert_eq!(adaptive_simpson(|_| 3.0, 1.0, 1.0, 1e-12, 30), 0.0);
        assert!((adaptive_simpson(|t| t, 0.0, 1.0, 1e-14, 30) - 0.5).abs() < 1e-15);
        let v = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, 1e-13, 40);
        assert!((v - 2.0).abs() < 1e-12);
        let v = adaptive_simpson(|t| (-t * t).exp(), -6.0, 6.0, 1e-13, 40);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn composite_rule_is_exact_on_cubics() {
        let (x, w) = simpson_rule(-1.0, 2.0, 6);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * (x * x * x - x)).sum();
        assert!((s - (4.0 - 2.0 - 0.25 + 0.5)).abs() < 1e-14);
    }
}
