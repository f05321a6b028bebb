//! Composite 16-point Gauss–Legendre quadrature with panel doubling and,
//! for infinite ends, a tail made of strips of doubling width.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 16;
const NODE_CAP: usize = 1 << 20;

/// Nodes and weights on [-1, 1] by Newton iteration on `P_16`.
fn gauss_legendre() -> &'static [(f64, f64); ORDER] {
    static RULE: OnceLock<[(f64, f64); ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut rule = [(0.0, 0.0); ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            rule[i] = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    /// Total integrand evaluations.
    pub nodes: usize,
}

/// Rule applied on `panels` equal panels; returns the integral and the
/// integral of `|f|`.
fn composite(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> (f64, f64) {
    let h = (b - a) / panels as f64;
    let rule = gauss_legendre();
    let (mut sum, mut abs) = (0.0, 0.0);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for &(x, w) in rule {
            let v = w * f(mid + 0.5 * h * x);
            sum += v;
            abs += v.abs();
        }
    }
    (0.5 * h * sum, 0.5 * h * abs)
}

/// Accumulated rounding in a sum whose terms have absolute mass `abs`.
fn roundoff(abs: f64) -> f64 {
    64.0 * f64::EPSILON * abs
}

/// Panel doubling on a finite range until successive values agree.
fn refine(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    budget: &mut usize,
) -> Result<(f64, f64, f64)> {
    let mut panels = 4;
    let (mut prev, _) = composite(f, a, b, panels);
    *budget += panels * ORDER;
    loop {
        panels *= 2;
        *budget += panels * ORDER;
        if *budget > NODE_CAP {
            return Err(Error::QuadratureNoConverge { estimate: f64::INFINITY, nodes: *budget });
        }
        let (cur, abs) = composite(f, a, b, panels);
        if !cur.is_finite() {
            return Err(Error::QuadratureNoConverge { estimate: f64::NAN, nodes: *budget });
        }
        let delta = (cur - prev).abs();
        if delta <= (tol * cur.abs().max(1.0)).max(roundoff(abs)) {
            return Ok((cur, delta, abs));
        }
        prev = cur;
    }
}

/// Integral over `[lo, hi]` where either end may be infinite. `window` is a
/// finite range inside the interval holding the bulk of the integrand; tails
/// beyond it are added strip by strip. Finite ends are approached through a
/// polynomial substitution that clusters nodes there, which tames
/// integrable endpoint singularities.
pub fn integrate_window(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    window: (f64, f64),
    tol: f64,
) -> Result<Quadrature> {
    let f = &f;
    let mut nodes = 0usize;
    let (lo_fin, hi_fin) = (lo.is_finite(), hi.is_finite());
    let a = if lo_fin { lo } else { window.0 };
    let b = if hi_fin { hi } else { window.1 };
    let w = b - a;
    let (core, mut err, mut abs) = match (lo_fin, hi_fin) {
        (true, true) => {
            // s = a + w (3u² - 2u³)
            let g = |u: f64| f(a + w * u * u * (3.0 - 2.0 * u)) * 6.0 * w * u * (1.0 - u);
            refine(&g, 0.0, 1.0, tol, &mut nodes)?
        }
        (true, false) => {
            let g = |u: f64| f(a + w * u * u) * 2.0 * w * u;
            refine(&g, 0.0, 1.0, tol, &mut nodes)?
        }
        (false, true) => {
            let g = |u: f64| f(b - w * u * u) * 2.0 * w * u;
            refine(&g, 0.0, 1.0, tol, &mut nodes)?
        }
        (false, false) => refine(f, a, b, tol, &mut nodes)?,
    };
    let mut value = core;
    for (infinite, start, dir) in [(!hi_fin, b, 1.0), (!lo_fin, a, -1.0)] {
        if !infinite {
            continue;
        }
        let mut width = w.max(1.0) / 2.0;
        let mut at = start;
        let mut converged = false;
        for _ in 0..64 {
            let (x0, x1) = if dir > 0.0 { (at, at + width) } else { (at - width, at) };
            let (strip, e, mass) = refine(f, x0, x1, tol, &mut nodes)?;
            value += strip;
            err += e;
            abs += mass;
            at += dir * width;
            width *= 2.0;
            if mass <= 0.25 * tol * value.abs().max(1.0) {
                err += mass;
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::QuadratureNoConverge { estimate: err, nodes });
        }
    }
    if !value.is_finite() || err > (tol * value.abs().max(1.0) * 4.0).max(roundoff(abs)) {
        return Err(Error::QuadratureNoConverge { estimate: err, nodes });
    }
    Ok(Quadrature { value, error_estimate: err, nodes })
}

/// [`integrate_window`] with a default window: the interval itself when
/// finite, otherwise `[-8, 8]` clipped to the interval.
pub fn integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<Quadrature> {
    let wl = if lo.is_finite() { lo } else if hi.is_finite() { hi.min(8.0) - 16.0 } else { -8.0 };
    let wh = if hi.is_finite() { hi } else if lo.is_finite() { lo.max(-8.0) + 16.0 } else { 8.0 };
    integrate_window(f, lo, hi, (wl, wh), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_degree_31() {
        let v = composite(&|x: f64| x.powi(30) + x.powi(31), -1.0, 1.0, 1).0;
        assert!((v - 2.0 / 31.0).abs() < 1e-15);
        let total: f64 = gauss_legendre().iter().map(|p| p.1).sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn closed_form_examples() {
        let inf = f64::INFINITY;
        let q = integrate(|s| (-s * s).exp(), -inf, inf, 1e-10).unwrap();
        assert!((q.value - std::f64::consts::PI.sqrt()).abs() < 1e-10, "{q:?}");
        let q = integrate(|_| 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((q.value - 1.0).abs() < 1e-12);
        let q = integrate(|s| s * (-s).exp(), 0.0, inf, 1e-10).unwrap();
        assert!((q.value - 1.0).abs() < 1e-10, "{q:?}");
    }

    #[test]
    fn endpoint_singularity() {
        // ∫_0^1 s^{-1/2} ds = 2
        let q = integrate(|s| s.powf(-0.5), 0.0, 1.0, 1e-10).unwrap();
        assert!((q.value - 2.0).abs() < 1e-9, "{q:?}");
    }

    #[test]
    fn error_estimate_shrinks_under_doubling() {
        let f = |x: f64| (-x * x).exp() * (3.0 * x).cos();
        let exact = std::f64::consts::PI.sqrt() * (-2.25f64).exp();
        let errs: Vec<f64> = [1, 2, 4]
            .iter()
            .map(|&p| (composite(&f, -6.0, 6.0, p).0 - exact).abs())
            .collect();
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
    }

    #[test]
    fn non_convergence_is_reported() {
        assert!(matches!(
            integrate(|s| 1.0 / s, 0.0, 1.0, 1e-12),
            Err(Error::QuadratureNoConverge { .. })
        ));
    }
}
