//! Independent numerical checks: quadrature and finite-difference spectra.

mod fd;
mod quadrature;
mod tridiag;

pub use fd::{nearest, richardson, FdHamiltonian, WeightedFd};
pub use quadrature::{integrate, integrate_window, Quadrature};
pub use tridiag::SymTridiagonal;

use crate::error::Result;
use crate::expr::Expr;

/// `max |-ψ'' + Vψ - Eψ| / (1 + |Eψ|)` over `grid`, with `ψ''` symbolic.
pub fn residual_norm(potential: &Expr, energy: f64, psi: &Expr, grid: &[f64]) -> Result<f64> {
    let d2 = psi.nth_diff(2).compile();
    let (v, p) = (potential.compile(), psi.compile());
    let mut worst = 0.0_f64;
    for &x in grid {
        let pv = p.eval(x)?;
        let r = -d2.eval(x)? + v.eval(x)? * pv - energy * pv;
        worst = worst.max(r.abs() / (1.0 + (energy * pv).abs()));
    }
    Ok(worst)
}

/// `n` evenly spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn residual_norm_examples() {
        let v = parse("x^2 - 1").unwrap();
        let psi = parse("exp(-x^2/2)").unwrap();
        let grid = linspace(-5.0, 5.0, 201);
        assert!(residual_norm(&v, 0.0, &psi, &grid).unwrap() < 1e-10);
        assert!(residual_norm(&v, 0.1, &psi, &grid).unwrap() > 1e-3);
    }
}
