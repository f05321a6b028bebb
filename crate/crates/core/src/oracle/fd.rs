//! Finite-difference discretizations of `-d²/dx² + V`.

use crate::error::{Error, Result};
use crate::expr::Expr;

use super::SymTridiagonal;

/// Three-point stencil on `x_i = lo + i h`, `i = 1..n-1`, Dirichlet at both ends.
#[derive(Debug, Clone)]
pub struct FdHamiltonian {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub matrix: SymTridiagonal,
}

impl FdHamiltonian {
    pub fn new(v: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> FdHamiltonian {
        assert!(n >= 16, "grid too coarse");
        let h = (hi - lo) / n as f64;
        let inv = 1.0 / (h * h);
        let diag = (1..n).map(|i| 2.0 * inv + v(lo + i as f64 * h)).collect();
        let off = vec![-inv; n - 2];
        FdHamiltonian { lo, hi, n, matrix: SymTridiagonal::new(diag, off) }
    }

    pub fn from_expr(v: &Expr, lo: f64, hi: f64, n: usize) -> Result<FdHamiltonian> {
        let c = v.compile();
        let h = (hi - lo) / n as f64;
        for i in 1..n {
            c.eval(lo + i as f64 * h)?;
        }
        Ok(FdHamiltonian::new(|x| c.eval_or_nan(x), lo, hi, n))
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn eigenvalues_below(&self, e_max: f64) -> Vec<f64> {
        self.matrix.eigenvalues_below(e_max)
    }

    pub fn lowest(&self, count: usize) -> Vec<f64> {
        self.matrix.lowest(count)
    }
}

/// `(4 E_{h/2} - E_h) / 3` for a second-order scheme.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Discretization of `-ψ'' + W ψ = E ψ` after writing `ψ = φ u` for a
/// reference function `φ` carrying the behaviour at the left end:
/// `-(φ² u')' + (W - φ''/φ) φ² u = E φ² u`.
///
/// Cell-centred grid on `(lo, hi)`: zero flux through the left face (the
/// boundary condition selected by `φ`), `u = 0` on the right face. The
/// generalized problem is symmetrized by `√(φ²)`.
#[derive(Debug, Clone)]
pub struct WeightedFd {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub matrix: SymTridiagonal,
}

impl WeightedFd {
    pub fn new(w: &Expr, phi: &Expr, lo: f64, hi: f64, n: usize) -> Result<WeightedFd> {
        assert!(n >= 16, "grid too coarse");
        let h = (hi - lo) / n as f64;
        let p = (phi.clone().powi(2)).simplify().compile();
        let q_over_p = (w.clone() - phi.nth_diff(2) * phi.clone().recip()).simplify().compile();
        let node = |i: usize| lo + (i as f64 + 0.5) * h;
        let face = |i: usize| lo + i as f64 * h;
        let pn: Vec<f64> = (0..n).map(|i| p.eval(node(i))).collect::<std::result::Result<_, _>>()?;
        let pf: Vec<f64> = (0..=n).map(|i| p.eval(face(i))).collect::<std::result::Result<_, _>>()?;
        if let Some(i) = pn.iter().position(|v| !(*v > 0.0)) {
            return Err(Error::SingularPoint { at: node(i) });
        }
        let inv = 1.0 / (h * h);
        let mut diag = Vec::with_capacity(n);
        for i in 0..n {
            let left = if i == 0 { 0.0 } else { pf[i] };
            // Dirichlet on the right face, half a cell away.
            let right = if i + 1 == n { 2.0 * pf[n] } else { pf[i + 1] };
            diag.push((left + right) * inv / pn[i] + q_over_p.eval(node(i))?);
        }
        let off = (0..n - 1)
            .map(|i| -pf[i + 1] * inv / (pn[i] * pn[i + 1]).sqrt())
            .collect();
        Ok(WeightedFd { lo, hi, n, matrix: SymTridiagonal::new(diag, off) })
    }

    pub fn eigenvalues_below(&self, e_max: f64) -> Vec<f64> {
        self.matrix.eigenvalues_below(e_max)
    }

    pub fn lowest(&self, count: usize) -> Vec<f64> {
        self.matrix.lowest(count)
    }
}

/// Nearest value in `spectrum` to `target`.
pub fn nearest(spectrum: &[f64], target: f64) -> Option<f64> {
    spectrum
        .iter()
        .copied()
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
}
