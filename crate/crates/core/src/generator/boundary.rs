//! Finite-difference check of generated eigenvalues at a singular endpoint.
//!
//! Near `r = 0` the generated potentials behave like `-5/(36r²)` or
//! `-3/(16r²)`. Both local solutions `r^{s₁}`, `r^{s₂}` are square integrable,
//! so the spectrum depends on a boundary condition. Plain Dirichlet truncation
//! picks the Friedrichs one, which the closed-form eigenfunctions do not obey
//! in general. The check therefore discretizes `ψ = φ u` with a reference `φ`
//! that carries the same local behaviour as the eigenfunction under test.

use serde::Serialize;

use crate::error::Result;
use crate::expr::{Expr, Rational};
use crate::family::{FamilySpec, SigmaCase};
use crate::oracle::{nearest, FdHamiltonian, WeightedFd};
use crate::schrodinger::wavefunction;

use super::params::{quantsys_potential, solve_params_quantsys, Branch};

/// Local exponents at `r = 0` for `x = (K r)^q`: `ψ ~ r^{s₁}(a + b t + …)` or
/// `r^{s₂}(…)`, with `t = r^q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frobenius {
    pub s1: Rational,
    pub s2: Rational,
    pub q: Rational,
    pub k_scale: f64,
}

impl Frobenius {
    /// `x = (3r/2)^{2/3}`.
    pub fn cube_root() -> Frobenius {
        Frobenius {
            s1: Rational::new(1, 6),
            s2: Rational::new(5, 6),
            q: Rational::new(2, 3),
            k_scale: 1.5,
        }
    }

    /// `x = √(2r)`.
    pub fn square_root() -> Frobenius {
        Frobenius {
            s1: Rational::new(1, 4),
            s2: Rational::new(3, 4),
            q: Rational::new(1, 2),
            k_scale: 2.0,
        }
    }

    /// Reference `φ` for a solution whose source `Ψ(x)` has the given value
    /// and slope at `x = 0`:
    /// `r^{s₁}(1 + θt + δt^j)` with `θ = K^q Ψ'(0)/Ψ(0)`, or `r^{s₂}` when
    /// `Ψ(0) = 0`. The `δ t^j` term (`j = ⌈2/q⌉`) only keeps `φ` positive
    /// when `θ < 0`, and is of higher order than the matched terms.
    pub fn reference(&self, psi0: f64, dpsi0: f64) -> (Expr, Option<f64>) {
        let r = Expr::var;
        if psi0.abs() <= 1e-12 * dpsi0.abs().max(1.0) {
            return (r().pow(self.s2), None);
        }
        let qf = *self.q.numer() as f64 / *self.q.denom() as f64;
        let theta = self.k_scale.powf(qf) * dpsi0 / psi0;
        let j = (2.0 / qf).ceil() as i64;
        let delta = if theta < 0.0 { theta.abs().powi(j as i32) } else { 0.0 };
        let t = r().pow(self.q);
        let phi = r().pow(self.s1) * (t.clone() * theta + t.powi(j) * delta + 1.0);
        (phi.simplify(), Some(theta))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCheck {
    pub n: usize,
    pub e_analytic: f64,
    /// Nearest eigenvalue with the boundary condition matched to `ψ`.
    pub e_matched: f64,
    pub matched_err: f64,
    /// Nearest eigenvalue with plain Dirichlet truncation, for comparison.
    pub e_dirichlet: f64,
    pub dirichlet_err: f64,
    pub theta: Option<f64>,
}

/// Builds both discretizations of `-ψ'' + W ψ` on `[r_lo, r_hi]` with `grid`
/// cells and reports the eigenvalue nearest `e_analytic` for each.
pub fn spectrum_near(
    w: &Expr,
    e_analytic: f64,
    source: &Expr,
    fro: Frobenius,
    r_lo: f64,
    r_hi: f64,
    grid: usize,
) -> Result<(f64, f64, Option<f64>)> {
    let psi0 = source.eval(0.0)?;
    let dpsi0 = source.diff().eval(0.0)?;
    let (phi, theta) = fro.reference(psi0, dpsi0);
    let top = e_analytic + 1.0 + 0.1 * e_analytic.abs();
    let matched = WeightedFd::new(w, &phi, r_lo, r_hi, grid)?.eigenvalues_below(top);
    let dirichlet = FdHamiltonian::from_expr(w, r_lo, r_hi, grid)?.eigenvalues_below(top);
    let pick = |v: &[f64]| nearest(v, e_analytic).unwrap_or(f64::NAN);
    Ok((pick(&matched), pick(&dirichlet), theta))
}

/// The check for `E_n^±` of the cube-root system.
pub fn matched_boundary_check(
    c1: f64,
    c2: f64,
    n: usize,
    branch: Branch,
    r_lo: f64,
    r_hi: f64,
    grid: usize,
) -> Result<BoundaryCheck> {
    let pair = solve_params_quantsys(c1, c2, n, branch)?;
    let family = FamilySpec::new(SigmaCase::One, pair.alpha, pair.beta)?;
    let source = wavefunction(&family, n, 0)?;
    let w = quantsys_potential(c1, c2);
    let (e_matched, e_dirichlet, theta) =
        spectrum_near(&w, pair.energy, &source, Frobenius::cube_root(), r_lo, r_hi, grid)?;
    Ok(BoundaryCheck {
        n,
        e_analytic: pair.energy,
        e_matched,
        matched_err: (e_matched - pair.energy).abs(),
        e_dirichlet,
        dirichlet_err: (e_dirichlet - pair.energy).abs(),
        theta,
    })
}
