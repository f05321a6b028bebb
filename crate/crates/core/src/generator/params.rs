//! Parameter matching for the two generated systems:
//!
//! * cube-root map: `-ψ'' + [c₁(3r/2)^{2/3} + c₂(2/(3r))^{2/3} - 5/(36r²)] ψ = E ψ`,
//!   matched by `α²/4 = c₁`, `β²/4 + α/2 + αn = c₂`, `E = -αβ/2`;
//! * square-root map: `-ψ'' + [c₁/√(2r) + c₂/(2r) - 3/(16r²)] ψ = E ψ`,
//!   matched by `αβ/2 = c₁`, `β²/4 + α/2 + αn = c₂`, `E = -α²/4`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Expr, Rational};
use crate::family::{FamilySpec, SigmaCase};
use crate::poly::hermite_poly;

use super::generate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }
}

/// `(E_n^±, ψ_n^±)` of the cube-root system.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormEigenpair {
    pub n: usize,
    pub branch: Branch,
    pub c1: f64,
    pub c2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub energy: f64,
    /// `ψ_n^±(r)`, unnormalized.
    pub psi: Expr,
}

impl ClosedFormEigenpair {
    pub fn family(&self) -> FamilySpec {
        FamilySpec::new(SigmaCase::One, self.alpha, self.beta).expect("alpha < 0 by construction")
    }
}

/// `c₁(3r/2)^{2/3} + c₂(2/(3r))^{2/3} - 5/(36r²)`.
pub fn quantsys_potential(c1: f64, c2: f64) -> Expr {
    let r = Expr::var;
    let two_thirds = Rational::new(2, 3);
    ((r() * 1.5).pow(two_thirds) * c1 + (r().recip() * (2.0 / 3.0)).pow(two_thirds) * c2
        - r().powi(-2) * (5.0 / 36.0))
        .simplify()
}

/// `c₁/√(2r) + c₂/(2r) - 3/(16r²)`.
pub fn inverse_sqrt_potential(c1: f64, c2: f64) -> Expr {
    let r = Expr::var;
    ((r() * 2.0).pow(Rational::new(-1, 2)) * c1 + r().recip() * (c2 / 2.0)
        - r().powi(-2) * (3.0 / 16.0))
        .simplify()
}

/// Closed-form eigenpair of the cube-root system for level `n`. The sign of
/// `β` picks the branch, and `E = -αβ/2` fixes the sign of the energy to match.
pub fn solve_params_quantsys(c1: f64, c2: f64, n: usize, branch: Branch) -> Result<ClosedFormEigenpair> {
    if !(c1 > 0.0) {
        return Err(Error::Inadmissible(format!("c1 = {c1} must be positive (alpha = -2 sqrt(c1) < 0)")));
    }
    let sc1 = c1.sqrt();
    let radicand = c2 + sc1 * (1.0 + 2.0 * n as f64);
    if radicand < 0.0 {
        return Err(Error::Inadmissible(format!(
            "c2 + sqrt(c1)(1+2n) = {radicand} < 0 for n = {n}"
        )));
    }
    let sr = radicand.sqrt();
    let alpha = -2.0 * sc1;
    let beta = branch.sign() * 2.0 * sr;
    let energy = -alpha * beta / 2.0;

    // r^{1/6} exp(-(3/4)(3/2)^{1/3} √c₁ r^{4/3} ± (9/4)^{1/3} √R r^{2/3}) H_n(c₁^{1/4} x ∓ √R / c₁^{1/4})
    let r = Expr::var;
    let k94 = 2.25f64.cbrt();
    let x = r().pow(Rational::new(2, 3)) * k94;
    let q4 = c1.powf(0.25);
    let arg = x * q4 - branch.sign() * sr / q4;
    let exponent = r().pow(Rational::new(4, 3)) * (-0.75 * 1.5f64.cbrt() * sc1)
        + r().pow(Rational::new(2, 3)) * (branch.sign() * k94 * sr);
    let psi = (r().pow(Rational::new(1, 6)) * exponent.exp() * hermite_poly(n).to_expr_of(&arg))
        .simplify();
    Ok(ClosedFormEigenpair { n, branch, c1, c2, alpha, beta, energy, psi })
}

/// Real roots of `a x³ + b x² + c x + d`, ascending, each polished by one
/// Newton step. Cardano for one real root, the trigonometric form for three.
pub fn cubic_real_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    assert!(a != 0.0, "not a cubic");
    let (b, c, d) = (b / a, c / a, d / a);
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let scale = (q / 2.0).powi(2).max((p / 3.0).abs().powi(3)).max(f64::MIN_POSITIVE);
    let mut ts = if disc > 1e-14 * scale {
        // One real root. Pick the cube root without cancellation.
        let u = (-q / 2.0 - q.signum() * disc.sqrt()).cbrt();
        let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        vec![t]
    } else if p.abs() <= 1e-300 {
        vec![(-q).cbrt()]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let cos_arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = cos_arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .collect()
    };
    let f = |x: f64| ((x + b) * x + c) * x + d;
    let df = |x: f64| (3.0 * x + 2.0 * b) * x + c;
    let mut roots: Vec<f64> = ts
        .drain(..)
        .map(|t| {
            let x = t - shift;
            let g = df(x);
            if g != 0.0 {
                x - f(x) / g
            } else {
                x
            }
        })
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * x.abs().max(1.0));
    roots
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicRoot {
    pub alpha: f64,
    pub beta: f64,
    pub energy: f64,
    /// `α < 0`.
    pub admissible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvSqrtRoots {
    pub roots: Vec<CubicRoot>,
    /// `c₁ = 0`: the cubic collapses to `α²((n+½)α - c₂) = 0` and `β = 0`.
    pub degenerate: bool,
}

/// All real roots of `(n+½)α³ - c₂α² + c₁² = 0` with `β = 2c₁/α`.
pub fn inverse_sqrt_roots(c1: f64, c2: f64, n: usize) -> InvSqrtRoots {
    let lead = n as f64 + 0.5;
    let root = |alpha: f64, beta: f64| CubicRoot {
        alpha,
        beta,
        energy: -alpha * alpha / 4.0,
        admissible: alpha < 0.0,
    };
    if c1 == 0.0 {
        let mut roots = vec![root(0.0, 0.0)];
        let a = c2 / lead;
        if a != 0.0 {
            roots.push(root(a, 0.0));
        }
        roots.sort_by(|x, y| x.alpha.total_cmp(&y.alpha));
        return InvSqrtRoots { roots, degenerate: true };
    }
    let roots = cubic_real_roots(lead, -c2, 0.0, c1 * c1)
        .into_iter()
        .map(|a| root(a, 2.0 * c1 / a))
        .collect();
    InvSqrtRoots { roots, degenerate: false }
}

/// Eigenpair of the square-root system from one admissible root.
#[derive(Debug, Clone, PartialEq)]
pub struct InvSqrtEigenpair {
    pub n: usize,
    pub c1: f64,
    pub c2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub energy: f64,
    pub degenerate: bool,
    /// `(2r)^{1/4} Ψ_{n,0}(√(2r))`.
    pub psi: Expr,
}

pub fn solve_params_inverse_sqrt(c1: f64, c2: f64, n: usize) -> Result<Vec<InvSqrtEigenpair>> {
    let all = inverse_sqrt_roots(c1, c2, n);
    let out: Vec<InvSqrtEigenpair> = all
        .roots
        .iter()
        .filter(|r| r.admissible)
        .map(|r| {
            let family = FamilySpec::new(SigmaCase::One, r.alpha, r.beta)?;
            let sys = generate(&family, n, 0, 1)?;
            Ok(InvSqrtEigenpair {
                n,
                c1,
                c2,
                alpha: r.alpha,
                beta: r.beta,
                energy: r.energy,
                degenerate: all.degenerate,
                psi: sys.psi.expect("generated from a known eigenfunction"),
            })
        })
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(Error::NoAdmissibleRoot(format!(
            "(n+1/2)a^3 - c2 a^2 + c1^2 = 0 has no root a < 0 for c1 = {c1}, c2 = {c2}, n = {n}"
        )));
    }
    Ok(out)
}
