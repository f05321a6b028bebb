//! New solvable equations from old ones: remove the first-derivative term of
//! `A ψ'' + B ψ' + C ψ = 0` with a gauge factor, split a solvable potential as
//! `C₁ I₁ + C₋₁ I₋₁ + C₀`, and change variable with `x' = 1/√(I_k(x))`.

mod boundary;
mod dw;
mod params;

use std::collections::BTreeMap;

pub use boundary::{matched_boundary_check, BoundaryCheck, Frobenius};
pub use dw::{dw_pattern, reproduce_dw, DwPattern};
pub use params::{
    cubic_real_roots, inverse_sqrt_potential, inverse_sqrt_roots, quantsys_potential,
    solve_params_inverse_sqrt, solve_params_quantsys,
    Branch, ClosedFormEigenpair, CubicRoot, InvSqrtEigenpair, InvSqrtRoots,
};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{Expr, Rational};
use crate::family::{FamilySpec, Interval, SigmaCase};
use crate::schrodinger::wavefunction;

/// `A ψ'' + B ψ' + C ψ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderODE {
    pub a: Expr,
    pub b: Expr,
    pub c: Expr,
    pub interval: Interval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    /// `h = exp(∫ B/(2A))`.
    pub gauge: Expr,
    /// `Q = (4AC - 2AB' + 2BA' - B²) / (4A²)`, so that `(hψ)'' + Q hψ = 0`.
    pub potential: Expr,
}

/// Antiderivative of a finite sum `Σ c_q r^q`; the `q = -1` terms become a
/// power factor rather than `exp(c ln r)`. Returns `(exponent part, power factor)`.
fn integrate_power_sum(terms: &BTreeMap<Rational, f64>) -> (Expr, Expr) {
    let mut exponent = Vec::new();
    let mut factor = Expr::Const(1.0);
    for (&q, &c) in terms {
        let q1 = q + Rational::one();
        if q1.is_zero() {
            factor = Expr::var().powf(c);
        } else {
            let k = c / (*q1.numer() as f64 / *q1.denom() as f64);
            exponent.push(Expr::var().pow(q1) * k);
        }
    }
    (Expr::sum(exponent), factor)
}

/// Removes the first-derivative term. `antiderivative`, when given, is used
/// for `∫ B/(2A)`; otherwise sums of powers of `r` are integrated directly.
pub fn eliminate_first_derivative(
    ode: &SecondOrderODE,
    antiderivative: Option<&Expr>,
) -> Result<NormalForm> {
    let (a, b, c) = (&ode.a, &ode.b, &ode.c);
    let ratio = (b.clone() * (a.clone() * 2.0).recip()).simplify();
    let gauge = match antiderivative {
        Some(g) => g.clone().exp(),
        None => {
            let terms = ratio
                .power_coefficients()
                .ok_or_else(|| Error::NonIntegrableGauge(ratio.to_string_in("r")))?;
            let (exponent, factor) = integrate_power_sum(&terms);
            factor * exponent.exp()
        }
    }
    .simplify();
    let num = a.clone() * c.clone() * 4.0 - a.clone() * b.diff() * 2.0 + b.clone() * a.diff() * 2.0
        - b.clone().powi(2);
    let potential = (num * (a.clone().powi(2) * 4.0).recip()).simplify();
    Ok(NormalForm { gauge, potential })
}

/// `C₁ I₁ + C₋₁ I₋₁ + C₀(ℓ)` with `C₀(ℓ) = c_zero + c_zero_per_level · ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TermDecomposition {
    pub i_plus: Expr,
    pub i_minus: Expr,
    pub c_plus: f64,
    pub c_minus: f64,
    pub c_zero: f64,
    pub c_zero_per_level: f64,
}

impl TermDecomposition {
    pub fn c_zero_at(&self, ell: usize) -> f64 {
        self.c_zero + self.c_zero_per_level * ell as f64
    }

    /// `C_k` for `k = ±1`.
    pub fn c(&self, k: i8) -> f64 {
        if k > 0 {
            self.c_plus
        } else {
            self.c_minus
        }
    }

    pub fn i(&self, k: i8) -> &Expr {
        if k > 0 {
            &self.i_plus
        } else {
            &self.i_minus
        }
    }

    /// The decomposed expression `C₁I₁ + C₋₁I₋₁ + C₀(ℓ)` in `x`.
    pub fn reassemble(&self, ell: usize) -> Expr {
        (self.i_plus.clone() * self.c_plus + self.i_minus.clone() * self.c_minus
            + self.c_zero_at(ell))
        .simplify()
    }
}

/// For `σ = 1`: `V_m - λ_ℓ = α²/4 x² + αβ/2 x + β²/4 + α/2 - αm + αℓ`.
pub fn decompose(family: &FamilySpec, m: usize) -> Result<TermDecomposition> {
    if family.case() != SigmaCase::One {
        return Err(Error::Unimplemented(format!(
            "term decomposition for sigma = {}",
            family.case()
        )));
    }
    let (al, be) = (family.alpha(), family.beta());
    Ok(TermDecomposition {
        i_plus: Expr::var().powi(2),
        i_minus: Expr::var(),
        c_plus: al * al / 4.0,
        c_minus: al * be / 2.0,
        c_zero: be * be / 4.0 + al / 2.0 - al * m as f64,
        c_zero_per_level: al,
    })
}

/// `r ↦ x(r)` with `x'(r) = 1/√(I_k(x(r)))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionMap {
    pub k: i8,
    pub x_of_r: Expr,
    pub source: Interval,
    pub target: Interval,
}

/// Transformed equation with the coefficients left open:
/// `V(r) = C₋ₖ·minus_term + C₀·zero_term + correction`, energy `-C_k`,
/// solution `gauge · Ψ(x(r))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemTemplate {
    pub map: SubstitutionMap,
    /// `I₋ₖ(x(r)) / I_k(x(r))`.
    pub minus_term: Expr,
    /// `1 / I_k(x(r))`.
    pub zero_term: Expr,
    /// `-5/16 (I_k')² / I_k³ + 1/4 I_k'' / I_k²` at `x(r)`.
    pub correction: Expr,
    /// `I_k(x(r))^{1/4}`.
    pub gauge: Expr,
}

impl SystemTemplate {
    pub fn potential(&self, c_minus: f64, c_zero: f64) -> Expr {
        (self.minus_term.clone() * c_minus + self.zero_term.clone() * c_zero
            + self.correction.clone())
        .simplify()
    }
}

/// Solves `x' = 1/√(c x^p)` in closed form: `x = ((p/2+1) √c r)^{1/(p/2+1)}`.
fn solve_map(i_k: &Expr) -> Result<Expr> {
    let fail = || Error::MapNotClosedForm(i_k.to_string());
    let terms = i_k.power_coefficients().ok_or_else(fail)?;
    let (&p, &c) = match terms.iter().collect::<Vec<_>>().as_slice() {
        [single] => *single,
        _ => return Err(fail()),
    };
    let e = p / Rational::from_integer(2) + Rational::one();
    if c <= 0.0 || e.is_zero() {
        return Err(fail());
    }
    let ef = *e.numer() as f64 / *e.denom() as f64;
    Ok((Expr::var() * (ef * c.sqrt())).pow(e.recip()).simplify())
}

/// Builds the transformed equation for `k = ±1`. `x_of_r` may be supplied when
/// `I_k` is not a single power of `x`.
pub fn substitute_with(
    dec: &TermDecomposition,
    k: i8,
    x_of_r: Option<Expr>,
) -> Result<SystemTemplate> {
    assert!(k == 1 || k == -1, "k must be +1 or -1");
    let ik = dec.i(k).clone();
    let imk = dec.i(-k).clone();
    let x = match x_of_r {
        Some(x) => x.simplify(),
        None => solve_map(&ik)?,
    };
    let d1 = ik.diff();
    let d2 = d1.diff();
    let at = |e: &Expr| e.compose(&x);
    let (ik_r, imk_r, d1_r, d2_r) = (at(&ik), at(&imk), at(&d1), at(&d2));
    let minus_term = (imk_r * ik_r.clone().recip()).simplify();
    let zero_term = ik_r.clone().recip().simplify();
    let correction = (d1_r.powi(2) * ik_r.clone().powi(-3) * (-5.0 / 16.0)
        + d2_r * ik_r.clone().powi(-2) * 0.25)
        .simplify();
    let gauge = ik_r.pow(Rational::new(1, 4)).simplify();
    let inf = f64::INFINITY;
    Ok(SystemTemplate {
        map: SubstitutionMap {
            k,
            x_of_r: x,
            source: Interval::new(0.0, inf),
            target: Interval::new(0.0, inf),
        },
        minus_term,
        zero_term,
        correction,
        gauge,
    })
}

pub fn substitute(dec: &TermDecomposition, k: i8) -> Result<SystemTemplate> {
    substitute_with(dec, k, None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub family: Option<FamilySpec>,
    pub ell: usize,
    pub m: usize,
    pub k: i8,
}

/// `[-d²/dr² + V(r)] ψ = E ψ` on `(0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSystem {
    pub potential: Expr,
    pub energy: f64,
    pub gauge: Expr,
    pub map: SubstitutionMap,
    /// `gauge · Ψ(x(r))` when a source eigenfunction is known.
    pub psi: Option<Expr>,
    pub provenance: Provenance,
}

impl GeneratedSystem {
    /// `V - E`: the potential with the energy moved to the left, as in the
    /// zero-eigenvalue form of the source equation.
    pub fn shifted_potential(&self) -> Expr {
        (self.potential.clone() - self.energy).simplify()
    }
}

/// Smallest `r` used when evaluating generated systems.
pub const R_MIN: f64 = 1e-8;

/// Transforms `Ψ_{ℓ,m}` of a `σ = 1` family with the `k` substitution.
pub fn generate(family: &FamilySpec, ell: usize, m: usize, k: i8) -> Result<GeneratedSystem> {
    let dec = decompose(family, m)?;
    let t = substitute(&dec, k)?;
    let source = wavefunction(family, ell, m)?;
    let psi = (t.gauge.clone() * source.compose(&t.map.x_of_r)).simplify();
    Ok(GeneratedSystem {
        potential: t.potential(dec.c(-k), dec.c_zero_at(ell)),
        energy: -dec.c(k),
        gauge: t.gauge.clone(),
        map: t.map.clone(),
        psi: Some(psi),
        provenance: Provenance { family: Some(*family), ell, m, k },
    })
}

#[cfg(test)]
mod tests;
