//! Change of variable `dx/ds = 1/κ(s)` turning `𝓗_m` into `-d²/dx² + V_m(x)`.

use crate::error::{Error, Result};
use crate::expr::{DomainError, Expr, Func};
use crate::family::{FamilySpec, Interval, SigmaCase};
use crate::specfun::{special_function, HmOperator};

/// Closed-form `x(s)` and `s(x)` for one family. The `+` sign of `dx/ds` is
/// used throughout; the other sign only reflects `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableMap {
    pub case: SigmaCase,
    /// `x(s)`.
    pub forward: Expr,
    /// `s(x)`.
    pub inverse: Expr,
    /// Image of the family interval.
    pub image: Interval,
}

pub fn variable_map(family: &FamilySpec) -> VariableMap {
    let v = Expr::var;
    let inf = f64::INFINITY;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let (forward, inverse, image) = match family.case() {
        SigmaCase::One => (v(), v(), Interval::new(-inf, inf)),
        SigmaCase::S => (v().sqrt() * 2.0, v().powi(2) / 4.0, Interval::new(0.0, inf)),
        SigmaCase::OneMinusS2 => (
            v().func(Func::Asin),
            v().func(Func::Sin),
            Interval::new(-half_pi, half_pi),
        ),
        // acosh s = ln(s + √(s²-1))
        SigmaCase::S2Minus1 => (
            (v() + (v().powi(2) - 1.0).sqrt()).ln(),
            v().func(Func::Cosh),
            Interval::new(0.0, inf),
        ),
        SigmaCase::S2 => (v().ln(), v().exp(), Interval::new(-inf, inf)),
        // asinh s = ln(s + √(s²+1))
        SigmaCase::S2Plus1 => (
            (v() + (v().powi(2) + 1.0).sqrt()).ln(),
            v().func(Func::Sinh),
            Interval::new(-inf, inf),
        ),
    };
    VariableMap {
        case: family.case(),
        forward: forward.simplify(),
        inverse: inverse.simplify(),
        image,
    }
}

impl VariableMap {
    pub fn to_x(&self, s: f64) -> std::result::Result<f64, DomainError> {
        self.forward.eval(s)
    }

    pub fn to_s(&self, x: f64) -> std::result::Result<f64, DomainError> {
        self.inverse.eval(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub ell: usize,
    pub energy: f64,
    /// `Ψ_{ℓ,m}` as an expression in `x`.
    pub psi: Expr,
}

/// `-d²/dx² + V(x)` on `interval`, with the eigenpairs known in closed form.
#[derive(Debug, Clone)]
pub struct SchrodingerSystem {
    pub family: FamilySpec,
    pub m: usize,
    pub potential: Expr,
    pub interval: Interval,
    pub eigenpairs: Vec<Eigenpair>,
}

/// `η = (κρ)^{-1/2}` in `s`.
fn eta(family: &FamilySpec) -> Expr {
    (family.kappa_expr() * family.weight()).pow(crate::expr::Rational::new(-1, 2)).simplify()
}

/// `V_m` in the `s` variable, before the change of variable.
pub fn potential_in_s(family: &FamilySpec, m: usize) -> Expr {
    let eta = eta(family);
    let inv = eta.clone().recip();
    let d1 = (eta.diff() * inv.clone()).simplify();
    let d2 = (eta.nth_diff(2) * inv).simplify();
    let mult = HmOperator::new(family, m).multiplication_part().clone();
    (mult - family.sigma_expr() * d2 - family.tau_expr() * d1).simplify()
}

fn check_order(family: &FamilySpec, m: usize) -> Result<()> {
    family.check_degree(m)
}

/// `V_m(x)` with no eigenpairs attached.
pub fn potential(family: &FamilySpec, m: usize) -> Result<SchrodingerSystem> {
    check_order(family, m)?;
    let map = variable_map(family);
    Ok(SchrodingerSystem {
        family: *family,
        m,
        potential: potential_in_s(family, m).compose(&map.inverse),
        interval: map.image,
        eigenpairs: Vec::new(),
    })
}

/// `Ψ_{ℓ,m}(x) = √(κρ) Φ_{ℓ,m}` at `s = s(x)`.
pub fn wavefunction(family: &FamilySpec, ell: usize, m: usize) -> Result<Expr> {
    let sf = special_function(family, ell, m)?;
    let map = variable_map(family);
    let in_s = ((family.kappa_expr() * family.weight()).sqrt() * sf.to_expr()).simplify();
    Ok(in_s.compose(&map.inverse))
}

/// `α²/4 x² + αβ/2 x + β²/4 + α/2 - αm`, the closed form for `σ = 1`.
pub fn oscillator_potential(alpha: f64, beta: f64, m: usize) -> Expr {
    let x = Expr::var;
    (x().powi(2) * (alpha * alpha / 4.0) + x() * (alpha * beta / 2.0)
        + (beta * beta / 4.0 + alpha / 2.0 - alpha * m as f64))
        .simplify()
}

impl SchrodingerSystem {
    /// Attaches `(λ_ℓ, Ψ_{ℓ,m})` for each `ℓ` in `ells` (each must satisfy `m ≤ ℓ < Λ`).
    pub fn with_eigenpairs(mut self, ells: impl IntoIterator<Item = usize>) -> Result<Self> {
        for ell in ells {
            let energy = self.family.eigenvalue(ell)?;
            let psi = wavefunction(&self.family, ell, self.m)?;
            self.eigenpairs.push(Eigenpair { ell, energy, psi });
        }
        Ok(self)
    }

    /// Finite window inside the interval where the eigenfunctions live: the
    /// image of the family's sample window.
    pub fn window(&self) -> (f64, f64) {
        let map = variable_map(&self.family);
        let (lo, hi) = self.family.sample_window();
        let a = map.to_x(lo).unwrap_or(self.interval.lo);
        let b = map.to_x(hi).unwrap_or(self.interval.hi);
        (a, b)
    }

    /// `n` grid points over `window()`, pulled in from finite endpoints by
    /// `1e-6` of the span.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let (a, b) = self.window();
        let eps = 1e-6 * (b - a);
        let a = if a <= self.interval.lo { self.interval.lo + eps } else { a };
        let b = if b >= self.interval.hi { self.interval.hi - eps } else { b };
        crate::oracle::linspace(a, b, n)
    }

    /// `-ψ'' + Vψ - λψ` at `x` for the stored pair `idx`.
    pub fn residual(&self, idx: usize, x: f64) -> Result<f64> {
        let pair = &self.eigenpairs[idx];
        residual_at(&self.potential, pair.energy, &pair.psi, x)
    }
}

pub(crate) fn residual_at(potential: &Expr, energy: f64, psi: &Expr, x: f64) -> Result<f64> {
    let v = potential.eval(x).map_err(|e| match e {
        DomainError::Pole { .. } => Error::SingularPoint { at: x },
        e => e.into(),
    })?;
    if !v.is_finite() {
        return Err(Error::SingularPoint { at: x });
    }
    let p = psi.eval(x)?;
    Ok(-psi.nth_diff(2).eval(x)? + v * p - energy * p)
}
