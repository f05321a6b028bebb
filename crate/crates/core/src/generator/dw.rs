//! The translated oscillator `-φ'' + (θ²x² + ρx + λ)φ = 0` pushed through
//! both substitutions.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::expr::{Expr, Rational};

use super::{substitute, GeneratedSystem, Provenance, TermDecomposition};

/// Runs the generic pipeline on the literal decomposition `I₁ = x²`,
/// `I₋₁ = x`, `C₁ = θ²`, `C₋₁ = ρ`, `C₀ = λ`. `which = 1` uses `x = √(2r)`
/// (`k = +1`), `which = 2` uses `x = (3r/2)^{2/3}` (`k = -1`). The result is
/// in zero-energy form: the constant `C_k` stays in the potential.
pub fn reproduce_dw(theta: f64, rho: f64, lambda: f64, which: u8) -> Result<GeneratedSystem> {
    let k: i8 = match which {
        1 => 1,
        2 => -1,
        _ => panic!("which must be 1 or 2"),
    };
    let dec = TermDecomposition {
        i_plus: Expr::var().powi(2),
        i_minus: Expr::var(),
        c_plus: theta * theta,
        c_minus: rho,
        c_zero: lambda,
        c_zero_per_level: 0.0,
    };
    let t = substitute(&dec, k)?;
    let potential = (t.potential(dec.c(-k), dec.c_zero) + dec.c(k)).simplify();
    Ok(GeneratedSystem {
        potential,
        energy: 0.0,
        gauge: t.gauge.clone(),
        map: t.map,
        psi: None,
        provenance: Provenance { family: None, ell: 0, m: 0, k },
    })
}

impl GeneratedSystem {
    /// `gauge · φ(x(r))` for a solution `φ(x)` of the source equation.
    pub fn transform(&self, source: &Expr) -> Expr {
        (self.gauge.clone() * source.compose(&self.map.x_of_r)).simplify()
    }
}

/// Coefficients read back from a transformed oscillator potential.
#[derive(Debug, Clone, PartialEq)]
pub struct DwPattern {
    /// Exponent of `r` to coefficient, as found in the potential.
    pub raw: BTreeMap<Rational, f64>,
    pub theta2: f64,
    pub rho: f64,
    pub lambda: f64,
    /// Coefficient of `r^{-2}`.
    pub correction: f64,
    /// Terms outside the expected pattern.
    pub unexpected: Vec<(Rational, f64)>,
}

/// Reads `θ², ρ, λ` and the `r^{-2}` coefficient back from `sys.potential`,
/// dividing out the constants of `1/√(2r)`, `1/(2r)` (which = 1) or
/// `(3r/2)^{2/3}`, `(2/(3r))^{2/3}` (which = 2). `None` if the potential is
/// not a sum of powers of `r`.
pub fn dw_pattern(sys: &GeneratedSystem) -> Option<DwPattern> {
    let raw = sys.potential.power_coefficients()?;
    let q = Rational::new;
    let get = |e: Rational| raw.get(&e).copied().unwrap_or(0.0);
    let (expected, theta2, rho, lambda) = if sys.map.k > 0 {
        (
            [q(-1, 2), q(-1, 1), q(-2, 1), q(0, 1)],
            get(q(0, 1)),
            get(q(-1, 2)) * 2f64.sqrt(),
            get(q(-1, 1)) * 2.0,
        )
    } else {
        (
            [q(2, 3), q(-2, 3), q(-2, 1), q(0, 1)],
            get(q(2, 3)) / 1.5f64.powf(2.0 / 3.0),
            get(q(0, 1)),
            get(q(-2, 3)) / (2.0f64 / 3.0).powf(2.0 / 3.0),
        )
    };
    let unexpected = raw
        .iter()
        .filter(|(e, _)| !expected.contains(e))
        .map(|(e, c)| (*e, *c))
        .collect();
    Some(DwPattern {
        theta2,
        rho,
        lambda,
        correction: get(q(-2, 1)),
        unexpected,
        raw,
    })
}
