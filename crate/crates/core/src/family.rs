//! The six hypergeometric-type families `σ y'' + τ y' + λ y = 0` with
//! `deg σ ≤ 2`, `τ(s) = α s + β`, their weights, intervals and cutoffs.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Expr, Func};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SigmaCase {
    One,
    S,
    OneMinusS2,
    S2Minus1,
    S2,
    S2Plus1,
}

impl SigmaCase {
    pub const ALL: [SigmaCase; 6] = [
        SigmaCase::One,
        SigmaCase::S,
        SigmaCase::OneMinusS2,
        SigmaCase::S2Minus1,
        SigmaCase::S2,
        SigmaCase::S2Plus1,
    ];

    /// `σ` as printed: `1`, `s`, `1-s^2`, ...
    pub fn label(self) -> &'static str {
        match self {
            SigmaCase::One => "1",
            SigmaCase::S => "s",
            SigmaCase::OneMinusS2 => "1-s^2",
            SigmaCase::S2Minus1 => "s^2-1",
            SigmaCase::S2 => "s^2",
            SigmaCase::S2Plus1 => "s^2+1",
        }
    }

    /// Command-line spelling.
    pub fn cli_name(self) -> &'static str {
        match self {
            SigmaCase::One => "one",
            SigmaCase::S => "s",
            SigmaCase::OneMinusS2 => "one-minus-s2",
            SigmaCase::S2Minus1 => "s2-minus-one",
            SigmaCase::S2 => "s2",
            SigmaCase::S2Plus1 => "s2-plus-one",
        }
    }

    pub fn from_name(name: &str) -> Option<SigmaCase> {
        let n = name.trim().to_ascii_lowercase().replace(' ', "");
        SigmaCase::ALL
            .into_iter()
            .find(|c| c.cli_name() == n || c.label() == n)
    }

    /// `(a, b, c)` with `σ(s) = a s² + b s + c`.
    pub fn coefficients(self) -> (f64, f64, f64) {
        match self {
            SigmaCase::One => (0.0, 0.0, 1.0),
            SigmaCase::S => (0.0, 1.0, 0.0),
            SigmaCase::OneMinusS2 => (-1.0, 0.0, 1.0),
            SigmaCase::S2Minus1 => (1.0, 0.0, -1.0),
            SigmaCase::S2 => (1.0, 0.0, 0.0),
            SigmaCase::S2Plus1 => (1.0, 0.0, 1.0),
        }
    }

    pub fn interval(self) -> Interval {
        let inf = f64::INFINITY;
        let (lo, hi) = match self {
            SigmaCase::One | SigmaCase::S2Plus1 => (-inf, inf),
            SigmaCase::S | SigmaCase::S2 => (0.0, inf),
            SigmaCase::OneMinusS2 => (-1.0, 1.0),
            SigmaCase::S2Minus1 => (1.0, inf),
        };
        Interval { lo, hi }
    }

    pub fn constraint(self) -> &'static str {
        match self {
            SigmaCase::One | SigmaCase::S2Plus1 => "alpha < 0",
            SigmaCase::S | SigmaCase::S2 => "alpha < 0 and beta > 0",
            SigmaCase::OneMinusS2 => "alpha < beta < -alpha",
            SigmaCase::S2Minus1 => "-beta < alpha < 0",
        }
    }

    fn admits(self, alpha: f64, beta: f64) -> bool {
        match self {
            SigmaCase::One | SigmaCase::S2Plus1 => alpha < 0.0,
            SigmaCase::S | SigmaCase::S2 => alpha < 0.0 && beta > 0.0,
            SigmaCase::OneMinusS2 => alpha < beta && beta < -alpha,
            SigmaCase::S2Minus1 => -beta < alpha && alpha < 0.0,
        }
    }

    pub fn has_finite_cutoff(self) -> bool {
        matches!(self, SigmaCase::S2Minus1 | SigmaCase::S2 | SigmaCase::S2Plus1)
    }
}

impl fmt::Display for SigmaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Open interval; endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Interval {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    Unbounded,
    /// `Λ = (1-α)/2`; `max_degree` is the largest `ℓ` with `ℓ < Λ`.
    Bounded { lambda: f64, max_degree: usize },
}

impl Cutoff {
    pub fn admits(&self, ell: usize) -> bool {
        match *self {
            Cutoff::Unbounded => true,
            Cutoff::Bounded { max_degree, .. } => ell <= max_degree,
        }
    }

    pub fn max_degree(&self) -> Option<usize> {
        match *self {
            Cutoff::Unbounded => None,
            Cutoff::Bounded { max_degree, .. } => Some(max_degree),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilySpec {
    case: SigmaCase,
    alpha: f64,
    beta: f64,
}

impl FamilySpec {
    pub fn new(case: SigmaCase, alpha: f64, beta: f64) -> Result<FamilySpec> {
        if !(alpha.is_finite() && beta.is_finite() && case.admits(alpha, beta)) {
            return Err(Error::InvalidParameters {
                case: case.label().to_string(),
                constraint: case.constraint().to_string(),
            });
        }
        Ok(FamilySpec { case, alpha, beta })
    }

    /// Builds without checking the parameter constraints. Only for probing
    /// the polynomial recursion outside the admissible region.
    pub fn new_unchecked(case: SigmaCase, alpha: f64, beta: f64) -> FamilySpec {
        FamilySpec { case, alpha, beta }
    }

    pub fn case(&self) -> SigmaCase {
        self.case
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn interval(&self) -> Interval {
        self.case.interval()
    }

    pub fn sigma(&self, s: f64) -> f64 {
        let (a, b, c) = self.case.coefficients();
        (a * s + b) * s + c
    }

    pub fn sigma_prime(&self, s: f64) -> f64 {
        let (a, b, _) = self.case.coefficients();
        2.0 * a * s + b
    }

    pub fn tau(&self, s: f64) -> f64 {
        self.alpha * s + self.beta
    }

    pub fn sigma_expr(&self) -> Expr {
        let (a, b, c) = self.case.coefficients();
        (Expr::var().powi(2) * a + Expr::var() * b + c).simplify()
    }

    pub fn tau_expr(&self) -> Expr {
        (Expr::var() * self.alpha + self.beta).simplify()
    }

    /// `κ = √σ`.
    pub fn kappa_expr(&self) -> Expr {
        self.sigma_expr().sqrt().simplify()
    }

    /// The weight `ρ` with `(σρ)' = τρ`.
    pub fn weight(&self) -> Expr {
        let (al, be) = (self.alpha, self.beta);
        let s = Expr::var;
        let w = match self.case {
            SigmaCase::One => (s().powi(2) * (al / 2.0) + s() * be).exp(),
            SigmaCase::S => s().powf(be - 1.0) * (s() * al).exp(),
            SigmaCase::OneMinusS2 => {
                (s() + 1.0).powf(-(al - be) / 2.0 - 1.0)
                    * (-s() + 1.0).powf(-(al + be) / 2.0 - 1.0)
            }
            SigmaCase::S2Minus1 => {
                (s() + 1.0).powf((al - be) / 2.0 - 1.0) * (s() - 1.0).powf((al + be) / 2.0 - 1.0)
            }
            SigmaCase::S2 => s().powf(al - 2.0) * (s().recip() * -be).exp(),
            SigmaCase::S2Plus1 => {
                (s().powi(2) + 1.0).powf(al / 2.0 - 1.0) * (s().func(Func::Atan) * be).exp()
            }
        };
        w.simplify()
    }

    pub fn cutoff(&self) -> Cutoff {
        if !self.case.has_finite_cutoff() {
            return Cutoff::Unbounded;
        }
        let lambda = (1.0 - self.alpha) / 2.0;
        Cutoff::Bounded {
            lambda,
            max_degree: (lambda.ceil() - 1.0).max(0.0) as usize,
        }
    }

    pub fn check_degree(&self, ell: usize) -> Result<()> {
        match self.cutoff() {
            Cutoff::Bounded { max_degree, .. } if ell > max_degree => {
                Err(Error::DegreeBeyondCutoff { ell, max_degree })
            }
            _ => Ok(()),
        }
    }

    /// `λ_ℓ = -a ℓ(ℓ-1) - α ℓ`.
    pub fn eigenvalue(&self, ell: usize) -> Result<f64> {
        self.check_degree(ell)?;
        Ok(self.eigenvalue_unchecked(ell))
    }

    pub(crate) fn eigenvalue_unchecked(&self, ell: usize) -> f64 {
        let (a, _, _) = self.case.coefficients();
        let l = ell as f64;
        -a * l * (l - 1.0) - self.alpha * l
    }

    /// Finite window holding the bulk of the weight, used to seed quadrature
    /// and to place sample points. Always strictly inside the interval.
    pub fn sample_window(&self) -> (f64, f64) {
        let (al, be) = (self.alpha, self.beta);
        match self.case {
            SigmaCase::One => {
                let mu = -be / al;
                let w = 6.0 / (-al).sqrt();
                (mu - w, mu + w)
            }
            SigmaCase::S => (1e-3, (be + 10.0 * be.sqrt() + 20.0) / -al),
            SigmaCase::OneMinusS2 => (-1.0 + 1e-3, 1.0 - 1e-3),
            SigmaCase::S2Minus1 => (1.0 + 1e-3, 30.0),
            SigmaCase::S2 => (be / 40.0, 30.0 * be.max(1.0)),
            SigmaCase::S2Plus1 => (-20.0, 20.0),
        }
    }

    /// `n` evenly spaced points strictly inside `sample_window`.
    pub fn sample_points(&self, n: usize) -> Vec<f64> {
        let (lo, hi) = self.sample_window();
        (0..n)
            .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64)
            .collect()
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma={} alpha={} beta={}", self.case, self.alpha, self.beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(case: SigmaCase, a: f64, b: f64) -> FamilySpec {
        FamilySpec::new(case, a, b).unwrap()
    }

    pub(crate) fn representative() -> Vec<FamilySpec> {
        vec![
            fam(SigmaCase::One, -2.0, 1.0),
            fam(SigmaCase::S, -1.0, 2.0),
            fam(SigmaCase::OneMinusS2, -5.0, 1.0),
            fam(SigmaCase::S2Minus1, -3.0, 7.0),
            fam(SigmaCase::S2, -7.0, 1.0),
            fam(SigmaCase::S2Plus1, -5.0, 1.0),
        ]
    }

    #[test]
    fn eigenvalue_examples() {
        let one = fam(SigmaCase::One, -2.0, 0.0);
        assert_eq!(one.eigenvalue(0).unwrap(), 0.0);
        assert_eq!(one.eigenvalue(3).unwrap(), 6.0);
        assert_eq!(fam(SigmaCase::S2, -7.0, 1.0).eigenvalue(2).unwrap(), 12.0);
    }

    #[test]
    fn cutoff_examples() {
        assert_eq!(fam(SigmaCase::One, -3.0, 0.0).cutoff(), Cutoff::Unbounded);
        assert_eq!(
            fam(SigmaCase::S2, -7.0, 1.0).cutoff(),
            Cutoff::Bounded { lambda: 4.0, max_degree: 3 }
        );
        assert_eq!(
            fam(SigmaCase::S2Plus1, -1.0, 0.0).cutoff(),
            Cutoff::Bounded { lambda: 1.0, max_degree: 0 }
        );
        assert_eq!(
            fam(SigmaCase::S2, -7.0, 1.0).eigenvalue(4),
            Err(Error::DegreeBeyondCutoff { ell: 4, max_degree: 3 })
        );
        for f in representative() {
            let bounded = matches!(f.cutoff(), Cutoff::Bounded { .. });
            assert_eq!(bounded, f.case().has_finite_cutoff());
        }
    }

    #[test]
    fn weight_examples() {
        let w = fam(SigmaCase::S, -1.0, 1.0).weight();
        for s in [0.1, 1.0, 3.0] {
            assert!((w.eval(s).unwrap() - (-s).exp()).abs() < 1e-15);
        }
        let w = fam(SigmaCase::S2Plus1, -3.0, 0.0).weight();
        for s in [-2.0f64, 0.0, 1.5] {
            let want = (1.0 + s * s).powf(-2.5);
            assert!((w.eval(s).unwrap() - want).abs() < 1e-15 * want.max(1.0));
        }
        let (al, be) = (-1.5, 0.4);
        let w = fam(SigmaCase::One, al, be).weight();
        for s in [-1.0, 0.3, 2.0] {
            let want = (al * s * s / 2.0 + be * s).exp();
            assert!((w.eval(s).unwrap() - want).abs() < 1e-14);
        }
    }

    #[test]
    fn constraints_are_enforced() {
        let bad = [
            (SigmaCase::One, 0.0, 0.0),
            (SigmaCase::S, -1.0, 0.0),
            (SigmaCase::OneMinusS2, -1.0, 1.0),
            (SigmaCase::S2Minus1, -3.0, 1.0),
            (SigmaCase::S2, -1.0, -1.0),
            (SigmaCase::S2Plus1, 1.0, 0.0),
        ];
        for (case, a, b) in bad {
            match FamilySpec::new(case, a, b) {
                Err(Error::InvalidParameters { constraint, .. }) => {
                    assert_eq!(constraint, case.constraint())
                }
                other => panic!("{case}: {other:?}"),
            }
        }
    }

    #[test]
    fn pearson_identity_and_positivity() {
        for f in representative() {
            let (sigma, tau, rho) = (f.sigma_expr(), f.tau_expr(), f.weight());
            let lhs = (sigma.clone() * rho.clone()).diff();
            let (lo, hi) = f.sample_window();
            for i in 0..200 {
                let s = lo + (hi - lo) * (i as f64 + 0.5) / 200.0;
                let r = rho.eval(s).unwrap();
                assert!(f.sigma(s) > 0.0 && r > 0.0, "{f} at {s}");
                let tr = tau.eval(s).unwrap() * r;
                let d = lhs.eval(s).unwrap();
                assert!((d - tr).abs() <= 1e-10 * (1.0 + tr.abs()), "{f} at {s}: {d} vs {tr}");
            }
        }
    }

    #[test]
    fn boundary_decay() {
        for f in representative() {
            let sr = (f.sigma_expr() * f.weight()).simplify();
            let iv = f.interval();
            for (end, toward_hi) in [(iv.lo, false), (iv.hi, true)] {
                let seq: Vec<f64> = (1..=60)
                    .map(|k| {
                        let s = if end.is_infinite() {
                            end.signum() * 2f64.powi(k)
                        } else if toward_hi {
                            end - 2f64.powi(-k)
                        } else {
                            end + 2f64.powi(-k)
                        };
                        sr.eval(s).unwrap_or(0.0).abs()
                    })
                    .collect();
                // Skip the transient before the tail sets in.
                let tail: Vec<f64> = seq.iter().copied().skip_while(|v| *v >= seq[0]).collect();
                let tail = if tail.len() < seq.len() / 2 { &seq[..] } else { &tail[..] };
                assert!(tail.windows(2).all(|w| w[1] <= w[0]), "{f} at {end}");
                assert!(tail[tail.len() - 1] < 1e-6 * tail[0], "{f} at {end}");
            }
        }
    }

    #[test]
    fn eigenvalues_increase() {
        for f in representative() {
            let top = f.cutoff().max_degree().unwrap_or(20).min(20);
            let ev: Vec<f64> = (0..=top).map(|l| f.eigenvalue(l).unwrap()).collect();
            assert!(ev.windows(2).all(|w| w[1] > w[0]), "{f}");
        }
    }
}
