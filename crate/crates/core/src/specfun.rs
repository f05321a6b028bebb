//! Associated functions `Φ_{ℓ,m} = κ^m Φ_ℓ^{(m)}`, the operator `𝓗_m` they
//! diagonalize, and the weighted scalar product.

use crate::error::{Error, Result};
use crate::expr::{CompiledExpr, Expr};
use crate::family::FamilySpec;
use crate::oracle::{integrate_window, Quadrature};
use crate::poly::{phi, Poly};

/// Value and first two derivatives at a point.
pub trait Jet {
    fn jet(&self, s: f64) -> [f64; 3];
}

impl<F: Fn(f64) -> [f64; 3]> Jet for F {
    fn jet(&self, s: f64) -> [f64; 3] {
        self(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecialFunction {
    family: FamilySpec,
    ell: usize,
    m: usize,
    poly_part: Poly,
}

pub fn special_function(family: &FamilySpec, ell: usize, m: usize) -> Result<SpecialFunction> {
    if m > ell {
        return Err(Error::OrderExceedsDegree { m, ell });
    }
    let p = phi(family, ell)?;
    Ok(SpecialFunction { family: *family, ell, m, poly_part: p.nth_derivative(m) })
}

impl SpecialFunction {
    pub fn family(&self) -> &FamilySpec {
        &self.family
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `Φ_ℓ^{(m)}`.
    pub fn poly_part(&self) -> &Poly {
        &self.poly_part
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.jet(s)[0]
    }

    /// `κ^m · poly_part` as an expression in `s`.
    pub fn to_expr(&self) -> Expr {
        (self.family.kappa_expr().powi(self.m as i64) * self.poly_part.to_expr()).simplify()
    }
}

impl Jet for SpecialFunction {
    /// Product rule on `σ^{m/2} · p`.
    fn jet(&self, s: f64) -> [f64; 3] {
        let p = &self.poly_part;
        let (p0, p1, p2) = (p.eval(s), p.derivative().eval(s), p.nth_derivative(2).eval(s));
        if self.m == 0 {
            return [p0, p1, p2];
        }
        let f = &self.family;
        let (sg, sg1) = (f.sigma(s), f.sigma_prime(s));
        let sg2 = 2.0 * f.case().coefficients().0;
        let h = self.m as f64 / 2.0;
        let g0 = sg.powf(h);
        let g1 = h * sg.powf(h - 1.0) * sg1;
        let g2 = h * (h - 1.0) * sg.powf(h - 2.0) * sg1 * sg1 + h * sg.powf(h - 1.0) * sg2;
        [g0 * p0, g1 * p0 + g0 * p1, g2 * p0 + 2.0 * g1 * p1 + g0 * p2]
    }
}

/// `𝓗_m f = -σ f'' - τ f' + M_m f` with the multiplication part
/// `M_m = m(m-2)/4 σ'²/σ + m τ σ'/(2σ) - m(m-2) σ''/2 - m τ'`.
#[derive(Debug, Clone)]
pub struct HmOperator {
    family: FamilySpec,
    m: usize,
    mult: Expr,
    mult_c: CompiledExpr,
}

impl HmOperator {
    pub fn new(family: &FamilySpec, m: usize) -> HmOperator {
        let sigma = family.sigma_expr();
        let tau = family.tau_expr();
        let s1 = sigma.diff();
        let s2 = s1.diff();
        let t1 = tau.diff();
        let mf = m as f64;
        let mult = (s1.clone().powi(2) * sigma.clone().recip() * (mf * (mf - 2.0) / 4.0)
            + tau * s1 * sigma.recip() * (mf / 2.0)
            - s2 * (mf * (mf - 2.0) / 2.0)
            - t1 * mf)
            .simplify();
        let mult_c = mult.compile();
        HmOperator { family: *family, m, mult, mult_c }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn multiplication_part(&self) -> &Expr {
        &self.mult
    }

    pub fn apply(&self, f: &impl Jet, s: f64) -> Result<f64> {
        let sg = self.family.sigma(s);
        if sg == 0.0 {
            return Err(Error::SingularPoint { at: s });
        }
        let [f0, f1, f2] = f.jet(s);
        let mult = if self.m == 0 { 0.0 } else { self.mult_c.eval(s)? };
        Ok(-sg * f2 - self.family.tau(s) * f1 + mult * f0)
    }
}

pub fn apply_hm(op: &HmOperator, f: &impl Jet, s: f64) -> Result<f64> {
    op.apply(f, s)
}

/// `⟨f, g⟩ = ∫ f g ρ ds` over the family interval.
pub fn scalar_product(
    family: &FamilySpec,
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
) -> Result<Quadrature> {
    let rho = family.weight().compile();
    let iv = family.interval();
    let q = integrate_window(
        |s| {
            let w = rho.eval_or_nan(s);
            if w == 0.0 {
                0.0
            } else {
                f(s) * g(s) * w
            }
        },
        iv.lo,
        iv.hi,
        family.sample_window(),
        1e-11,
    )?;
    if q.error_estimate > 1e-8 * q.value.abs().max(1.0) {
        return Err(Error::QuadratureNoConverge { estimate: q.error_estimate, nodes: q.nodes });
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::SigmaCase;

    fn fam(case: SigmaCase, a: f64, b: f64) -> FamilySpec {
        FamilySpec::new(case, a, b).unwrap()
    }

    #[test]
    fn special_function_examples() {
        let one = fam(SigmaCase::One, -2.0, 0.0);
        let f = special_function(&one, 2, 0).unwrap();
        assert_eq!(f.poly_part().coeffs(), &[-0.5, 0.0, 1.0]);
        let f = special_function(&one, 2, 1).unwrap();
        assert_eq!(f.poly_part().coeffs(), &[0.0, 2.0]);
        assert_eq!(f.eval(0.75), 1.5);
        let f = special_function(&fam(SigmaCase::S, -1.0, 1.0), 1, 1).unwrap();
        assert_eq!(f.poly_part().coeffs(), &[1.0]);
        assert!((f.eval(2.0) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            special_function(&one, 1, 2),
            Err(Error::OrderExceedsDegree { m: 2, ell: 1 })
        );
    }

    #[test]
    fn apply_hm_examples() {
        let one = fam(SigmaCase::One, -2.0, 0.0);
        let f = special_function(&one, 2, 0).unwrap();
        let v = apply_hm(&HmOperator::new(&one, 0), &f, 0.7).unwrap();
        assert!((v + 0.04).abs() < 1e-14, "{v}");
        let zero = |_: f64| [0.0; 3];
        assert_eq!(apply_hm(&HmOperator::new(&one, 3), &zero, 0.2).unwrap(), 0.0);
        let f = special_function(&one, 2, 1).unwrap();
        let v = apply_hm(&HmOperator::new(&one, 1), &f, 1.0).unwrap();
        assert!((v - 8.0).abs() < 1e-14);
        let s = fam(SigmaCase::S, -1.0, 1.0);
        assert_eq!(
            apply_hm(&HmOperator::new(&s, 1), &special_function(&s, 1, 1).unwrap(), 0.0),
            Err(Error::SingularPoint { at: 0.0 })
        );
    }

    #[test]
    fn multiplication_part_vanishes_at_m0() {
        let f = fam(SigmaCase::S2Plus1, -5.0, 1.0);
        assert_eq!(HmOperator::new(&f, 0).multiplication_part(), &Expr::Const(0.0));
    }

    #[test]
    fn jet_matches_symbolic_derivatives() {
        let f = fam(SigmaCase::OneMinusS2, -5.0, 1.0);
        let sf = special_function(&f, 4, 3).unwrap();
        let e = sf.to_expr();
        let (d1, d2) = (e.diff(), e.nth_diff(2));
        for s in [-0.7, 0.1, 0.55] {
            let j = sf.jet(s);
            for (a, b) in j.iter().zip([e.eval(s), d1.eval(s), d2.eval(s)]) {
                let b = b.unwrap();
                assert!((a - b).abs() < 1e-10 * b.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn scalar_product_examples() {
        let one = fam(SigmaCase::One, -2.0, 0.0);
        let q = scalar_product(&one, |_| 1.0, |_| 1.0).unwrap();
        // ρ = e^{-s²} here, so the integral is √π.
        assert!((q.value - std::f64::consts::PI.sqrt()).abs() < 1e-9, "{q:?}");
        let (p1, p2) = (phi(&one, 1).unwrap(), phi(&one, 2).unwrap());
        let q = scalar_product(&one, |s| p1.eval(s), |s| p2.eval(s)).unwrap();
        assert!(q.value.abs() < 1e-10);
        let lag = fam(SigmaCase::S, -1.0, 1.0);
        let (p0, p1) = (phi(&lag, 0).unwrap(), phi(&lag, 1).unwrap());
        let q = scalar_product(&lag, |s| p0.eval(s), |s| p1.eval(s)).unwrap();
        assert!(q.value.abs() < 1e-9, "{q:?}");
    }
}
