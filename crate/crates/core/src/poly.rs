//! Polynomial solutions `Φ_ℓ` of `σ y'' + τ y' + λ_ℓ y = 0`, the Rodrigues
//! cross-check, and the classical Hermite / Laguerre / Jacobi correspondences.

use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::family::{FamilySpec, SigmaCase};

/// Dense power-basis polynomial; `coeffs[j]` multiplies `s^j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// Trailing zeros are dropped so the last stored coefficient is nonzero.
    pub fn new(mut coeffs: Vec<f64>) -> Poly {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: f64) -> Poly {
        Poly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| j as f64 * c)
                .collect(),
        )
    }

    pub fn nth_derivative(&self, m: usize) -> Poly {
        (0..m).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, k: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// `p(inner)` as an expression, Horner form.
    pub fn to_expr_of(&self, inner: &Expr) -> Expr {
        let mut acc = Expr::Const(0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * inner.clone() + *c;
        }
        acc.simplify()
    }

    pub fn to_expr(&self) -> Expr {
        self.to_expr_of(&Expr::Var)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let at = |p: &Poly, j: usize| p.coeffs.get(j).copied().unwrap_or(0.0);
        Poly::new((0..n).map(|j| at(self, j) + at(rhs, j)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// Monic degree-`ell` solution of `(a s² + b s + c) y'' + (α s + β) y' + λ_ℓ y = 0`
/// by downward coefficient recursion from `c_ℓ = 1`. No cutoff check.
pub fn solve_monic(sigma: (f64, f64, f64), alpha: f64, beta: f64, ell: usize) -> Result<Poly> {
    let (a, b, c) = sigma;
    let mut cs = vec![0.0; ell + 1];
    cs[ell] = 1.0;
    let l = ell as f64;
    for j in (0..ell).rev() {
        let jf = j as f64;
        // D_j = a(j(j-1) - ℓ(ℓ-1)) + α(j-ℓ), factored.
        let inner = a * (jf + l - 1.0) + alpha;
        let d = (jf - l) * inner;
        let scale = (a.abs() * (jf + l) + alpha.abs()).max(f64::MIN_POSITIVE);
        if inner.abs() <= 1e-13 * scale {
            return Err(Error::DegenerateRecursion { ell, j });
        }
        let next = cs[j + 1];
        let next2 = if j + 2 <= ell { cs[j + 2] } else { 0.0 };
        let num = (b * jf * (jf + 1.0) + beta * (jf + 1.0)) * next
            + c * (jf + 2.0) * (jf + 1.0) * next2;
        cs[j] = -num / d;
    }
    Ok(Poly::new(cs))
}

/// Monic `Φ_ℓ` for the family.
pub fn phi(family: &FamilySpec, ell: usize) -> Result<Poly> {
    family.check_degree(ell)?;
    solve_monic(family.case().coefficients(), family.alpha(), family.beta(), ell)
}

/// `σ p'' + τ p' + λ p` as a polynomial.
pub fn ode_residual(family: &FamilySpec, p: &Poly, lambda: f64) -> Poly {
    let (a, b, c) = family.case().coefficients();
    let sigma = Poly::new(vec![c, b, a]);
    let tau = Poly::new(vec![family.beta(), family.alpha()]);
    let t1 = &sigma * &p.nth_derivative(2);
    let t2 = &tau * &p.derivative();
    &(&t1 + &t2) + &p.scale(lambda)
}

/// Unnormalized Rodrigues polynomial `(1/ρ) dˡ/dsˡ [σˡ ρ]`, obtained by
/// symbolic differentiation and read back by a least-squares fit.
pub fn phi_rodrigues(family: &FamilySpec, ell: usize) -> Result<Poly> {
    family.check_degree(ell)?;
    let rho = family.weight();
    let target = (family.sigma_expr().powi(ell as i64) * rho.clone()).nth_diff(ell);
    let ratio = (target * rho.recip()).simplify().compile();
    let (lo, hi) = family.sample_window();
    let npts = 2 * ell + 12;
    let mut xs = Vec::with_capacity(npts);
    let mut ys = Vec::with_capacity(npts);
    for i in 0..npts {
        // Chebyshev points of the window.
        let t = (std::f64::consts::PI * (i as f64 + 0.5) / npts as f64).cos();
        let s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
        xs.push(s);
        ys.push(ratio.eval(s)?);
    }
    Ok(fit_poly(&xs, &ys, ell, 0.5 * (lo + hi), 0.5 * (hi - lo)))
}

/// Least-squares polynomial of degree `deg` through `(xs, ys)`, solved in the
/// scaled variable `t = (x - center)/half` by Householder QR, then re-expanded
/// in powers of `x`.
pub(crate) fn fit_poly(xs: &[f64], ys: &[f64], deg: usize, center: f64, half: f64) -> Poly {
    let (m, n) = (xs.len(), deg + 1);
    assert!(m >= n, "need at least deg+1 points");
    let mut a: Vec<Vec<f64>> = xs
        .iter()
        .map(|x| {
            let t = (x - center) / half;
            (0..n).map(|k| t.powi(k as i32)).collect()
        })
        .collect();
    let mut b = ys.to_vec();
    for k in 0..n {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for col in k..n {
            let dot: f64 = (k..m).map(|i| v[i - k] * a[i][col]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..m {
                a[i][col] -= f * v[i - k];
            }
        }
        let dot: f64 = (k..m).map(|i| v[i - k] * b[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..m {
            b[i] -= f * v[i - k];
        }
    }
    let mut t_coeffs = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * t_coeffs[j]).sum();
        t_coeffs[k] = if a[k][k] == 0.0 { 0.0 } else { (b[k] - s) / a[k][k] };
    }
    // Σ d_k ((x - center)/half)^k expanded in powers of x.
    let lin = Poly::new(vec![-center / half, 1.0 / half]);
    let mut out = Poly::zero();
    let mut pw = Poly::constant(1.0);
    for d in t_coeffs {
        out = &out + &pw.scale(d);
        pw = &pw * &lin;
    }
    out
}

/// Physicists' Hermite `H_n(x)` by `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, 2.0 * x);
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let p2 = 2.0 * x * p1 - 2.0 * k as f64 * p0;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Coefficients of `H_n`, same recurrence on polynomials.
pub fn hermite_poly(n: usize) -> Poly {
    let two_x = Poly::new(vec![0.0, 2.0]);
    let (mut p0, mut p1) = (Poly::constant(1.0), two_x.clone());
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let p2 = &(&two_x * &p1) + &p0.scale(-2.0 * k as f64);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Generalized Laguerre `L_n^{(a)}(x)` by
/// `(n+1) L_{n+1} = (2n+1+a-x) L_n - (n+a) L_{n-1}`.
pub fn laguerre(n: usize, a: f64, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, 1.0 + a - x);
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0 + a - x) * p1 - (k + a) * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Generalized binomial `C(z, k)`.
fn binom(z: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (z - i as f64) / (i + 1) as f64)
}

/// Jacobi `P_n^{(a,b)}(x)`. Uses the three-term recurrence, falling back to the
/// explicit binomial sum when a recurrence denominator vanishes (possible for
/// the negative parameters these families produce).
pub fn jacobi(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let explicit = || {
        let (u, v) = ((x - 1.0) / 2.0, (x + 1.0) / 2.0);
        (0..=n)
            .map(|k| binom(n as f64 + a, n - k) * binom(n as f64 + b, k) * u.powi(k as i32) * v.powi((n - k) as i32))
            .sum()
    };
    let (mut p0, mut p1) = (1.0, (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0);
    if n == 0 {
        return p0;
    }
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + a + b;
        let den = 2.0 * k * (k + a + b) * (c - 2.0);
        if den.abs() < 1e-12 {
            return explicit();
        }
        let p2 = ((c - 1.0) * (c * (c - 2.0) * x + a * a - b * b) * p1
            - 2.0 * (k + a - 1.0) * (k + b - 1.0) * c * p0)
            / den;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// The classical polynomial (up to a constant) that `Φ_ℓ` corresponds to.
pub fn classical_value(family: &FamilySpec, ell: usize, s: f64) -> Result<f64> {
    let (al, be) = (family.alpha(), family.beta());
    Ok(match family.case() {
        SigmaCase::One => hermite(ell, (-al / 2.0).sqrt() * s - be / (-2.0 * al).sqrt()),
        SigmaCase::S => laguerre(ell, be - 1.0, -al * s),
        SigmaCase::OneMinusS2 => jacobi(ell, -(al + be) / 2.0 - 1.0, (be - al) / 2.0 - 1.0, s),
        SigmaCase::S2Minus1 => jacobi(ell, (al - be) / 2.0 - 1.0, (al + be) / 2.0 - 1.0, -s),
        SigmaCase::S2 => {
            let l = ell as f64;
            (s / be).powi(ell as i32) * laguerre(ell, 1.0 - al - 2.0 * l, be / s)
        }
        SigmaCase::S2Plus1 => {
            return Err(Error::UnsupportedCorrespondence(family.case().label().into()))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalMatch {
    /// `classical ≈ constant · Φ_ℓ`.
    pub constant: f64,
    /// Max deviation relative to the largest classical value sampled.
    pub max_rel_dev: f64,
}

pub fn classical_match(family: &FamilySpec, ell: usize) -> Result<ClassicalMatch> {
    let p = phi(family, ell)?;
    let pts = family.sample_points(50);
    let cl = pts
        .iter()
        .map(|&s| classical_value(family, ell, s))
        .collect::<Result<Vec<_>>>()?;
    let ph: Vec<f64> = pts.iter().map(|&s| p.eval(s)).collect();
    let num: f64 = cl.iter().zip(&ph).map(|(c, f)| c * f).sum();
    let den: f64 = ph.iter().map(|f| f * f).sum();
    let constant = num / den;
    let scale = cl.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let dev = cl
        .iter()
        .zip(&ph)
        .fold(0.0_f64, |m, (c, f)| m.max((c - constant * f).abs()));
    Ok(ClassicalMatch { constant, max_rel_dev: dev / scale })
}
