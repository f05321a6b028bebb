//! A small expression tree over a single real variable.
//!
//! Nodes are constants, the variable, n-ary sums and products, rational
//! powers, `exp`, and a handful of named elementary functions used by the
//! change-of-variable maps. Trees are immutable values; every transformation
//! returns a new tree.
//!
//! The variable has no intrinsic name. Printing picks one (`x` by default),
//! and the parser accepts `x`, `r` or `s` interchangeably.

mod compiled;
mod parse;
mod print;
mod simplify;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub use compiled::CompiledExpr;
pub use num_rational::Rational64 as Rational;
pub use parse::{parse, ParseError};

use num_traits::{One, Zero};

/// Named elementary functions. Only the ones needed by the closed-form
/// variable maps (arcsin, sinh/cosh, log) and the `s^2+1` weight (arctan).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Ln,
    Sin,
    Cos,
    Asin,
    Sinh,
    Cosh,
    Atan,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Ln,
        Func::Sin,
        Func::Cos,
        Func::Asin,
        Func::Sinh,
        Func::Cosh,
        Func::Atan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Asin => "asin",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Atan => "atan",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "log" => Some(Func::Ln),
            _ => Func::ALL.iter().copied().find(|f| f.name() == name),
        }
    }

    pub fn apply(self, u: f64) -> Result<f64, DomainError> {
        match self {
            Func::Ln if u <= 0.0 => Err(DomainError::OutOfDomain { func: self, arg: u }),
            Func::Ln => Ok(u.ln()),
            Func::Sin => Ok(u.sin()),
            Func::Cos => Ok(u.cos()),
            Func::Asin if !(-1.0..=1.0).contains(&u) => {
                Err(DomainError::OutOfDomain { func: self, arg: u })
            }
            Func::Asin => Ok(u.asin()),
            Func::Sinh => Ok(u.sinh()),
            Func::Cosh => Ok(u.cosh()),
            Func::Atan => Ok(u.atan()),
        }
    }

    /// f'(u) as an expression in `u`.
    fn derivative_at(self, u: &Expr) -> Expr {
        let half = Rational::new(-1, 2);
        match self {
            Func::Ln => u.clone().pow(Rational::from_integer(-1)),
            Func::Sin => u.clone().func(Func::Cos),
            Func::Cos => -u.clone().func(Func::Sin),
            Func::Asin => (Expr::from(1.0) - u.clone().powi(2)).pow(half),
            Func::Sinh => u.clone().func(Func::Cosh),
            Func::Cosh => u.clone().func(Func::Sinh),
            Func::Atan => (Expr::from(1.0) + u.clone().powi(2)).powi(-1),
        }
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Pointwise evaluation failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("negative base {base} raised to non-integer power {exponent}")]
    NegativeBase { base: f64, exponent: Rational },
    #[error("pole: zero raised to negative power {exponent}")]
    Pole { exponent: Rational },
    #[error("{func} is undefined at {arg}")]
    OutOfDomain { func: Func, arg: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, Rational),
    Exp(Box<Expr>),
    Func(Func, Box<Expr>),
    /// `outer(inner(v))`. Eliminated by [`Expr::simplify`] and [`Expr::compose`].
    Compose(Box<Expr>, Box<Expr>),
}

pub(crate) fn pow_rational(base: f64, q: Rational) -> Result<f64, DomainError> {
    let (n, d) = (*q.numer(), *q.denom());
    if base == 0.0 && n < 0 {
        return Err(DomainError::Pole { exponent: q });
    }
    if d == 1 {
        return Ok(match i32::try_from(n) {
            Ok(n) => base.powi(n),
            Err(_) => base.powf(n as f64),
        });
    }
    if base < 0.0 {
        return Err(DomainError::NegativeBase { base, exponent: q });
    }
    Ok(match d {
        2 => base.sqrt().powi(n as i32),
        3 => base.cbrt().powi(n as i32),
        _ => base.powf(n as f64 / d as f64),
    })
}

/// Best small-denominator rational equal to `p`, if `p` is exactly one.
pub(crate) fn exact_rational(p: f64) -> Option<Rational> {
    if !p.is_finite() {
        return None;
    }
    for d in 1..=720_i64 {
        let scaled = p * d as f64;
        if scaled.abs() < 1e15 && scaled == scaled.round() {
            return Some(Rational::new(scaled as i64, d));
        }
    }
    None
}

impl Expr {
    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    /// Flattening sum with constant folding. Does not collect like terms.
    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
        let mut out = Vec::new();
        let mut c = 0.0;
        for t in terms {
            match t {
                Expr::Const(v) => c += v,
                Expr::Add(ts) => {
                    for t in ts {
                        match t {
                            Expr::Const(v) => c += v,
                            t => out.push(t),
                        }
                    }
                }
                t => out.push(t),
            }
        }
        if c != 0.0 || out.is_empty() {
            out.insert(0, Expr::Const(c));
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Expr::Add(out)
        }
    }

    /// Flattening product with constant folding. Does not merge powers.
    pub fn product(factors: impl IntoIterator<Item = Expr>) -> Expr {
        let mut out = Vec::new();
        let mut c = 1.0;
        for f in factors {
            match f {
                Expr::Const(v) => c *= v,
                Expr::Mul(fs) => {
                    for f in fs {
                        match f {
                            Expr::Const(v) => c *= v,
                            f => out.push(f),
                        }
                    }
                }
                f => out.push(f),
            }
        }
        if c == 0.0 {
            return Expr::Const(0.0);
        }
        if c != 1.0 || out.is_empty() {
            out.insert(0, Expr::Const(c));
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Expr::Mul(out)
        }
    }

    pub fn pow(self, q: Rational) -> Expr {
        if q.is_zero() {
            return Expr::Const(1.0);
        }
        if q.is_one() {
            return self;
        }
        match self {
            Expr::Const(c) => match pow_rational(c, q) {
                Ok(v) => Expr::Const(v),
                Err(_) => Expr::Pow(Box::new(Expr::Const(c)), q),
            },
            e => Expr::Pow(Box::new(e), q),
        }
    }

    pub fn powi(self, n: i64) -> Expr {
        self.pow(Rational::from_integer(n))
    }

    pub fn sqrt(self) -> Expr {
        self.pow(Rational::new(1, 2))
    }

    pub fn recip(self) -> Expr {
        self.powi(-1)
    }

    /// `self^p` for a real exponent: a rational power when `p` is exactly a
    /// small-denominator rational, otherwise `exp(p ln self)`.
    pub fn powf(self, p: f64) -> Expr {
        match exact_rational(p) {
            Some(q) => self.pow(q),
            None => (self.func(Func::Ln) * p).exp(),
        }
    }

    pub fn exp(self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(c.exp()),
            e => Expr::Exp(Box::new(e)),
        }
    }

    pub fn func(self, f: Func) -> Expr {
        Expr::Func(f, Box::new(self))
    }

    pub fn ln(self) -> Expr {
        self.func(Func::Ln)
    }

    pub fn is_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64, DomainError> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Add(ts) => {
                let mut acc = 0.0;
                for t in ts {
                    acc += t.eval(x)?;
                }
                acc
            }
            Expr::Mul(fs) => {
                let mut acc = 1.0;
                for f in fs {
                    acc *= f.eval(x)?;
                }
                acc
            }
            Expr::Pow(b, q) => pow_rational(b.eval(x)?, *q)?,
            Expr::Exp(u) => u.eval(x)?.exp(),
            Expr::Func(f, u) => f.apply(u.eval(x)?)?,
            Expr::Compose(outer, inner) => outer.eval(inner.eval(x)?)?,
        })
    }

    /// Replace the variable by `inner` without simplifying.
    pub fn substitute(&self, inner: &Expr) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var => inner.clone(),
            Expr::Add(ts) => Expr::Add(ts.iter().map(|t| t.substitute(inner)).collect()),
            Expr::Mul(fs) => Expr::Mul(fs.iter().map(|f| f.substitute(inner)).collect()),
            Expr::Pow(b, q) => Expr::Pow(Box::new(b.substitute(inner)), *q),
            Expr::Exp(u) => Expr::Exp(Box::new(u.substitute(inner))),
            Expr::Func(f, u) => Expr::Func(*f, Box::new(u.substitute(inner))),
            Expr::Compose(o, i) => o.substitute(&i.substitute(inner)),
        }
    }

    /// `self ∘ inner`, simplified, with no `Compose` node left.
    pub fn compose(&self, inner: &Expr) -> Expr {
        self.substitute(inner).simplify()
    }

    /// Symbolic derivative with respect to the variable, simplified.
    pub fn diff(&self) -> Expr {
        self.diff_raw().simplify()
    }

    /// n-th derivative, simplifying after every step.
    pub fn nth_diff(&self, n: usize) -> Expr {
        let mut e = self.simplify();
        for _ in 0..n {
            e = e.diff();
        }
        e
    }

    fn diff_raw(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var => Expr::Const(1.0),
            Expr::Add(ts) => Expr::sum(ts.iter().map(Expr::diff_raw)),
            Expr::Mul(fs) => Expr::sum((0..fs.len()).map(|i| {
                Expr::product(fs.iter().enumerate().map(|(j, f)| {
                    if i == j {
                        f.diff_raw()
                    } else {
                        f.clone()
                    }
                }))
            })),
            Expr::Pow(b, q) => Expr::product([
                Expr::Const(*q.numer() as f64 / *q.denom() as f64),
                (**b).clone().pow(q - Rational::one()),
                b.diff_raw(),
            ]),
            Expr::Exp(u) => Expr::product([self.clone(), u.diff_raw()]),
            Expr::Func(f, u) => Expr::product([f.derivative_at(u), u.diff_raw()]),
            Expr::Compose(o, i) => o.substitute(i).diff_raw(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + match self {
            Expr::Const(_) | Expr::Var => 0,
            Expr::Add(v) | Expr::Mul(v) => v.iter().map(Expr::size).sum(),
            Expr::Pow(b, _) => b.size(),
            Expr::Exp(u) | Expr::Func(_, u) => u.size(),
            Expr::Compose(o, i) => o.size() + i.size(),
        }
    }

    pub fn compile(&self) -> CompiledExpr {
        CompiledExpr::new(self)
    }

    /// Reads a simplified sum of monomials `Σ c_q v^q` back as a map from
    /// exponent to coefficient. Returns `None` if any term is not of that shape.
    pub fn power_coefficients(&self) -> Option<BTreeMap<Rational, f64>> {
        type Terms = BTreeMap<Rational, f64>;
        fn times(a: &Terms, b: &Terms) -> Terms {
            let mut out = Terms::new();
            for (qa, ca) in a {
                for (qb, cb) in b {
                    *out.entry(qa + qb).or_insert(0.0) += ca * cb;
                }
            }
            out
        }
        fn terms(e: &Expr) -> Option<Terms> {
            match e {
                Expr::Const(c) => Some(Terms::from([(Rational::zero(), *c)])),
                Expr::Var => Some(Terms::from([(Rational::one(), 1.0)])),
                Expr::Add(ts) => {
                    let mut out = Terms::new();
                    for t in ts {
                        for (q, c) in terms(t)? {
                            *out.entry(q).or_insert(0.0) += c;
                        }
                    }
                    Some(out)
                }
                Expr::Mul(fs) => fs
                    .iter()
                    .try_fold(Terms::from([(Rational::zero(), 1.0)]), |acc, f| {
                        Some(times(&acc, &terms(f)?))
                    }),
                Expr::Pow(b, q) => {
                    let inner = terms(b)?;
                    if inner.len() == 1 {
                        let (iq, c) = inner.into_iter().next().unwrap();
                        if c <= 0.0 && !q.is_integer() {
                            return None;
                        }
                        return Some(Terms::from([(iq * q, pow_rational(c, *q).ok()?)]));
                    }
                    // Expand small positive integer powers of sums.
                    let n = q.to_integer();
                    if !q.is_integer() || !(1..=8).contains(&n) {
                        return None;
                    }
                    let mut acc = Terms::from([(Rational::zero(), 1.0)]);
                    for _ in 0..n {
                        acc = times(&acc, &inner);
                    }
                    Some(acc)
                }
                _ => None,
            }
        }
        let mut out = terms(&self.simplify())?;
        out.retain(|_, c| *c != 0.0);
        Some(out)
    }

    /// Builds `Σ c_q v^q` from exponent/coefficient pairs.
    pub fn from_power_coefficients(coeffs: &BTreeMap<Rational, f64>) -> Expr {
        Expr::sum(
            coeffs
                .iter()
                .map(|(q, c)| Expr::product([Expr::Const(*c), Expr::Var.pow(*q)])),
        )
        .simplify()
    }
}

impl From<f64> for Expr {
    fn from(c: f64) -> Self {
        Expr::Const(c)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum([self, rhs])
    }
}

impl Add<f64> for Expr {
    type Output = Expr;
    fn add(self, rhs: f64) -> Expr {
        Expr::sum([self, Expr::Const(rhs)])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sum([self, -rhs])
    }
}

impl Sub<f64> for Expr {
    type Output = Expr;
    fn sub(self, rhs: f64) -> Expr {
        Expr::sum([self, Expr::Const(-rhs)])
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::product([self, rhs])
    }
}

impl Mul<f64> for Expr {
    type Output = Expr;
    fn mul(self, rhs: f64) -> Expr {
        Expr::product([Expr::Const(rhs), self])
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::product([self, rhs.recip()])
    }
}

impl Div<f64> for Expr {
    type Output = Expr;
    fn div(self, rhs: f64) -> Expr {
        Expr::product([Expr::Const(1.0 / rhs), self])
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product([Expr::Const(-1.0), self])
    }
}

/// True when `(b^inner)^outer == b^(inner*outer)` wherever both sides are defined.
pub(crate) fn collapse_is_safe(inner: Rational, outer: Rational) -> bool {
    let even_integer = inner.is_integer() && (inner.numer() % 2 == 0);
    !(even_integer && !outer.is_integer())
}

pub(crate) fn rational_to_f64(q: Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}
