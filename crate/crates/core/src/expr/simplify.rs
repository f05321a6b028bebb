//! Conservative canonicalization.
//!
//! Rules: flatten sums and products, fold constants, collect like terms,
//! merge powers of a common base, merge `exp` factors, collapse
//! `(b^p)^q` when that preserves value, pull positive constants and `exp`
//! factors out of fractional powers, distribute integer powers over
//! products. No expansion of sums, no polynomial division.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::{collapse_is_safe, exact_rational, pow_rational, Expr, Func, Rational};

fn rank(e: &Expr) -> u8 {
    match e {
        Expr::Const(_) => 0,
        Expr::Var => 1,
        Expr::Pow(..) => 2,
        Expr::Mul(_) => 3,
        Expr::Add(_) => 4,
        Expr::Exp(_) => 5,
        Expr::Func(..) => 6,
        Expr::Compose(..) => 7,
    }
}

fn cmp_slices(a: &[Expr], b: &[Expr]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = canonical_cmp(x, y);
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// Total order used to sort the children of sums and products.
pub(crate) fn canonical_cmp(a: &Expr, b: &Expr) -> Ordering {
    rank(a).cmp(&rank(b)).then_with(|| match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => x.total_cmp(y),
        (Expr::Pow(b1, q1), Expr::Pow(b2, q2)) => canonical_cmp(b1, b2).then(q1.cmp(q2)),
        (Expr::Mul(x), Expr::Mul(y)) | (Expr::Add(x), Expr::Add(y)) => cmp_slices(x, y),
        (Expr::Exp(x), Expr::Exp(y)) => canonical_cmp(x, y),
        (Expr::Func(f, x), Expr::Func(g, y)) => f.cmp(g).then_with(|| canonical_cmp(x, y)),
        (Expr::Compose(o1, i1), Expr::Compose(o2, i2)) => {
            canonical_cmp(o1, o2).then_with(|| canonical_cmp(i1, i2))
        }
        _ => Ordering::Equal,
    })
}

fn mk_add(terms: Vec<Expr>) -> Expr {
    let mut constant = 0.0;
    let mut groups: Vec<(Expr, f64)> = Vec::new();
    let mut stack = terms;
    while let Some(t) = stack.pop() {
        let (coeff, rest) = match t {
            Expr::Const(c) => {
                constant += c;
                continue;
            }
            Expr::Add(ts) => {
                stack.extend(ts);
                continue;
            }
            Expr::Mul(mut fs) if matches!(fs.first(), Some(Expr::Const(_))) => {
                let c = match fs.remove(0) {
                    Expr::Const(c) => c,
                    _ => unreachable!(),
                };
                let rest = if fs.len() == 1 {
                    fs.pop().unwrap()
                } else {
                    Expr::Mul(fs)
                };
                (c, rest)
            }
            other => (1.0, other),
        };
        match groups.iter_mut().find(|(r, _)| *r == rest) {
            Some((_, c)) => *c += coeff,
            None => groups.push((rest, coeff)),
        }
    }
    let mut out: Vec<Expr> = groups
        .into_iter()
        .filter(|(_, c)| *c != 0.0)
        .map(|(rest, c)| {
            if c == 1.0 {
                rest
            } else {
                mk_mul(vec![Expr::Const(c), rest])
            }
        })
        .collect();
    out.sort_by(canonical_cmp);
    if constant != 0.0 || out.is_empty() {
        out.insert(0, Expr::Const(constant));
    }
    if out.len() == 1 {
        out.pop().unwrap()
    } else {
        Expr::Add(out)
    }
}

fn mk_mul(factors: Vec<Expr>) -> Expr {
    let mut coeff = 1.0;
    let mut exp_args: Vec<Expr> = Vec::new();
    let mut groups: Vec<(Expr, Rational)> = Vec::new();
    let mut stack = factors;
    while let Some(f) = stack.pop() {
        let (base, q) = match f {
            Expr::Const(c) => {
                coeff *= c;
                continue;
            }
            Expr::Mul(fs) => {
                stack.extend(fs);
                continue;
            }
            Expr::Exp(u) => {
                exp_args.push(*u);
                continue;
            }
            Expr::Pow(b, q) => (*b, q),
            other => (other, Rational::one()),
        };
        match groups.iter_mut().find(|(b, _)| *b == base) {
            Some((_, e)) => *e += q,
            None => groups.push((base, q)),
        }
    }
    if coeff == 0.0 {
        return Expr::Const(0.0);
    }

    let mut out: Vec<Expr> = Vec::with_capacity(groups.len() + 1);
    let mut needs_another_pass = false;
    for (base, q) in groups {
        if q.is_zero() {
            continue;
        }
        let p = mk_pow(base, q);
        if matches!(p, Expr::Const(_) | Expr::Mul(_) | Expr::Exp(_)) {
            needs_another_pass = true;
        }
        out.push(p);
    }
    if !exp_args.is_empty() {
        match mk_exp(mk_add(exp_args)) {
            Expr::Const(c) => coeff *= c,
            e => out.push(e),
        }
    }
    if needs_another_pass {
        out.push(Expr::Const(coeff));
        return mk_mul(out);
    }
    out.sort_by(canonical_cmp);
    if coeff != 1.0 || out.is_empty() {
        out.insert(0, Expr::Const(coeff));
    }
    if out.len() == 1 {
        out.pop().unwrap()
    } else {
        Expr::Mul(out)
    }
}

fn mk_pow(base: Expr, q: Rational) -> Expr {
    if q.is_zero() {
        return Expr::Const(1.0);
    }
    if q.is_one() {
        return base;
    }
    match base {
        Expr::Const(c) => match pow_rational(c, q) {
            Ok(v) => Expr::Const(v),
            Err(_) => Expr::Pow(Box::new(Expr::Const(c)), q),
        },
        Expr::Pow(inner, p) if collapse_is_safe(p, q) => mk_pow(*inner, p * q),
        Expr::Exp(u) => mk_exp(mk_mul(vec![Expr::Const(super::rational_to_f64(q)), *u])),
        Expr::Mul(fs) if q.is_integer() => mk_mul(fs.into_iter().map(|f| mk_pow(f, q)).collect()),
        Expr::Mul(fs) => {
            // Only factors known positive may leave a fractional power, and
            // constants only when the result is exact (keeps sqrt(2)^2 == 2).
            let mut pulled = Vec::new();
            let mut kept = Vec::new();
            for f in fs {
                match f {
                    Expr::Const(c) if c > 0.0 && pow_is_exact(c, q) => pulled.push(Expr::Const(c)),
                    Expr::Exp(_) => pulled.push(f),
                    f => kept.push(f),
                }
            }
            if pulled.is_empty() {
                return Expr::Pow(Box::new(Expr::Mul(kept)), q);
            }
            let mut out: Vec<Expr> = pulled.into_iter().map(|f| mk_pow(f, q)).collect();
            match kept.len() {
                0 => {}
                1 => out.push(mk_pow(kept.pop().unwrap(), q)),
                _ => out.push(Expr::Pow(Box::new(Expr::Mul(kept)), q)),
            }
            mk_mul(out)
        }
        b => Expr::Pow(Box::new(b), q),
    }
}

fn pow_is_exact(c: f64, q: Rational) -> bool {
    pow_rational(c, q).ok().and_then(exact_rational).is_some()
}

fn mk_exp(u: Expr) -> Expr {
    match u {
        Expr::Const(c) => Expr::Const(c.exp()),
        Expr::Func(Func::Ln, v) => *v,
        u => Expr::Exp(Box::new(u)),
    }
}

fn mk_func(f: Func, u: Expr) -> Expr {
    match (f, u) {
        (f, Expr::Const(c)) => match f.apply(c) {
            Ok(v) => Expr::Const(v),
            Err(_) => Expr::Func(f, Box::new(Expr::Const(c))),
        },
        (Func::Ln, Expr::Exp(v)) => *v,
        (f, u) => Expr::Func(f, Box::new(u)),
    }
}

fn simplify_once(e: &Expr) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(*c),
        Expr::Var => Expr::Var,
        Expr::Add(ts) => mk_add(ts.iter().map(simplify_once).collect()),
        Expr::Mul(fs) => mk_mul(fs.iter().map(simplify_once).collect()),
        Expr::Pow(b, q) => mk_pow(simplify_once(b), *q),
        Expr::Exp(u) => mk_exp(simplify_once(u)),
        Expr::Func(f, u) => mk_func(*f, simplify_once(u)),
        Expr::Compose(o, i) => simplify_once(&o.substitute(i)),
    }
}

impl Expr {
    /// Canonical, value-preserving simplification. Idempotent.
    pub fn simplify(&self) -> Expr {
        let mut cur = simplify_once(self);
        for _ in 0..16 {
            let next = simplify_once(&cur);
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }
}
