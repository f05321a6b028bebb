//! Infix printing that the parser reads back.

use std::fmt::{self, Write};

use super::{Expr, Rational};

pub(crate) fn fmt_number(c: f64) -> String {
    let a = c.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{c:e}")
    } else {
        format!("{c}")
    }
}

fn fmt_rational(q: Rational) -> String {
    if q.is_integer() && *q.numer() >= 0 {
        q.numer().to_string()
    } else if q.is_integer() {
        format!("({})", q.numer())
    } else {
        format!("({}/{})", q.numer(), q.denom())
    }
}

// Binding strength: 0 sum, 1 product, 2 power base.
fn write_expr(e: &Expr, var: &str, ctx: u8, out: &mut String) {
    match e {
        Expr::Const(c) => {
            let s = fmt_number(*c);
            if *c < 0.0 && ctx > 0 || ctx >= 2 && s.contains('e') {
                let _ = write!(out, "({s})");
            } else {
                out.push_str(&s);
            }
        }
        Expr::Var => out.push_str(var),
        Expr::Add(ts) => {
            if ctx > 0 {
                out.push('(');
            }
            for (i, t) in ts.iter().enumerate() {
                if i == 0 {
                    write_expr(t, var, 0, out);
                    continue;
                }
                match negated(t) {
                    Some(n) => {
                        out.push_str(" - ");
                        write_expr(&n, var, 1, out);
                    }
                    None => {
                        out.push_str(" + ");
                        write_expr(t, var, 0, out);
                    }
                }
            }
            if ctx > 0 {
                out.push(')');
            }
        }
        Expr::Mul(fs) => {
            let wrap = ctx >= 2;
            if wrap {
                out.push('(');
            }
            let mut rest: &[Expr] = fs;
            if let [Expr::Const(c), tail @ ..] = fs.as_slice() {
                if *c == -1.0 && !tail.is_empty() {
                    out.push('-');
                    rest = tail;
                } else if *c < 0.0 {
                    out.push_str(&fmt_number(*c));
                    if !tail.is_empty() {
                        out.push('*');
                    }
                    rest = tail;
                }
            }
            for (i, f) in rest.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                write_expr(f, var, 1, out);
            }
            if wrap {
                out.push(')');
            }
        }
        Expr::Pow(b, q) => {
            if ctx >= 2 {
                out.push('(');
            }
            write_expr(b, var, 2, out);
            out.push('^');
            out.push_str(&fmt_rational(*q));
            if ctx >= 2 {
                out.push(')');
            }
        }
        Expr::Exp(u) => {
            out.push_str("exp(");
            write_expr(u, var, 0, out);
            out.push(')');
        }
        Expr::Func(f, u) => {
            let _ = write!(out, "{}(", f.name());
            write_expr(u, var, 0, out);
            out.push(')');
        }
        Expr::Compose(o, i) => write_expr(&o.substitute(i), var, ctx, out),
    }
}

/// `-t` as a tree when `t` carries a visible leading minus.
fn negated(t: &Expr) -> Option<Expr> {
    match t {
        Expr::Const(c) if *c < 0.0 => Some(Expr::Const(-c)),
        Expr::Mul(fs) => match fs.as_slice() {
            [Expr::Const(c), rest @ ..] if *c < 0.0 && !rest.is_empty() => {
                let mut v = Vec::with_capacity(fs.len());
                if *c != -1.0 {
                    v.push(Expr::Const(-c));
                }
                v.extend(rest.iter().cloned());
                Some(if v.len() == 1 { v.pop().unwrap() } else { Expr::Mul(v) })
            }
            _ => None,
        },
        _ => None,
    }
}

impl Expr {
    /// Prints with the given variable name.
    pub fn to_string_in(&self, var: &str) -> String {
        let mut s = String::new();
        write_expr(self, var, 0, &mut s);
        s
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}
