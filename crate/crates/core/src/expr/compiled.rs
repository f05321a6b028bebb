//! Flat postfix form of an [`Expr`] for fast repeated evaluation.

use super::{pow_rational, DomainError, Expr, Func, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Op {
    Const(f64),
    Var,
    Add(usize),
    Mul(usize),
    Pow(Rational),
    Exp,
    Func(Func),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledExpr {
    ops: Vec<Op>,
    depth: usize,
}

impl CompiledExpr {
    pub(crate) fn new(e: &Expr) -> CompiledExpr {
        fn emit(e: &Expr, ops: &mut Vec<Op>) {
            match e {
                Expr::Const(c) => ops.push(Op::Const(*c)),
                Expr::Var => ops.push(Op::Var),
                Expr::Add(ts) => {
                    ts.iter().for_each(|t| emit(t, ops));
                    ops.push(Op::Add(ts.len()));
                }
                Expr::Mul(fs) => {
                    fs.iter().for_each(|f| emit(f, ops));
                    ops.push(Op::Mul(fs.len()));
                }
                Expr::Pow(b, q) => {
                    emit(b, ops);
                    ops.push(Op::Pow(*q));
                }
                Expr::Exp(u) => {
                    emit(u, ops);
                    ops.push(Op::Exp);
                }
                Expr::Func(f, u) => {
                    emit(u, ops);
                    ops.push(Op::Func(*f));
                }
                Expr::Compose(o, i) => emit(&o.substitute(i), ops),
            }
        }
        let mut ops = Vec::new();
        emit(e, &mut ops);
        let (mut depth, mut cur) = (0usize, 0usize);
        for op in &ops {
            match op {
                Op::Const(_) | Op::Var => cur += 1,
                Op::Add(n) | Op::Mul(n) => cur = cur + 1 - n,
                _ => {}
            }
            depth = depth.max(cur);
        }
        CompiledExpr { ops, depth }
    }

    pub fn eval(&self, x: f64) -> Result<f64, DomainError> {
        let mut stack: Vec<f64> = Vec::with_capacity(self.depth);
        for op in &self.ops {
            match op {
                Op::Const(c) => stack.push(*c),
                Op::Var => stack.push(x),
                Op::Add(n) => {
                    let at = stack.len() - n;
                    let v = stack.drain(at..).sum();
                    stack.push(v);
                }
                Op::Mul(n) => {
                    let at = stack.len() - n;
                    let v = stack.drain(at..).product();
                    stack.push(v);
                }
                Op::Pow(q) => {
                    let b = stack.pop().expect("well-formed program");
                    stack.push(pow_rational(b, *q)?);
                }
                Op::Exp => {
                    let u = stack.pop().expect("well-formed program");
                    stack.push(u.exp());
                }
                Op::Func(f) => {
                    let u = stack.pop().expect("well-formed program");
                    stack.push(f.apply(u)?);
                }
            }
        }
        Ok(stack.pop().expect("well-formed program"))
    }

    /// Evaluates, mapping domain errors to NaN.
    pub fn eval_or_nan(&self, x: f64) -> f64 {
        self.eval(x).unwrap_or(f64::NAN)
    }
}
