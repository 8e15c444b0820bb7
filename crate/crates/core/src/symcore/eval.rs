//! Double-precision complex evaluation.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::expr::{Expr, Node};
use super::symbol::Symbol;
use super::SymError;

/// Values for symbols, keyed by name. Ordered so witnesses serialize stably.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    values: BTreeMap<String, (f64, f64)>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn set(&mut self, name: &str, value: Complex64) -> &mut Self {
        self.values.insert(name.to_string(), (value.re, value.im));
        self
    }

    pub fn with(mut self, name: &str, value: Complex64) -> Self {
        self.set(name, value);
        self
    }

    pub fn with_real(self, name: &str, value: f64) -> Self {
        self.with(name, Complex64::new(value, 0.0))
    }

    pub fn get(&self, name: &str) -> Option<Complex64> {
        self.values.get(name).map(|&(re, im)| Complex64::new(re, im))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn extend_from(&mut self, other: &Assignment) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), *v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Complex64)> {
        self.values.iter().map(|(k, &(re, im))| (k.as_str(), Complex64::new(re, im)))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

const SUBTREE_PREVIEW: usize = 160;

fn preview(e: &Expr) -> String {
    let mut s = e.to_string();
    if s.len() > SUBTREE_PREVIEW {
        let mut cut = SUBTREE_PREVIEW;
        while !s.is_char_boundary(cut) {
            cut -= 1;
        }
        s.truncate(cut);
        s.push_str("...");
    }
    s
}

/// Evaluate `e` at the given assignment.
pub fn eval(e: &Expr, at: &Assignment) -> Result<Complex64, SymError> {
    let mut memo = HashMap::new();
    eval_rec(e, at, &mut memo)
}

fn eval_rec(e: &Expr, at: &Assignment, memo: &mut HashMap<*const (), Complex64>) -> Result<Complex64, SymError> {
    if let Some(v) = memo.get(&e.ptr()) {
        return Ok(*v);
    }
    let v = match e.node() {
        Node::Num(c) => c.to_c64(),
        Node::Sym(s) => at.get(s.name()).ok_or_else(|| SymError::MissingValue(s.name().to_string()))?,
        Node::Conj(a) => eval_rec(a, at, memo)?.conj(),
        Node::Add(xs) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in xs {
                acc += eval_rec(x, at, memo)?;
            }
            acc
        }
        Node::Mul(xs) => {
            let mut acc = Complex64::new(1.0, 0.0);
            for x in xs {
                acc *= eval_rec(x, at, memo)?;
            }
            acc
        }
        Node::Pow(b, n) => powi(eval_rec(b, at, memo)?, *n),
        Node::Exp(a) => eval_rec(a, at, memo)?.exp(),
        Node::Sqrt(a) => eval_rec(a, at, memo)?.sqrt(),
    };
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(SymError::NonFinite { subtree: preview(e) });
    }
    memo.insert(e.ptr(), v);
    Ok(v)
}

fn powi(z: Complex64, n: i64) -> Complex64 {
    if n >= 0 {
        z.powu(n as u32)
    } else {
        let p = z.powu((-n) as u32);
        if p == Complex64::new(0.0, 0.0) {
            Complex64::new(f64::INFINITY, 0.0)
        } else {
            p.inv()
        }
    }
}

/// Evaluate the top-level terms separately, returning `(value, sum of |term|)`.
///
/// The second component is the scale used for relative zero tests.
pub fn eval_with_scale(e: &Expr, at: &Assignment) -> Result<(Complex64, f64), SymError> {
    let mut memo = HashMap::new();
    match e.node() {
        Node::Add(xs) => {
            let mut value = Complex64::new(0.0, 0.0);
            let mut scale = 0.0;
            for x in xs {
                let t = eval_rec(x, at, &mut memo)?;
                value += t;
                scale += t.norm();
            }
            Ok((value, scale))
        }
        _ => {
            let v = eval_rec(e, at, &mut memo)?;
            Ok((v, v.norm()))
        }
    }
}

#[derive(Clone, Debug)]
enum Op {
    Const(Complex64),
    Var(usize),
    Add(Vec<usize>),
    Mul(Vec<usize>),
    Powi(usize, i64),
    Exp(usize),
    Sqrt(usize),
    Conj(usize),
}

/// A batch of expressions flattened into a register tape with common
/// subexpressions shared. Built once, evaluated many times (geodesic RHS).
#[derive(Clone, Debug)]
pub struct Compiled {
    ops: Vec<Op>,
    outputs: Vec<usize>,
    vars: Vec<Symbol>,
}

impl Compiled {
    /// Every free symbol of `exprs` must appear in `vars`.
    pub fn new(exprs: &[Expr], vars: &[Symbol]) -> Result<Compiled, SymError> {
        let index: HashMap<&Symbol, usize> = vars.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut ops = Vec::new();
        let mut seen: HashMap<Expr, usize> = HashMap::new();
        let mut outputs = Vec::with_capacity(exprs.len());
        for e in exprs {
            outputs.push(compile_rec(e, &index, &mut ops, &mut seen)?);
        }
        Ok(Compiled { ops, outputs, vars: vars.to_vec() })
    }

    pub fn vars(&self) -> &[Symbol] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    pub fn tape_len(&self) -> usize {
        self.ops.len()
    }

    /// Evaluate all outputs. `inputs` follows the order of `vars`.
    pub fn eval_into(&self, inputs: &[Complex64], regs: &mut Vec<Complex64>, out: &mut [Complex64]) {
        regs.clear();
        regs.reserve(self.ops.len());
        for op in &self.ops {
            let v = match op {
                Op::Const(c) => *c,
                Op::Var(i) => inputs[*i],
                Op::Add(xs) => xs.iter().map(|&i| regs[i]).sum(),
                Op::Mul(xs) => xs.iter().fold(Complex64::new(1.0, 0.0), |acc, &i| acc * regs[i]),
                Op::Powi(b, n) => powi(regs[*b], *n),
                Op::Exp(a) => regs[*a].exp(),
                Op::Sqrt(a) => regs[*a].sqrt(),
                Op::Conj(a) => regs[*a].conj(),
            };
            regs.push(v);
        }
        for (slot, &r) in out.iter_mut().zip(&self.outputs) {
            *slot = regs[r];
        }
    }

    pub fn eval(&self, inputs: &[Complex64]) -> Vec<Complex64> {
        let mut regs = Vec::new();
        let mut out = vec![Complex64::new(0.0, 0.0); self.outputs.len()];
        self.eval_into(inputs, &mut regs, &mut out);
        out
    }
}

fn compile_rec(
    e: &Expr,
    index: &HashMap<&Symbol, usize>,
    ops: &mut Vec<Op>,
    seen: &mut HashMap<Expr, usize>,
) -> Result<usize, SymError> {
    if let Some(&r) = seen.get(e) {
        return Ok(r);
    }
    let op = match e.node() {
        Node::Num(c) => Op::Const(c.to_c64()),
        Node::Sym(s) => Op::Var(*index.get(s).ok_or_else(|| SymError::MissingValue(s.name().to_string()))?),
        Node::Conj(a) => Op::Conj(compile_rec(a, index, ops, seen)?),
        Node::Add(xs) => Op::Add(xs.iter().map(|x| compile_rec(x, index, ops, seen)).collect::<Result<_, _>>()?),
        Node::Mul(xs) => Op::Mul(xs.iter().map(|x| compile_rec(x, index, ops, seen)).collect::<Result<_, _>>()?),
        Node::Pow(b, n) => Op::Powi(compile_rec(b, index, ops, seen)?, *n),
        Node::Exp(a) => Op::Exp(compile_rec(a, index, ops, seen)?),
        Node::Sqrt(a) => Op::Sqrt(compile_rec(a, index, ops, seen)?),
    };
    ops.push(op);
    let r = ops.len() - 1;
    seen.insert(e.clone(), r);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::expr::exp;
    use crate::symcore::symbol::coord;
    use std::f64::consts::PI;

    #[test]
    fn euler_identity() {
        let c = Symbol::real("c");
        let e = exp(&(Expr::i() * Expr::sym(&c)));
        let v = eval(&e, &Assignment::new().with_real("c", PI)).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn product_of_bound_symbols() {
        let e = Expr::sym(&coord(0)) * Expr::sym(&Symbol::real("p0"));
        let at = Assignment::new().with_real("x0", 2.0).with_real("p0", 3.0);
        assert_eq!(eval(&e, &at).unwrap(), Complex64::new(6.0, 0.0));
    }

    #[test]
    fn missing_and_non_finite() {
        let e = Expr::sym(&coord(0));
        assert_eq!(eval(&e, &Assignment::new()), Err(SymError::MissingValue("x0".into())));
        let inv = e.pow(-1);
        let err = eval(&inv, &Assignment::new().with_real("x0", 0.0)).unwrap_err();
        assert!(matches!(err, SymError::NonFinite { .. }));
        let big = exp(&(Expr::int(1000) * Expr::sym(&coord(0))));
        assert!(eval(&big, &Assignment::new().with_real("x0", 1.0)).is_err());
    }

    #[test]
    fn compiled_matches_tree_eval() {
        let x = Expr::sym(&coord(0));
        let y = Expr::sym(&coord(1));
        let e1 = exp(&(&x * &y)) + x.pow(-2) * y.sqrt();
        let e2 = &x * &y + Expr::ratio(1, 3);
        let c = Compiled::new(&[e1.clone(), e2.clone()], &[coord(0), coord(1)]).unwrap();
        let z = [Complex64::new(0.7, 0.2), Complex64::new(-0.3, 1.1)];
        let out = c.eval(&z);
        let at = Assignment::new().with("x0", z[0]).with("x1", z[1]);
        assert!((out[0] - eval(&e1, &at).unwrap()).norm() < 1e-14);
        assert!((out[1] - eval(&e2, &at).unwrap()).norm() < 1e-14);
    }
}
