//! Full simplification: distribute products over sums and re-canonicalize.

use std::collections::HashMap;

use super::expr::{add_all, exp, mul_all, pow, sqrt, Expr, Node};

/// Largest number of terms a single distribution step may produce. Products
/// whose expansion would exceed it stay factored (still value-preserving).
pub const DEFAULT_EXPANSION_BUDGET: usize = 20_000;

/// Expand to a sum of monomials, iterated to a fixpoint.
///
/// Idempotent and value-preserving. Negative powers of sums are kept as
/// atoms with expanded bases; there is no polynomial GCD.
pub fn simplify(e: &Expr) -> Expr {
    simplify_with_budget(e, DEFAULT_EXPANSION_BUDGET)
}

pub fn simplify_with_budget(e: &Expr, budget: usize) -> Expr {
    let mut cur = e.clone();
    for _ in 0..8 {
        let mut memo = HashMap::new();
        let next = expand(&cur, budget, &mut memo);
        if next == cur {
            return next;
        }
        cur = next;
    }
    cur
}

// The memo holds each key alive: `expand` recurses into temporaries, and a
// freed node's address may be reused by a different expression.
type Memo = HashMap<*const (), (Expr, Expr)>;

fn expand(e: &Expr, budget: usize, memo: &mut Memo) -> Expr {
    if let Some((_, hit)) = memo.get(&e.ptr()) {
        return hit.clone();
    }
    let out = match e.node() {
        Node::Num(_) | Node::Sym(_) | Node::Conj(_) => e.clone(),
        Node::Add(xs) => add_all(xs.iter().map(|x| expand(x, budget, memo)).collect::<Vec<_>>()),
        Node::Exp(a) => exp(&expand(a, budget, memo)),
        Node::Sqrt(a) => sqrt(&expand(a, budget, memo)),
        Node::Pow(b, n) => {
            let base = expand(b, budget, memo);
            if *n > 0 && matches!(base.node(), Node::Add(_)) {
                let factors = vec![base; *n as usize];
                distribute(&factors, budget)
            } else {
                pow(&base, *n)
            }
        }
        Node::Mul(fs) => {
            let factors: Vec<Expr> = fs.iter().map(|f| expand(f, budget, memo)).collect();
            // expanded factors may have re-merged into powers of sums
            let merged = mul_all(factors);
            match merged.node() {
                Node::Mul(parts) => {
                    let mut flat = Vec::with_capacity(parts.len());
                    for p in parts {
                        match p.node() {
                            Node::Pow(b, n) if *n > 0 && matches!(b.node(), Node::Add(_)) => {
                                flat.extend(std::iter::repeat_n(b.clone(), *n as usize));
                            }
                            _ => flat.push(p.clone()),
                        }
                    }
                    distribute(&flat, budget)
                }
                _ => expand(&merged, budget, memo),
            }
        }
    };
    memo.insert(e.ptr(), (e.clone(), out.clone()));
    out
}

/// Multiply out a list of factors, some of which may be sums.
fn distribute(factors: &[Expr], budget: usize) -> Expr {
    let mut scalars = Vec::new();
    let mut sums = Vec::new();
    for f in factors {
        if matches!(f.node(), Node::Add(_)) {
            sums.push(f.clone());
        } else {
            scalars.push(f.clone());
        }
    }
    let projected: usize =
        sums.iter().map(|s| s.terms().len()).try_fold(1usize, |acc, n| acc.checked_mul(n)).unwrap_or(usize::MAX);
    if projected > budget {
        return mul_all(factors.to_vec());
    }
    let mut acc: Vec<Expr> = vec![mul_all(scalars)];
    for s in &sums {
        let terms = s.terms();
        let mut next = Vec::with_capacity(acc.len() * terms.len());
        for a in &acc {
            for t in &terms {
                next.push(mul_all([a.clone(), t.clone()]));
            }
        }
        // collect like terms early to keep the working set small
        acc = add_all(next).terms();
        if acc.len() == 1 && acc[0].is_zero() {
            return Expr::zero();
        }
    }
    add_all(acc)
}
