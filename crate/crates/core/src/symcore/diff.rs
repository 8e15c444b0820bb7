use std::collections::HashMap;

use super::expr::{add_all, exp, mul, mul_all, pow, Expr, Node};
use super::symbol::{Symbol, SymbolTable};
use super::SymError;

/// Partial derivative with respect to `var`.
///
/// Conjugated non-real symbols are treated as independent of their
/// unconjugated counterparts (Wirtinger convention).
pub fn diff(e: &Expr, var: &Symbol) -> Expr {
    let mut memo = HashMap::new();
    diff_rec(e, var, &mut memo)
}

/// Like [`diff`] but resolves the variable by name, failing on unknown names.
pub fn diff_by_name(e: &Expr, name: &str, table: &SymbolTable) -> Result<Expr, SymError> {
    let var = table.lookup(name)?;
    Ok(diff(e, &var))
}

fn diff_rec(e: &Expr, var: &Symbol, memo: &mut HashMap<*const (), Expr>) -> Expr {
    if !e.may_depend_on(var) {
        return Expr::zero();
    }
    if let Some(hit) = memo.get(&e.ptr()) {
        return hit.clone();
    }
    let out = match e.node() {
        Node::Num(_) | Node::Conj(_) => Expr::zero(),
        Node::Sym(s) => {
            if s == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Add(xs) => add_all(xs.iter().map(|x| diff_rec(x, var, memo)).collect::<Vec<_>>()),
        Node::Mul(fs) => {
            let mut terms = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                let df = diff_rec(f, var, memo);
                if df.is_zero() {
                    continue;
                }
                let mut factors = Vec::with_capacity(fs.len());
                factors.push(df);
                factors.extend(fs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()));
                terms.push(mul_all(factors));
            }
            add_all(terms)
        }
        Node::Pow(b, n) => {
            let db = diff_rec(b, var, memo);
            mul_all([Expr::int(*n), pow(b, n - 1), db])
        }
        Node::Exp(a) => mul(&exp(a), &diff_rec(a, var, memo)),
        Node::Sqrt(a) => {
            // d sqrt(a) = a' / (2 sqrt(a))
            let da = diff_rec(a, var, memo);
            mul_all([Expr::ratio(1, 2), da, pow(e, -1)])
        }
    };
    memo.insert(e.ptr(), out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::expr::{neg, sqrt};
    use crate::symcore::simplify::simplify;
    use crate::symcore::symbol::coord;

    #[test]
    fn chain_rule_on_plane_wave() {
        // d/dx0 exp(-i a0 x0) = -i a0 exp(-i a0 x0)
        let a0 = Expr::sym(&Symbol::real("a0"));
        let x0 = Expr::sym(&coord(0));
        let arg = neg(&(Expr::i() * &a0 * &x0));
        let e = exp(&arg);
        let d = diff(&e, &coord(0));
        let expected = neg(&Expr::i()) * a0 * e;
        assert_eq!(simplify(&d), simplify(&expected));
    }

    #[test]
    fn independent_variable_gives_zero() {
        let x1 = Expr::sym(&coord(1));
        let x2 = Expr::sym(&coord(2));
        let e = x1.pow(2) + x2;
        assert!(diff(&e, &coord(3)).is_zero());
    }

    #[test]
    fn sqrt_derivative() {
        let x = Expr::sym(&coord(0));
        let d = diff(&sqrt(&x), &coord(0));
        // 1/(2 sqrt x)
        assert_eq!(simplify(&(d * sqrt(&x))), Expr::ratio(1, 2));
    }

    #[test]
    fn unknown_name_is_reported() {
        let t = SymbolTable::standard();
        let err = diff_by_name(&Expr::one(), "q9", &t).unwrap_err();
        assert_eq!(err, SymError::UnknownSymbol("q9".into()));
    }
}
