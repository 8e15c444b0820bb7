//! Parseable text rendering of expressions.

use std::fmt;

use num_traits::{Signed, Zero};

use super::coeff::Coeff;
use super::expr::{mul_all, neg, split_coeff, Expr, Node};

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_POW: u8 = 4;

fn is_negative(c: &Coeff) -> bool {
    (c.re.is_negative() && c.im.is_zero()) || (c.re.is_zero() && c.im.is_negative())
}

fn needs_parens(e: &Expr, ctx: u8) -> bool {
    let own = match e.node() {
        Node::Add(_) => PREC_ADD,
        Node::Mul(fs) => {
            // leading minus sign binds like a sum at higher contexts
            match fs[0].node() {
                Node::Num(c) if is_negative(c) => PREC_ADD,
                _ => PREC_MUL,
            }
        }
        Node::Pow(_, n) if *n < 0 => PREC_MUL,
        Node::Pow(..) => PREC_POW,
        Node::Num(c) if is_negative(c) || !c.re.is_integer() || !c.im.is_integer() => PREC_ADD,
        _ => u8::MAX,
    };
    own < ctx
}

fn write_at(e: &Expr, ctx: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if needs_parens(e, ctx) {
        write!(f, "(")?;
        write_expr(e, f)?;
        write!(f, ")")
    } else {
        write_expr(e, f)
    }
}

fn write_pow(base: &Expr, n: i64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write_at(base, PREC_POW + 1, f)?;
    if n != 1 {
        write!(f, "^{n}")?;
    }
    Ok(())
}

fn write_expr(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e.node() {
        Node::Num(c) => write!(f, "{c}"),
        Node::Sym(s) => write!(f, "{s}"),
        Node::Conj(a) => {
            write!(f, "conj(")?;
            write_expr(a, f)?;
            write!(f, ")")
        }
        Node::Exp(a) => {
            write!(f, "exp(")?;
            write_expr(a, f)?;
            write!(f, ")")
        }
        Node::Sqrt(a) => {
            write!(f, "sqrt(")?;
            write_expr(a, f)?;
            write!(f, ")")
        }
        Node::Pow(b, n) if *n < 0 => {
            write!(f, "1/")?;
            write_pow(b, -n, f)
        }
        Node::Pow(b, n) => write_pow(b, *n, f),
        Node::Add(terms) => {
            for (k, t) in terms.iter().enumerate() {
                let (c, _) = split_coeff(t);
                if k == 0 {
                    write_at(t, PREC_ADD, f)?;
                } else if is_negative(&c) {
                    write!(f, " - ")?;
                    write_at(&neg(t), PREC_MUL, f)?;
                } else {
                    write!(f, " + ")?;
                    write_at(t, PREC_MUL, f)?;
                }
            }
            Ok(())
        }
        Node::Mul(fs) => {
            let (mut c, _) = split_coeff(e);
            let factors: Vec<&Expr> = fs.iter().filter(|x| !matches!(x.node(), Node::Num(_))).collect();
            if is_negative(&c) {
                write!(f, "-")?;
                c = c.neg();
            }
            let has_sum = factors.iter().any(|x| matches!(x.node(), Node::Add(_)));
            if has_sum && factors.len() >= 2 && (fs.len() > factors.len()) {
                // a coefficient next to a lone sum would distribute on re-parse
                if !c.is_one() {
                    write!(f, "{c}*")?;
                }
                write!(f, "(")?;
                write_expr(&mul_all(factors.into_iter().cloned()), f)?;
                return write!(f, ")");
            }
            let numer: Vec<&Expr> =
                factors.iter().copied().filter(|x| !matches!(x.node(), Node::Pow(_, n) if *n < 0)).collect();
            let denom: Vec<(&Expr, i64)> = factors
                .iter()
                .filter_map(|x| match x.node() {
                    Node::Pow(b, n) if *n < 0 => Some((b, -n)),
                    _ => None,
                })
                .collect();
            let mut first = true;
            if !c.is_one() {
                write!(f, "{c}")?;
                first = false;
            }
            for x in numer {
                if !first {
                    write!(f, "*")?;
                }
                write_at(x, PREC_MUL + 1, f)?;
                first = false;
            }
            if first {
                write!(f, "1")?;
            }
            for (b, n) in denom {
                write!(f, "/")?;
                write_pow(b, n, f)?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, f)
    }
}
