//! Complex-valued symbolic expression kernel.

mod coeff;
mod diff;
mod display;
mod eval;
mod expr;
mod parse;
mod simplify;
mod symbol;
mod zero;

use thiserror::Error;

pub use coeff::Coeff;
pub use diff::{diff, diff_by_name};
pub use eval::{eval, eval_with_scale, Assignment, Compiled};
pub use expr::{add, add_all, conj, div, exp, mul, mul_all, neg, pow, product_of, sqrt, sub, sum_of, Expr, Node};
pub use parse::{parse_expr, Parser};
pub use simplify::{simplify, simplify_with_budget, DEFAULT_EXPANSION_BUDGET};
pub use symbol::{coord, Domain, Symbol, SymbolInfo, SymbolKind, SymbolTable, COORD_NAMES};
pub use zero::{is_zero, sample_point, sample_value, Survey, ZeroTest, ZeroVerdict, SAMPLE_MAX, SAMPLE_MIN};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SymError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` already declared with a different domain")]
    Redeclared(String),
    #[error("no value for symbol `{0}`")]
    MissingValue(String),
    #[error("non-finite value in subexpression {subtree}")]
    NonFinite { subtree: String },
    /// `offset` is a byte offset, `line`/`column` are 1-based.
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { offset: usize, line: usize, column: usize, message: String },
}
