//! Symbolic and numeric checks for six-dimensional metric ansatze: curvature,
//! field-equation reductions, geodesics and two-path interference.

#![allow(clippy::needless_range_loop)]

pub mod ansatz;
pub mod curvature;
pub mod dynamics;
pub mod symcore;
pub mod tensor;
pub mod verify;

pub use symcore::{Assignment, Expr, Symbol, SymbolTable, ZeroTest, ZeroVerdict};
