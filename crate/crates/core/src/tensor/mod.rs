//! Dense tensors over six dimensions and the metric with its inverse.

mod dense;
mod index;
mod metric;

use thiserror::Error;

use crate::symcore::Assignment;

pub use dense::{Symmetry, Tensor, Variance};
pub use index::{contract_all, lower_index, raise_index};
pub use metric::{
    invert_matrix, invert_metric, verify_claimed_inverse, InverseCheck, InverseKind, InverseVerdict, Matrix, Metric6,
    DIM,
};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum TensorError {
    #[error("metric is singular: determinant {determinant} vanishes identically")]
    Singular { determinant: String, witness: Option<Assignment> },
    #[error("metric is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("slot {slot} out of range for rank {rank}")]
    SlotOutOfRange { slot: usize, rank: usize },
    #[error("slot {slot} already has the requested variance")]
    VarianceMismatch { slot: usize },
    #[error("tensor shapes do not match")]
    ShapeMismatch,
}
