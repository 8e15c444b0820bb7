//! Metric families and the field objects they are built from.
//!
//! Conventions: `ħ = 1` unless a constructor takes it explicitly, the plane
//! wave phase is `Φ = p0 x0 − p1 x1 − p2 x2 − p3 x3`, and the flat metric is
//! `diag(1, −1, −1, −1, 1, −1)`.

mod dirac;
mod fields;
mod gravity;
mod registry;
mod scalar;
mod shear;
mod vector;

use thiserror::Error;

use crate::symcore::{coord, sqrt, Expr, SymError};
use crate::tensor::TensorError;

pub use dirac::{coupled_metric, dirac_components, dirac_metric, dirac_rows, DiracAnsatz};
pub use fields::{field_strength, flat5, momentum_stress, stress_tensor, Provenance, StressTensor, FIELD_INDICES};
pub use gravity::{gravity_metric, kappa_value, weak_field_g4, GravityFields};
pub use registry::{AnsatzId, Bindings, ParamKind, ParamSpec};
pub use scalar::{scalar_metric, ScalarAnsatz};
pub use shear::{shear_inverse, shear_lower};
pub use vector::{photon_metric, proca_metric, VectorFieldAnsatz};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum AnsatzError {
    #[error("normalization C undefined (p3 = 0)")]
    NormalizationUndefined,
    #[error("rest mass m0 must be nonzero")]
    ZeroMass,
    #[error("components on index 4 are not allowed")]
    IndexFour,
    #[error("Dirac solution index must be 1..4, got {0}")]
    BadSolution(u8),
    #[error("expected a massless field")]
    Massive,
    #[error("four-dimensional metric is singular")]
    Singular4,
    #[error("unknown ansatz `{0}`")]
    UnknownAnsatz(String),
    #[error("parameter `{name}` is not declared for ansatz `{ansatz}`")]
    UnknownParameter { ansatz: String, name: String },
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

pub(crate) fn x(k: usize) -> Expr {
    Expr::sym(&coord(k))
}

/// `Φ = p0 x0 − p1 x1 − p2 x2 − p3 x3`.
pub fn phase(p: &[Expr; 4]) -> Expr {
    &p[0] * x(0) - &p[1] * x(1) - &p[2] * x(2) - &p[3] * x(3)
}

/// `sqrt(p1² + p2² + p3² + m0²)`.
pub fn on_shell_energy(p1: &Expr, p2: &Expr, p3: &Expr, m0: &Expr) -> Expr {
    sqrt(&(p1.pow(2) + p2.pow(2) + p3.pow(2) + m0.pow(2)))
}

/// Diagonal of the four-dimensional Minkowski metric.
pub fn eta4(a: usize) -> i64 {
    if a == 0 {
        1
    } else {
        -1
    }
}
