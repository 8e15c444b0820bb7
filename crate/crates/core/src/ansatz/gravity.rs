use crate::symcore::{Expr, ZeroTest};
use crate::tensor::{invert_matrix, Metric6, DIM};

use super::shear::{shear_inverse, shear_lower};
use super::{eta4, x, AnsatzError, DiracAnsatz, ScalarAnsatz, VectorFieldAnsatz};

/// Matter content placed on top of a four-dimensional metric.
#[derive(Clone, Debug)]
pub enum GravityFields {
    /// `g4 ⊕ 1 ⊕ (−1)`.
    Vacuum,
    Scalar(ScalarAnsatz),
    /// Carried as `Â_α = A_α exp(i m0 x5)`.
    Proca(VectorFieldAnsatz, Expr),
    Dirac(DiracAnsatz),
}

/// `κ = 4 sqrt(π G)`.
pub fn kappa_value(g: f64) -> f64 {
    4.0 * (std::f64::consts::PI * g).sqrt()
}

/// `g00 = 1 + 2 ε x1`, all else Minkowski.
pub fn weak_field_g4(eps: &Expr) -> [[Expr; 4]; 4] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| match (a, b) {
            (0, 0) => Expr::one() + Expr::int(2) * eps * x(1),
            _ if a == b => Expr::int(eta4(a)),
            _ => Expr::zero(),
        })
    })
}

/// Curved four-metric `g4` with fields coupled through `κ`:
/// the scalar as `diag(g4, φ², −1)`, the vector with `κ Â_α` in the `x4` column,
/// the spinor with `κ K̂_α` and `κ K̂_5`.
pub fn gravity_metric(
    fields: &GravityFields,
    g4: &[[Expr; 4]; 4],
    kappa: &Expr,
    zt: &ZeroTest,
) -> Result<Metric6, AnsatzError> {
    for a in 0..4 {
        for b in a + 1..4 {
            if g4[a][b] != g4[b][a] {
                return Err(AnsatzError::Tensor(crate::tensor::TensorError::NotSymmetric { row: a, col: b }));
            }
        }
    }
    let m4: Vec<Vec<Expr>> = g4.iter().map(|r| r.to_vec()).collect();
    let (inv, _) = invert_matrix(&m4, zt).map_err(|_| AnsatzError::Singular4)?;
    let g4_inv: [[Expr; 4]; 4] = std::array::from_fn(|a| std::array::from_fn(|b| inv[a][b].clone()));
    let (u, w, diag44) = match fields {
        GravityFields::Vacuum => (None, Expr::zero(), Expr::one()),
        GravityFields::Scalar(s) => (None, Expr::zero(), s.g44()),
        GravityFields::Proca(v, m0) => {
            if m0.is_zero() {
                return Err(AnsatzError::ZeroMass);
            }
            let hat = v.clone().with_mass(m0.clone()).metric_components();
            (Some(hat.map(|c| kappa * c)), Expr::zero(), Expr::one())
        }
        GravityFields::Dirac(d) => {
            let k = d.k_hat();
            let u = [0, 1, 2, 3].map(|i| kappa * &k[i]);
            (Some(u), kappa * &k[5], Expr::one())
        }
    };
    let (lower, upper) = match u {
        Some(u) => (shear_lower(g4, &u, &w), shear_inverse(&g4_inv, &u, &w)),
        None => {
            let mut lo = vec![vec![Expr::zero(); DIM]; DIM];
            let mut up = vec![vec![Expr::zero(); DIM]; DIM];
            for a in 0..4 {
                for b in 0..4 {
                    lo[a][b] = g4[a][b].clone();
                    up[a][b] = g4_inv[a][b].clone();
                }
            }
            up[4][4] = diag44.pow(-1);
            lo[4][4] = diag44;
            lo[5][5] = Expr::int(-1);
            up[5][5] = Expr::int(-1);
            (lo, up)
        }
    };
    Ok(Metric6::with_claimed_inverse(lower, upper, "(+,-,-,-,+,-)", zt)?)
}
