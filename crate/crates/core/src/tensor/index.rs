use crate::symcore::{add_all, mul, simplify, Expr};

use super::dense::{Symmetry, Tensor, Variance};
use super::metric::{Metric6, DIM};
use super::TensorError;

fn contract_slot(t: &Tensor, slot: usize, target: Variance, g: &[Vec<Expr>]) -> Result<Tensor, TensorError> {
    if slot >= t.rank() {
        return Err(TensorError::SlotOutOfRange { slot, rank: t.rank() });
    }
    if t.variance()[slot] == target {
        return Err(TensorError::VarianceMismatch { slot });
    }
    if t.dim() != DIM {
        return Err(TensorError::ShapeMismatch);
    }
    let mut variance = t.variance().to_vec();
    variance[slot] = target;
    let out = Tensor::from_fn(DIM, &variance, |idx| {
        let mut src = idx.to_vec();
        let a = idx[slot];
        let terms: Vec<Expr> = (0..DIM)
            .filter(|&b| !g[a][b].is_zero())
            .map(|b| {
                src[slot] = b;
                mul(&g[a][b], t.get(&src))
            })
            .collect();
        add_all(terms)
    });
    Ok(out.simplified().with_symmetry(Symmetry::None))
}

/// Contract `slot` (lower) with the inverse metric.
pub fn raise_index(t: &Tensor, slot: usize, g: &Metric6) -> Result<Tensor, TensorError> {
    contract_slot(t, slot, Variance::Upper, g.upper_matrix())
}

/// Contract `slot` (upper) with the metric.
pub fn lower_index(t: &Tensor, slot: usize, g: &Metric6) -> Result<Tensor, TensorError> {
    contract_slot(t, slot, Variance::Lower, g.lower_matrix())
}

/// Full contraction `g^{AC} g^{BD} S_AB T_CD` of two lower rank-2 tensors.
pub fn contract_all(s: &Tensor, t: &Tensor, g: &Metric6) -> Result<Expr, TensorError> {
    if s.rank() != 2 || t.rank() != 2 {
        return Err(TensorError::ShapeMismatch);
    }
    let t_up = raise_index(&raise_index(t, 0, g)?, 1, g)?;
    let mut terms = Vec::new();
    for a in 0..DIM {
        for b in 0..DIM {
            terms.push(mul(s.get(&[a, b]), t_up.get(&[a, b])));
        }
    }
    Ok(simplify(&add_all(terms)))
}
