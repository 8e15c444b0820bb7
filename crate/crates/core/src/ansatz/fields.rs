use serde::{Deserialize, Serialize};

use crate::symcore::{add_all, coord, diff, exp, mul_all, simplify, Expr};
use crate::tensor::{Metric6, Symmetry, Tensor, Variance, DIM};

use super::AnsatzError;

/// Index set of the five-dimensional fields; `x4` is never differentiated.
pub const FIELD_INDICES: [usize; 5] = [0, 1, 2, 3, 5];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// Maxwell field of a four-potential.
    EM,
    /// Field of `Â_α = A_α exp(i m0 x5)`.
    VectorHat,
    /// Field of the five-component `K̂_A`.
    DiracHat,
    /// Closed form `p_a p_b exp(−2i p·x)`.
    MomentumProduct,
}

#[derive(Clone, Debug)]
pub struct StressTensor {
    pub tensor: Tensor,
    pub provenance: Provenance,
}

/// Flat `diag(1, −1, −1, −1, 1, −1)`.
pub fn flat5() -> Metric6 {
    Metric6::flat()
}

/// `F_AB = ∂_A V_B − ∂_B V_A` over [`FIELD_INDICES`].
pub fn field_strength(v: &[Expr; 6]) -> Result<Tensor, AnsatzError> {
    if !v[4].is_zero() {
        return Err(AnsatzError::IndexFour);
    }
    let t = Tensor::antisymmetric2(DIM, [Variance::Lower, Variance::Lower], |a, b| {
        if a == 4 || b == 4 {
            return Expr::zero();
        }
        simplify(&(diff(&v[b], &coord(a)) - diff(&v[a], &coord(b))))
    });
    Ok(t)
}

/// `T_AB = g_AB F_CD F^CD / 4 − F_A^C F_BC` over [`FIELD_INDICES`].
pub fn stress_tensor(f: &Tensor, g: &Metric6, provenance: Provenance) -> StressTensor {
    let idx = FIELD_INDICES;
    // F_A^C
    let mixed = |a: usize, c: usize| -> Expr {
        add_all(
            idx.iter()
                .filter(|&&d| !g.upper(c, d).is_zero() && !f.get(&[a, d]).is_zero())
                .map(|&d| g.upper(c, d) * f.get(&[a, d]))
                .collect::<Vec<_>>(),
        )
    };
    let mut mix = vec![vec![Expr::zero(); DIM]; DIM];
    for &a in &idx {
        for &c in &idx {
            mix[a][c] = simplify(&mixed(a, c));
        }
    }
    // F_CD F^CD = F_C^D F^C_D = Σ F_C^D g^CE F_ED
    let mut sq = Vec::new();
    for &c in &idx {
        for &d in &idx {
            for &e in &idx {
                let (x, y, z) = (&mix[c][d], g.upper(c, e), f.get(&[e, d]));
                if !x.is_zero() && !y.is_zero() && !z.is_zero() {
                    sq.push(mul_all([x.clone(), y.clone(), z.clone()]));
                }
            }
        }
    }
    let quarter_sq = simplify(&(Expr::ratio(1, 4) * add_all(sq)));
    let t = Tensor::symmetric2(DIM, [Variance::Lower, Variance::Lower], |a, b| {
        if a == 4 || b == 4 {
            return Expr::zero();
        }
        let mut terms = vec![g.lower(a, b) * &quarter_sq];
        for &c in &idx {
            if !mix[a][c].is_zero() && !f.get(&[b, c]).is_zero() {
                terms.push(-(&mix[a][c] * f.get(&[b, c])));
            }
        }
        simplify(&add_all(terms))
    });
    StressTensor { tensor: t.with_symmetry(Symmetry::Symmetric(0, 1)), provenance }
}

/// `T_ab = p_a p_b exp(−2i θ)` with `p` over [`FIELD_INDICES`].
pub fn momentum_stress(p: &[Expr; 5], theta: &Expr) -> StressTensor {
    let w = exp(&(Expr::int(-2) * Expr::i() * theta));
    let mut full: [Expr; 6] = std::array::from_fn(|_| Expr::zero());
    for (k, &a) in FIELD_INDICES.iter().enumerate() {
        full[a] = p[k].clone();
    }
    let t = Tensor::symmetric2(DIM, [Variance::Lower, Variance::Lower], |a, b| simplify(&(&full[a] * &full[b] * &w)));
    StressTensor { tensor: t.with_symmetry(Symmetry::Symmetric(0, 1)), provenance: Provenance::MomentumProduct }
}
