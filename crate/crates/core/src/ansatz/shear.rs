//! Metrics of the form `g4 ⊕ 1 ⊕ (−1)` sheared along `x4`:
//!
//! `ds² = g_αβ dx^α dx^β + (dx4 + u_α dx^α + w dx5)² − dx5²`.
//!
//! The inverse follows from `S⁻¹ D⁻¹ S⁻ᵀ` in closed form.

use crate::symcore::{add_all, mul, simplify, Expr};
use crate::tensor::{Matrix, DIM};

/// Lower components for four-dimensional `g4`, column `u` and corner `w`.
pub fn shear_lower(g4: &[[Expr; 4]; 4], u: &[Expr; 4], w: &Expr) -> Matrix {
    let mut m = vec![vec![Expr::zero(); DIM]; DIM];
    for a in 0..4 {
        for b in 0..4 {
            m[a][b] = simplify(&(&g4[a][b] + mul(&u[a], &u[b])));
        }
        m[a][4] = u[a].clone();
        m[4][a] = u[a].clone();
        let c = simplify(&mul(&u[a], w));
        m[a][5] = c.clone();
        m[5][a] = c;
    }
    m[4][4] = Expr::one();
    m[4][5] = w.clone();
    m[5][4] = w.clone();
    m[5][5] = simplify(&(w.pow(2) - Expr::one()));
    m
}

/// Inverse of [`shear_lower`] given the inverse of `g4`:
/// `g^αβ`, `−u^α` on `(α, 4)`, `1 + u_α u^α − w²` on `(4, 4)`, `w` on `(4, 5)`
/// and `−1` on `(5, 5)`.
pub fn shear_inverse(g4_inv: &[[Expr; 4]; 4], u: &[Expr; 4], w: &Expr) -> Matrix {
    let mut m = vec![vec![Expr::zero(); DIM]; DIM];
    let up: Vec<Expr> =
        (0..4).map(|a| simplify(&add_all((0..4).map(|b| mul(&g4_inv[a][b], &u[b])).collect::<Vec<_>>()))).collect();
    for a in 0..4 {
        for b in 0..4 {
            m[a][b] = g4_inv[a][b].clone();
        }
        m[a][4] = -&up[a];
        m[4][a] = -&up[a];
    }
    let uu = add_all((0..4).map(|a| mul(&u[a], &up[a])).collect::<Vec<_>>());
    m[4][4] = simplify(&(Expr::one() + uu - w.pow(2)));
    m[4][5] = w.clone();
    m[5][4] = w.clone();
    m[5][5] = Expr::int(-1);
    m
}

pub(crate) fn eta4_matrix() -> [[Expr; 4]; 4] {
    std::array::from_fn(|a| std::array::from_fn(|b| if a == b { Expr::int(super::eta4(a)) } else { Expr::zero() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{Symbol, ZeroTest};
    use crate::tensor::{verify_claimed_inverse, InverseVerdict};

    #[test]
    fn closed_form_inverse_is_exact_for_generic_column() {
        let u: [Expr; 4] = std::array::from_fn(|a| Expr::sym(&Symbol::complex(&format!("u{a}"))));
        let w = Expr::sym(&Symbol::complex("w"));
        let g = eta4_matrix();
        let check = verify_claimed_inverse(&shear_lower(&g, &u, &w), &shear_inverse(&g, &u, &w), &ZeroTest::default());
        assert_eq!(check.verdict, InverseVerdict::Exact);
    }
}
