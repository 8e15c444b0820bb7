//! Christoffel symbols, Ricci tensor, Ricci scalar and Einstein tensor.
//!
//! Everything is built from the connection; the Riemann tensor is never
//! formed. Every contraction is simplified as soon as it is formed.

pub mod oracle;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::symcore::{add_all, coord, diff, mul, mul_all, simplify, Assignment, Expr, ZeroTest};
use crate::tensor::{Metric6, Symmetry, Tensor, Variance, DIM};

/// `Γ^C_AB`, symmetric in the lower pair.
#[derive(Clone, Debug)]
pub struct Connection {
    gamma: Tensor,
}

impl Connection {
    pub fn get(&self, c: usize, a: usize, b: usize) -> &Expr {
        self.gamma.get(&[c, a, b])
    }

    pub fn tensor(&self) -> &Tensor {
        &self.gamma
    }

    /// Indices `(c, a, b)` with `a <= b` whose component is not structurally zero.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for c in 0..DIM {
            for a in 0..DIM {
                for b in a..DIM {
                    if !self.get(c, a, b).is_zero() {
                        out.push((c, a, b));
                    }
                }
            }
        }
        out
    }
}

/// Result of comparing `R_AB` with `R_BA` by sampling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryCheck {
    pub symmetric: bool,
    pub max_residual: f64,
    pub asymmetric_pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct CurvatureBundle {
    pub connection: Connection,
    pub ricci: Tensor,
    pub scalar: Expr,
    pub einstein: Tensor,
    pub ricci_symmetry: SymmetryCheck,
}

fn metric_derivatives(g: &Metric6) -> Vec<Vec<Vec<Expr>>> {
    // dg[k][a][b] = d_k g_ab
    (0..DIM)
        .into_par_iter()
        .map(|k| {
            let x = coord(k);
            (0..DIM).map(|a| (0..DIM).map(|b| simplify(&diff(g.lower(a, b), &x))).collect()).collect()
        })
        .collect()
}

/// `Γ^C_AB = ½ g^CD (∂_A g_DB + ∂_B g_DA − ∂_D g_AB)`.
pub fn christoffel(g: &Metric6) -> Connection {
    let dg = metric_derivatives(g);
    // first-kind symbols Γ_DAB, a <= b
    let first: Vec<Vec<Vec<Expr>>> = (0..DIM)
        .into_par_iter()
        .map(|d| {
            (0..DIM)
                .map(|a| {
                    (0..DIM)
                        .map(|b| {
                            if b < a {
                                return Expr::zero();
                            }
                            let s = add_all([dg[a][d][b].clone(), dg[b][d][a].clone(), -&dg[d][a][b]]);
                            simplify(&mul(&Expr::ratio(1, 2), &s))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let comps: Vec<((usize, usize, usize), Expr)> = (0..DIM * DIM * DIM)
        .into_par_iter()
        .filter_map(|k| {
            let (c, a, b) = (k / (DIM * DIM), (k / DIM) % DIM, k % DIM);
            if b < a {
                return None;
            }
            let terms: Vec<Expr> = (0..DIM)
                .filter(|&d| !g.upper(c, d).is_zero() && !first[d][a][b].is_zero())
                .map(|d| mul(g.upper(c, d), &first[d][a][b]))
                .collect();
            Some(((c, a, b), simplify(&add_all(terms))))
        })
        .collect();
    let mut gamma = Tensor::zeros(DIM, &[Variance::Upper, Variance::Lower, Variance::Lower]);
    for ((c, a, b), v) in comps {
        gamma.set(&[c, b, a], v.clone());
        gamma.set(&[c, a, b], v);
    }
    Connection { gamma: gamma.with_symmetry(Symmetry::Symmetric(1, 2)) }
}

/// All 36 components of
/// `R_AB = ∂_C Γ^C_AB − ∂_B Γ^C_AC + Γ^C_AB Γ^D_CD − Γ^C_AD Γ^D_BC`.
pub fn ricci_from(conn: &Connection) -> Tensor {
    let trace: Vec<Expr> =
        (0..DIM).map(|a| simplify(&add_all((0..DIM).map(|c| conn.get(c, a, c).clone()).collect::<Vec<_>>()))).collect();
    let comps: Vec<Expr> = (0..DIM * DIM)
        .into_par_iter()
        .map(|k| {
            let (a, b) = (k / DIM, k % DIM);
            let mut terms = Vec::new();
            for c in 0..DIM {
                terms.push(diff(conn.get(c, a, b), &coord(c)));
            }
            terms.push(-diff(&trace[a], &coord(b)));
            for c in 0..DIM {
                let gab = conn.get(c, a, b);
                if !gab.is_zero() && !trace[c].is_zero() {
                    terms.push(mul(gab, &trace[c]));
                }
                for d in 0..DIM {
                    let x = conn.get(c, a, d);
                    let y = conn.get(d, b, c);
                    if !x.is_zero() && !y.is_zero() {
                        terms.push(mul_all([Expr::int(-1), x.clone(), y.clone()]));
                    }
                }
            }
            simplify(&add_all(terms))
        })
        .collect();
    Tensor::from_fn(DIM, &[Variance::Lower, Variance::Lower], |idx| comps[idx[0] * DIM + idx[1]].clone())
}

pub fn ricci(g: &Metric6) -> Tensor {
    ricci_from(&christoffel(g))
}

/// `R = g^AB R_AB`.
pub fn ricci_scalar(g: &Metric6, ricci: &Tensor) -> Expr {
    let mut terms = Vec::new();
    for a in 0..DIM {
        for b in 0..DIM {
            let (u, r) = (g.upper(a, b), ricci.get(&[a, b]));
            if !u.is_zero() && !r.is_zero() {
                terms.push(mul(u, r));
            }
        }
    }
    simplify(&add_all(terms))
}

/// `G_AB = R_AB − ½ R g_AB`.
pub fn einstein_from(g: &Metric6, ricci: &Tensor, scalar: &Expr) -> Tensor {
    let half_r = simplify(&mul(&Expr::ratio(1, 2), scalar));
    let t = Tensor::from_fn(DIM, &[Variance::Lower, Variance::Lower], |idx| {
        let (a, b) = (idx[0], idx[1]);
        simplify(&(ricci.get(&[a, b]) - mul(&half_r, g.lower(a, b))))
    });
    t.with_symmetry(ricci.symmetry())
}

pub fn check_symmetry(t: &Tensor, zt: &ZeroTest, fixed: &Assignment) -> SymmetryCheck {
    let mut pairs = Vec::new();
    let mut exprs = Vec::new();
    for a in 0..DIM {
        for b in a + 1..DIM {
            pairs.push((a, b));
            exprs.push(simplify(&(t.get(&[a, b]) - t.get(&[b, a]))));
        }
    }
    let survey = zt.survey(&exprs, fixed);
    let asymmetric_pairs = pairs.iter().zip(&survey.zero).filter(|(_, z)| !**z).map(|(p, _)| *p).collect();
    SymmetryCheck { symmetric: survey.all_zero(), max_residual: survey.max_residual(), asymmetric_pairs }
}

/// Connection, Ricci, scalar and Einstein tensor in one pass.
pub fn einstein_tensor(g: &Metric6, zt: &ZeroTest) -> CurvatureBundle {
    let connection = christoffel(g);
    let mut ricci = ricci_from(&connection);
    let ricci_symmetry = check_symmetry(&ricci, zt, &Assignment::new());
    if ricci_symmetry.symmetric {
        ricci = ricci.with_symmetry(Symmetry::Symmetric(0, 1));
    }
    let scalar = ricci_scalar(g, &ricci);
    let einstein = einstein_from(g, &ricci, &scalar);
    CurvatureBundle { connection, ricci, scalar, einstein, ricci_symmetry }
}
