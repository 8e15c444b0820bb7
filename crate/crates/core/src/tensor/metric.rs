use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::symcore::{mul, simplify, Assignment, Expr, ZeroTest, ZeroVerdict};

use super::TensorError;

pub const DIM: usize = 6;

/// Square matrix of expressions, row-major.
pub type Matrix = Vec<Vec<Expr>>;

/// Where the upper (inverse) block came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InverseKind {
    /// Adjugate over determinant, computed here.
    ComputedExact,
    /// Supplied with the ansatz and verified exact before being installed.
    Claimed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InverseVerdict {
    Exact,
    NotExact,
}

/// Outcome of checking `g * h = 1` entry by entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InverseCheck {
    pub verdict: InverseVerdict,
    pub max_residual: f64,
    /// `max |(g h - 1)_AB|` over the sample points.
    pub residuals: Vec<Vec<f64>>,
    /// Entries whose residual is not identically zero.
    pub failing: Vec<(usize, usize)>,
    pub samples: usize,
    pub seed: u64,
    pub witness: Option<Assignment>,
}

/// Symmetric 6x6 metric with its inverse.
#[derive(Clone, Debug)]
pub struct Metric6 {
    lower: Matrix,
    upper: Matrix,
    kind: InverseKind,
    signature: String,
    det: Option<Expr>,
    claimed: Option<Matrix>,
    claim_check: Option<InverseCheck>,
}

fn check_shape(m: &Matrix, n: usize) -> Result<(), TensorError> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(TensorError::ShapeMismatch);
    }
    Ok(())
}

fn check_symmetric(m: &Matrix) -> Result<(), TensorError> {
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            if m[i][j] != m[j][i] {
                return Err(TensorError::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(())
}

impl Metric6 {
    /// Metric with an adjugate inverse.
    pub fn new(lower: Matrix, signature: &str, zt: &ZeroTest) -> Result<Metric6, TensorError> {
        check_shape(&lower, DIM)?;
        check_symmetric(&lower)?;
        let (upper, det) = invert_matrix(&lower, zt)?;
        Ok(Metric6 {
            lower,
            upper,
            kind: InverseKind::ComputedExact,
            signature: signature.to_string(),
            det: Some(det),
            claimed: None,
            claim_check: None,
        })
    }

    /// Metric shipped with a claimed inverse. The claim is verified first; it
    /// is installed only when exact, otherwise the computed inverse is used and
    /// the claim kept for reporting.
    pub fn with_claimed_inverse(
        lower: Matrix,
        claimed: Matrix,
        signature: &str,
        zt: &ZeroTest,
    ) -> Result<Metric6, TensorError> {
        check_shape(&lower, DIM)?;
        check_shape(&claimed, DIM)?;
        check_symmetric(&lower)?;
        let check = verify_claimed_inverse(&lower, &claimed, zt);
        if check.verdict == InverseVerdict::Exact {
            Ok(Metric6 {
                lower,
                upper: claimed.clone(),
                kind: InverseKind::Claimed,
                signature: signature.to_string(),
                det: None,
                claimed: Some(claimed),
                claim_check: Some(check),
            })
        } else {
            let mut g = Metric6::new(lower, signature, zt)?;
            g.claimed = Some(claimed);
            g.claim_check = Some(check);
            Ok(g)
        }
    }

    pub fn diagonal(entries: [Expr; DIM], signature: &str, zt: &ZeroTest) -> Result<Metric6, TensorError> {
        let lower = (0..DIM)
            .map(|i| (0..DIM).map(|j| if i == j { entries[i].clone() } else { Expr::zero() }).collect())
            .collect();
        Metric6::new(lower, signature, zt)
    }

    /// `diag(1, -1, -1, -1, 1, -1)`.
    pub fn flat() -> Metric6 {
        let d = [1, -1, -1, -1, 1, -1].map(Expr::int);
        Metric6::diagonal(d, "(+,-,-,-,+,-)", &ZeroTest::default()).expect("flat metric is invertible")
    }

    pub fn lower(&self, a: usize, b: usize) -> &Expr {
        &self.lower[a][b]
    }

    pub fn upper(&self, a: usize, b: usize) -> &Expr {
        &self.upper[a][b]
    }

    pub fn lower_matrix(&self) -> &Matrix {
        &self.lower
    }

    pub fn upper_matrix(&self) -> &Matrix {
        &self.upper
    }

    pub fn inverse_kind(&self) -> InverseKind {
        self.kind
    }

    pub fn signature(&self) -> &str {
        &self.signature
    }

    /// Determinant, when the inverse was computed here.
    pub fn determinant(&self) -> Option<&Expr> {
        self.det.as_ref()
    }

    pub fn claimed_inverse(&self) -> Option<&Matrix> {
        self.claimed.as_ref()
    }

    pub fn claim_check(&self) -> Option<&InverseCheck> {
        self.claim_check.as_ref()
    }

    /// Residual check of the installed inverse.
    pub fn verify_inverse(&self, zt: &ZeroTest) -> InverseCheck {
        verify_claimed_inverse(&self.lower, &self.upper, zt)
    }

    /// Substitute into every entry of both blocks.
    pub fn map_entries(&self, f: impl Fn(&Expr) -> Expr + Sync + Send) -> Metric6 {
        let m = |x: &Matrix| -> Matrix { x.par_iter().map(|r| r.iter().map(&f).collect()).collect() };
        Metric6 {
            lower: m(&self.lower),
            upper: m(&self.upper),
            kind: self.kind,
            signature: self.signature.clone(),
            det: self.det.as_ref().map(&f),
            claimed: self.claimed.as_ref().map(m),
            claim_check: self.claim_check.clone(),
        }
    }
}

/// Fresh metric with a computed inverse, whatever `g` carried before.
pub fn invert_metric(g: &Metric6, zt: &ZeroTest) -> Result<Metric6, TensorError> {
    Metric6::new(g.lower.clone(), &g.signature, zt)
}

/// Entry-wise check of `lower * claimed = identity`.
pub fn verify_claimed_inverse(lower: &Matrix, claimed: &Matrix, zt: &ZeroTest) -> InverseCheck {
    let n = lower.len();
    let residual: Vec<Expr> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (a, b) = (k / n, k % n);
            let mut terms: Vec<Expr> = (0..n).map(|c| mul(&lower[a][c], &claimed[c][b])).collect();
            if a == b {
                terms.push(Expr::int(-1));
            }
            simplify(&crate::symcore::add_all(terms))
        })
        .collect();
    let survey = zt.survey(&residual, &Assignment::new());
    let residuals: Vec<Vec<f64>> = survey.max_abs.chunks(n).map(<[f64]>::to_vec).collect();
    let failing: Vec<(usize, usize)> =
        survey.zero.iter().enumerate().filter(|(_, z)| !**z).map(|(k, _)| (k / n, k % n)).collect();
    let verdict = if survey.all_zero() { InverseVerdict::Exact } else { InverseVerdict::NotExact };
    InverseCheck {
        verdict,
        max_residual: survey.max_residual(),
        residuals,
        failing,
        samples: survey.samples,
        seed: zt.seed,
        witness: survey.witness,
    }
}

/// Inverse and determinant of a square symbolic matrix by cofactors.
///
/// Minors are memoized over (row set, column set) bitmasks, so an `n x n`
/// matrix needs at most `C(2n, n)` of them, each simplified when formed.
pub fn invert_matrix(m: &Matrix, zt: &ZeroTest) -> Result<(Matrix, Expr), TensorError> {
    let n = m.len();
    check_shape(m, n)?;
    assert!(n <= 16, "dimension too large for bitmask minors");
    let full: u32 = (1u32 << n) - 1;
    let mut memo: HashMap<(u32, u32), Expr> = HashMap::new();
    let det = minor(m, full, full, &mut memo);
    if det.is_zero() {
        return Err(TensorError::Singular { determinant: det.to_string(), witness: None });
    }
    if let ZeroVerdict::Zero { .. } = zt.is_zero(&det) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(zt.seed);
        let at = crate::symcore::sample_point(&det.free_symbols(), &Assignment::new(), &mut rng);
        return Err(TensorError::Singular { determinant: det.to_string(), witness: Some(at) });
    }
    let cof: Vec<Vec<Expr>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = minor(m, full & !(1 << i), full & !(1 << j), &mut memo);
                    if (i + j) % 2 == 1 {
                        -c
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let inv_det = det.pow(-1);
    let upper: Matrix =
        (0..n).into_par_iter().map(|i| (0..n).map(|j| simplify(&(&cof[j][i] * &inv_det))).collect()).collect();
    Ok((upper, det))
}

fn minor(m: &Matrix, rows: u32, cols: u32, memo: &mut HashMap<(u32, u32), Expr>) -> Expr {
    if rows == 0 {
        return Expr::one();
    }
    if let Some(hit) = memo.get(&(rows, cols)) {
        return hit.clone();
    }
    let r = rows.trailing_zeros() as usize;
    let rest = rows & !(1 << r);
    let mut terms = Vec::new();
    let mut pos = 0;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[r][c];
        if !entry.is_zero() {
            let sub = minor(m, rest, cols & !(1 << c), memo);
            if !sub.is_zero() {
                let t = entry * sub;
                terms.push(if pos % 2 == 1 { -t } else { t });
            }
        }
        pos += 1;
    }
    let out = simplify(&crate::symcore::add_all(terms));
    memo.insert((rows, cols), out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{coord, exp, Symbol};

    fn zt() -> ZeroTest {
        ZeroTest::default()
    }

    #[test]
    fn flat_is_self_inverse() {
        let g = Metric6::flat();
        for a in 0..DIM {
            for b in 0..DIM {
                assert_eq!(g.upper(a, b), g.lower(a, b));
            }
        }
        assert_eq!(g.verify_inverse(&zt()).verdict, InverseVerdict::Exact);
    }

    #[test]
    fn diagonal_exponential_entry_inverts_to_reciprocal() {
        let f = Expr::i() * Expr::sym(&Symbol::real("p0")) * Expr::sym(&coord(0));
        let g44 = exp(&(Expr::int(-2) * &f));
        let d = [Expr::int(1), Expr::int(-1), Expr::int(-1), Expr::int(-1), g44, Expr::int(-1)];
        let g = Metric6::diagonal(d, "", &zt()).unwrap();
        assert_eq!(g.upper(4, 4), &simplify(&exp(&(Expr::int(2) * f))));
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let x = Expr::sym(&coord(1));
        let mut rows: Matrix = Metric6::flat().lower_matrix().clone();
        rows[0][0] = x.clone();
        rows[0][1] = x.clone();
        rows[1][0] = x.clone();
        rows[1][1] = x;
        let err = Metric6::new(rows, "", &zt()).unwrap_err();
        assert!(matches!(err, TensorError::Singular { .. }));
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let mut rows: Matrix = Metric6::flat().lower_matrix().clone();
        rows[0][1] = Expr::int(1);
        assert_eq!(Metric6::new(rows, "", &zt()).unwrap_err(), TensorError::NotSymmetric { row: 0, col: 1 });
    }

    #[test]
    fn wrong_claimed_inverse_falls_back() {
        let lower = Metric6::flat().lower_matrix().clone();
        let mut claimed = lower.clone();
        claimed[4][4] = Expr::int(2);
        let g = Metric6::with_claimed_inverse(lower, claimed, "", &zt()).unwrap();
        assert_eq!(g.inverse_kind(), InverseKind::ComputedExact);
        let check = g.claim_check().unwrap();
        assert_eq!(check.verdict, InverseVerdict::NotExact);
        assert_eq!(check.failing, vec![(4, 4)]);
        assert!((check.max_residual - 1.0).abs() < 1e-12);
    }
}
