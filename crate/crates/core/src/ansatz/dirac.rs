//! Spin-1/2 plane waves in the Dirac representation, embedded as a
//! five-component field `K̂_A` over `A ∈ {0, 1, 2, 3, 5}`.

use crate::symcore::{conj, diff, exp, simplify, sqrt, Expr, ZeroTest};
use crate::tensor::{Metric6, DIM};

use super::shear::{eta4_matrix, shear_inverse, shear_lower};
use super::{eta4, on_shell_energy, phase, x, AnsatzError, VectorFieldAnsatz};

/// Assignment table: for each solution and each of `K0, K1, K2, K3, K5`,
/// the factor multiplying `C g_BB` and the spinor component it picks.
/// The factor is `(re, im)`.
const TABLE: [[((i64, i64), usize); 5]; 4] = [
    [((1, 0), 0), ((1, 0), 3), ((0, -1), 3), ((1, 0), 2), ((1, 0), 0)],
    [((1, 0), 1), ((1, 0), 2), ((0, 1), 2), ((-1, 0), 3), ((1, 0), 1)],
    // K0 and K5 of the two negative-energy rows count components from one
    [((-1, 0), 2), ((-1, 0), 1), ((0, 1), 1), ((-1, 0), 0), ((1, 0), 2)],
    [((-1, 0), 3), ((-1, 0), 0), ((0, -1), 0), ((1, 0), 1), ((1, 0), 3)],
];

const SLOTS: [usize; 5] = [0, 1, 2, 3, 5];

#[derive(Clone, Debug)]
pub struct DiracAnsatz {
    pub sol: u8,
    /// `p0` is on-shell.
    pub p: [Expr; 4],
    pub m0: Expr,
    /// Spinor amplitudes; the full field is `amplitude * wave()`.
    pub amplitude: [Expr; 4],
    pub c: Expr,
    /// Coupling constant of the extra `exp(−iγ x4)` factor, if any.
    pub gamma: Option<Expr>,
}

/// `(φ0, φ1, φ2, φ3)` of the first positive-energy solution and `C`.
pub fn dirac_components(p1: &Expr, p2: &Expr, p3: &Expr, m0: &Expr) -> Result<([Expr; 4], Expr), AnsatzError> {
    let d = DiracAnsatz::new(1, p1.clone(), p2.clone(), p3.clone(), m0.clone())?;
    Ok((d.amplitude, d.c))
}

impl DiracAnsatz {
    pub fn new(sol: u8, p1: Expr, p2: Expr, p3: Expr, m0: Expr) -> Result<Self, AnsatzError> {
        if !(1..=4).contains(&sol) {
            return Err(AnsatzError::BadSolution(sol));
        }
        if m0.is_zero() {
            return Err(AnsatzError::ZeroMass);
        }
        if p3.is_zero() {
            return Err(AnsatzError::NormalizationUndefined);
        }
        let p0 = on_shell_energy(&p1, &p2, &p3, &m0);
        let d = &m0 + &p0;
        let n = sqrt(&(&d / (Expr::int(2) * &m0)));
        let plus = (&p1 + Expr::i() * &p2) / &d;
        let minus = (&p1 - Expr::i() * &p2) / &d;
        let z = &p3 / &d;
        let raw = match sol {
            1 => [Expr::one(), Expr::zero(), z.clone(), plus],
            2 => [Expr::zero(), Expr::one(), minus, -z],
            3 => [z.clone(), plus, Expr::one(), Expr::zero()],
            _ => [minus, -z, Expr::zero(), Expr::one()],
        };
        let amplitude = raw.map(|a| simplify(&(&n * a)));
        let c = sqrt(&(&d * Expr::int(2) * &m0)) / &p3;
        Ok(DiracAnsatz { sol, p: [p0, p1, p2, p3], m0, amplitude, c, gamma: None })
    }

    pub fn with_coupling(mut self, gamma: Expr) -> Self {
        self.gamma = Some(gamma);
        self
    }

    /// +1 for solutions 1 and 2, −1 for 3 and 4.
    pub fn energy_sign(&self) -> i64 {
        if self.sol <= 2 {
            1
        } else {
            -1
        }
    }

    /// `exp(∓iΦ)`.
    pub fn wave(&self) -> Expr {
        exp(&(Expr::int(-self.energy_sign()) * Expr::i() * phase(&self.p)))
    }

    pub fn psi(&self) -> [Expr; 4] {
        let w = self.wave();
        std::array::from_fn(|i| &self.amplitude[i] * &w)
    }

    /// Factor `exp(i m0 x5)`, times `exp(−iγ x4)` when coupled.
    pub fn extra_dimension_factor(&self) -> Expr {
        let mut arg = Expr::i() * &self.m0 * x(5);
        if let Some(g) = &self.gamma {
            arg = arg - Expr::i() * g * x(4);
        }
        exp(&arg)
    }

    /// `K̂_A` over all six indices; index 4 is zero.
    pub fn k_hat(&self) -> [Expr; 6] {
        let psi = self.psi();
        let f = self.extra_dimension_factor();
        let mut out: [Expr; 6] = std::array::from_fn(|_| Expr::zero());
        for (slot, &((re, im), idx)) in SLOTS.iter().zip(&TABLE[(self.sol - 1) as usize]) {
            let g = if *slot == 5 { -1 } else { eta4(*slot) };
            let factor = Expr::int(re * g) + Expr::int(im * g) * Expr::i();
            out[*slot] = simplify(&(factor * &self.c * &psi[idx] * &f));
        }
        out
    }

    /// Row of the Dirac system that `∂^B K̂_B` reproduces, and the sign.
    pub fn dirac_row(&self) -> (usize, i64) {
        match self.sol {
            1 => (0, 1),
            2 => (1, 1),
            3 => (2, -1),
            _ => (3, -1),
        }
    }

    /// `ψ̄ψ` of the amplitudes: 1 for solutions 1 and 2, −1 for 3 and 4.
    pub fn spinor_norm(&self) -> Expr {
        let a = &self.amplitude;
        let sq = |e: &Expr| e * conj(e);
        simplify(&(sq(&a[0]) + sq(&a[1]) - sq(&a[2]) - sq(&a[3])))
    }
}

/// The four rows of `−i (iγ^μ ∂_μ − m0) ψ` in the Dirac representation.
pub fn dirac_rows(psi: &[Expr; 4], m0: &Expr) -> [Expr; 4] {
    let d = |k: usize, c: usize| diff(&psi[c], &crate::symcore::coord(k));
    let i = Expr::i();
    let im = &i * m0;
    [
        d(0, 0) + d(1, 3) - &i * d(2, 3) + d(3, 2) + &im * &psi[0],
        d(0, 1) + d(1, 2) + &i * d(2, 2) - d(3, 3) + &im * &psi[1],
        d(0, 2) + d(1, 1) - &i * d(2, 1) + d(3, 0) - &im * &psi[2],
        d(0, 3) + d(1, 0) + &i * d(2, 0) - d(3, 1) - &im * &psi[3],
    ]
}

/// Half-spin metric: `g_αβ + K̂_α K̂_β`, `K̂_α` on `(α, 4)`, `K̂_α K̂_5` on
/// `(α, 5)`, `K̂_5` on `(4, 5)` and `−1 + K̂_5²` in the corner, with the claimed
/// inverse `g^αβ`, `−K̂^α`, `1 + K̂_A K̂^A`, `−K̂^5`, `−1`.
pub fn dirac_metric(d: &DiracAnsatz, zt: &ZeroTest) -> Result<Metric6, AnsatzError> {
    let k = d.k_hat();
    let u = [k[0].clone(), k[1].clone(), k[2].clone(), k[3].clone()];
    let g4 = eta4_matrix();
    let lower = shear_lower(&g4, &u, &k[5]);
    let claimed = shear_inverse(&g4, &u, &k[5]);
    Ok(Metric6::with_claimed_inverse(lower, claimed, "(+,-,-,-,+,-)", zt)?)
}

/// Electromagnetic and spin-1/2 fields together, the latter with the extra
/// factor `exp(−iγ x4)`. The inverse is computed.
pub fn coupled_metric(
    a: &VectorFieldAnsatz,
    d: &DiracAnsatz,
    gamma: &Expr,
    zt: &ZeroTest,
) -> Result<Metric6, AnsatzError> {
    let k = d.clone().with_coupling(gamma.clone()).k_hat();
    let av = a.metric_components();
    let mut m = vec![vec![Expr::zero(); DIM]; DIM];
    for i in 0..4 {
        for j in 0..4 {
            let base = if i == j { Expr::int(eta4(i)) } else { Expr::zero() };
            m[i][j] = simplify(&(base + &av[i] * &av[j] + &k[i] * &k[j]));
        }
        let s = simplify(&(&av[i] + &k[i]));
        m[i][4] = s.clone();
        m[4][i] = s;
        let c = simplify(&(&k[i] * &k[5]));
        m[i][5] = c.clone();
        m[5][i] = c;
    }
    m[4][4] = Expr::one();
    m[4][5] = k[5].clone();
    m[5][4] = k[5].clone();
    m[5][5] = simplify(&(k[5].pow(2) - Expr::one()));
    Ok(Metric6::new(m, "(+,-,-,-,+,-)", zt)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{Assignment, Symbol};
    use crate::tensor::{InverseKind, InverseVerdict};

    fn sym(n: &str) -> Expr {
        Expr::sym(&Symbol::real(n))
    }

    fn m0() -> Expr {
        Expr::sym(&Symbol::positive("m0"))
    }

    #[test]
    fn stress_of_first_solution_is_a_null_momentum_product() {
        // regression: simplify once reused a stale memo entry inside the field square
        let d = DiracAnsatz::new(1, sym("p1"), sym("p2"), sym("p3"), m0()).unwrap();
        let e = crate::ansatz::field_strength(&d.k_hat()).unwrap();
        let t = crate::ansatz::stress_tensor(&e, &crate::ansatz::flat5(), crate::ansatz::Provenance::DiracHat);
        let w = d.wave() * d.extra_dimension_factor();
        let at = ["x0", "x1", "x2", "x3", "x4", "x5"]
            .iter()
            .fold(Assignment::new(), |a, n| a.with_real(n, 0.15))
            .with_real("p1", 0.3)
            .with_real("p2", 0.4)
            .with_real("p3", 0.5)
            .with_real("m0", 1.0);
        let want = -d.p[0].pow(2) * w.pow(2);
        let got = crate::symcore::eval(t.tensor.get(&[0, 0]), &at).unwrap();
        let want = crate::symcore::eval(&want, &at).unwrap();
        assert!((want - got).norm() < 1e-9 * (1.0 + want.norm()), "{want} vs {got}");
    }

    fn ansatz(sol: u8) -> DiracAnsatz {
        DiracAnsatz::new(sol, sym("p1"), sym("p2"), sym("p3"), m0()).unwrap()
    }

    #[test]
    fn rejects_degenerate_parameters() {
        let e = DiracAnsatz::new(1, sym("p1"), sym("p2"), Expr::zero(), m0()).unwrap_err();
        assert_eq!(e.to_string(), "normalization C undefined (p3 = 0)");
        assert_eq!(
            DiracAnsatz::new(1, sym("p1"), sym("p2"), sym("p3"), Expr::zero()).unwrap_err(),
            AnsatzError::ZeroMass
        );
        assert_eq!(
            DiracAnsatz::new(5, sym("p1"), sym("p2"), sym("p3"), m0()).unwrap_err(),
            AnsatzError::BadSolution(5)
        );
    }

    #[test]
    fn each_solution_solves_its_dirac_system() {
        let zt = ZeroTest::default();
        for sol in 1..=4 {
            let d = ansatz(sol);
            let rows = dirac_rows(&d.psi(), &d.m0);
            assert!(zt.all_zero(&rows, &Assignment::new()).is_zero(), "sol {sol}");
            let expect = if sol <= 2 { 1 } else { -1 };
            assert!(zt.is_zero(&(d.spinor_norm() - Expr::int(expect))).is_zero(), "norm {sol}");
        }
    }

    #[test]
    fn first_solution_components_match_closed_form() {
        let (phi, c) = dirac_components(&sym("p1"), &sym("p2"), &sym("p3"), &m0()).unwrap();
        assert!(phi[1].is_zero());
        let at = Assignment::new().with_real("p1", 0.3).with_real("p2", -0.4).with_real("p3", 1.2).with_real("m0", 1.0);
        let p0 = (0.09f64 + 0.16 + 1.44 + 1.0).sqrt();
        let n = ((1.0 + p0) / 2.0).sqrt();
        let v = crate::symcore::eval(&phi[0], &at).unwrap();
        assert!((v.re - n).abs() < 1e-14 && v.im.abs() < 1e-14);
        let cv = crate::symcore::eval(&c, &at).unwrap();
        assert!((cv.re - ((1.0 + p0) * 2.0).sqrt() / 1.2).abs() < 1e-13);
    }

    #[test]
    fn half_spin_claimed_inverse_is_exact() {
        let g = dirac_metric(&ansatz(1), &ZeroTest::default()).unwrap();
        assert_eq!(g.claim_check().unwrap().verdict, InverseVerdict::Exact);
        assert_eq!(g.inverse_kind(), InverseKind::Claimed);
    }

    #[test]
    fn k_hat_has_no_index_four() {
        for sol in 1..=4 {
            let k = ansatz(sol).k_hat();
            assert!(k[4].is_zero());
            assert!(k.iter().enumerate().all(|(i, e)| i == 4 || !e.is_zero()));
        }
    }
}
