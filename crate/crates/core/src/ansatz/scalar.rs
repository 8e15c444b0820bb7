use crate::symcore::{exp, Expr, ZeroTest};
use crate::tensor::{Metric6, TensorError};

use super::{on_shell_energy, phase, x};

/// Plane-wave scalar `φ = exp(−i a_α x^α)` with `a_α = p_α/ħ`, carried by
/// `g44 = φ² exp(−2i a5 x5)` and `a5 = −m0/ħ`.
#[derive(Clone, Debug)]
pub struct ScalarAnsatz {
    pub p: [Expr; 4],
    pub m0: Expr,
    pub hbar: Expr,
}

impl ScalarAnsatz {
    pub fn new(p: [Expr; 4], m0: Expr) -> Self {
        ScalarAnsatz { p, m0, hbar: Expr::one() }
    }

    /// `p0 = sqrt(p1² + p2² + p3² + m0²)`.
    pub fn on_shell(p1: Expr, p2: Expr, p3: Expr, m0: Expr) -> Self {
        let p0 = on_shell_energy(&p1, &p2, &p3, &m0);
        ScalarAnsatz::new([p0, p1, p2, p3], m0)
    }

    pub fn with_hbar(mut self, hbar: Expr) -> Self {
        self.hbar = hbar;
        self
    }

    /// `a_α` for α in 0..4.
    pub fn a(&self, alpha: usize) -> Expr {
        &self.p[alpha] / &self.hbar
    }

    pub fn a5(&self) -> Expr {
        -(&self.m0 / &self.hbar)
    }

    /// `a_α x^α` with the flat signature.
    pub fn phase(&self) -> Expr {
        phase(&self.p) / &self.hbar
    }

    pub fn phi(&self) -> Expr {
        exp(&(-Expr::i() * self.phase()))
    }

    /// Full `x5`-dependent field, `φ exp(−i a5 x5)`.
    pub fn phi_hat(&self) -> Expr {
        exp(&(-Expr::i() * (self.phase() + self.a5() * x(5))))
    }

    pub fn g44(&self) -> Expr {
        self.phi_hat().pow(2)
    }

    /// `p0² − p1² − p2² − p3² − m0²`, zero on-shell.
    pub fn mass_shell(&self) -> Expr {
        self.p[0].pow(2) - self.p[1].pow(2) - self.p[2].pow(2) - self.p[3].pow(2) - self.m0.pow(2)
    }
}

/// `diag(1, −1, −1, −1, g44, −1)`.
pub fn scalar_metric(s: &ScalarAnsatz, zt: &ZeroTest) -> Result<Metric6, TensorError> {
    let d = [Expr::int(1), Expr::int(-1), Expr::int(-1), Expr::int(-1), s.g44(), Expr::int(-1)];
    Metric6::diagonal(d, "(+,-,-,-,+,-)", zt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{diff, simplify, Symbol};

    fn sym(n: &str) -> Expr {
        Expr::sym(&Symbol::real(n))
    }

    #[test]
    fn g44_is_one_exponential() {
        let s = ScalarAnsatz::on_shell(sym("p1"), sym("p2"), sym("p3"), Expr::sym(&Symbol::positive("m0")));
        let g = s.g44();
        assert!(matches!(g.node(), crate::symcore::Node::Exp(_)), "{g}");
        let d5 = simplify(&diff(&g, &crate::symcore::coord(5)));
        let want = simplify(&(Expr::int(2) * Expr::i() * &s.m0 * &g));
        assert!(ZeroTest::default().is_zero(&(d5 - want)).is_zero());
    }

    #[test]
    fn on_shell_is_on_shell() {
        let s = ScalarAnsatz::on_shell(sym("p1"), sym("p2"), sym("p3"), Expr::sym(&Symbol::positive("m0")));
        assert!(ZeroTest::default().is_zero(&s.mass_shell()).is_zero());
        let g = scalar_metric(&s, &ZeroTest::default()).unwrap();
        assert!(ZeroTest::default().is_zero(&(g.upper(4, 4) * g.lower(4, 4) - Expr::one())).is_zero());
    }
}
