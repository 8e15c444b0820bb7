use crate::symcore::{exp, sqrt, Expr, ZeroTest};
use crate::tensor::Metric6;

use super::shear::{eta4_matrix, shear_inverse, shear_lower};
use super::{phase, x, AnsatzError};

/// Four-potential `A_α` (lower index), optionally massive. A massive field
/// is carried as `Â_α = A_α exp(i m0 x5)`.
#[derive(Clone, Debug)]
pub struct VectorFieldAnsatz {
    pub a: [Expr; 4],
    pub mass: Option<Expr>,
    /// Wave vector and polarization when built as a plane wave.
    pub plane_wave: Option<([Expr; 4], [Expr; 4])>,
}

impl VectorFieldAnsatz {
    pub fn new(a: [Expr; 4]) -> Self {
        VectorFieldAnsatz { a, mass: None, plane_wave: None }
    }

    /// `A_α = ε_α exp(−i k·x)`.
    pub fn plane_wave(k: [Expr; 4], pol: [Expr; 4]) -> Self {
        let e = exp(&(-Expr::i() * phase(&k)));
        let a = std::array::from_fn(|i| &pol[i] * &e);
        VectorFieldAnsatz { a, mass: None, plane_wave: Some((k, pol)) }
    }

    pub fn with_mass(mut self, m0: Expr) -> Self {
        self.mass = Some(m0);
        self
    }

    /// `sqrt(k1² + k2² + k3²)`.
    pub fn null_energy(k1: &Expr, k2: &Expr, k3: &Expr) -> Expr {
        sqrt(&(k1.pow(2) + k2.pow(2) + k3.pow(2)))
    }

    /// `k^α ε_α`.
    pub fn transversality(&self) -> Option<Expr> {
        let (k, pol) = self.plane_wave.as_ref()?;
        Some(&k[0] * &pol[0] + &k[1] * &pol[1] + &k[2] * &pol[2] + &k[3] * &pol[3])
    }

    /// Components entering the metric: `A_α`, or `Â_α` when massive.
    pub fn metric_components(&self) -> [Expr; 4] {
        match &self.mass {
            None => self.a.clone(),
            Some(m) => {
                let e = exp(&(Expr::i() * m * x(5)));
                std::array::from_fn(|i| &self.a[i] * &e)
            }
        }
    }

    /// Components over all six indices; 4 and 5 are zero.
    pub fn components6(&self) -> [Expr; 6] {
        let c = self.metric_components();
        [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone(), Expr::zero(), Expr::zero()]
    }
}

/// `g_αβ + A_α A_β` on the four-block, `A_α` on `(α, 4)`, `g44 = 1`,
/// `g55 = −1`, shipped with the claimed inverse `g^αβ`, `−A^α`, `1 + A²`, `−1`.
pub fn photon_metric(field: &VectorFieldAnsatz, zt: &ZeroTest) -> Result<Metric6, AnsatzError> {
    if field.mass.is_some() {
        return Err(AnsatzError::Massive);
    }
    sheared(&field.a, zt)
}

/// Same structure as [`photon_metric`] with `Â_α = A_α exp(i m0 x5)`.
pub fn proca_metric(field: &VectorFieldAnsatz, m0: &Expr, zt: &ZeroTest) -> Result<Metric6, AnsatzError> {
    if m0.is_zero() {
        return Err(AnsatzError::ZeroMass);
    }
    let hat = field.clone().with_mass(m0.clone()).metric_components();
    sheared(&hat, zt)
}

fn sheared(u: &[Expr; 4], zt: &ZeroTest) -> Result<Metric6, AnsatzError> {
    let g4 = eta4_matrix();
    let lower = shear_lower(&g4, u, &Expr::zero());
    let claimed = shear_inverse(&g4, u, &Expr::zero());
    Ok(Metric6::with_claimed_inverse(lower, claimed, "(+,-,-,-,+,-)", zt)?)
}
