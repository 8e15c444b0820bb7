//! The scalar-metric geodesic run used by the command line and acceptance:
//! integrate from the closed form, compare, and measure the order.

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::{
    closed_form_state, convergence_study, integrate, interval_law_residual, max_deviation, ConnectionEvaluator,
    Convergence, DynamicsError, OnShell, Path,
};
use crate::ansatz::{scalar_metric, ScalarAnsatz};
use crate::curvature::christoffel;
use crate::curvature::oracle::MetricEvaluator;
use crate::symcore::{Expr, Symbol, ZeroTest};
use crate::tensor::DIM;

/// Step counts of the convergence study.
pub const STUDY_STEPS: [usize; 4] = [10, 20, 40, 80];
/// Steps of the fine reference run; a multiple of every study count.
pub const STUDY_REFERENCE: usize = 5120;

/// Scalar metric with symbolic momenta, compiled at `k`.
pub fn scalar_evaluators(k: &OnShell) -> Result<(ConnectionEvaluator, MetricEvaluator), DynamicsError> {
    let sym = |n: &str| Expr::sym(&Symbol::real(n));
    let s = ScalarAnsatz::new([sym("p0"), sym("p1"), sym("p2"), sym("p3")], Expr::sym(&Symbol::positive("m0")));
    let g = scalar_metric(&s, &ZeroTest::default()).map_err(|e| DynamicsError::Setup(e.to_string()))?;
    let conn = ConnectionEvaluator::new(&christoffel(&g), &k.assignment())?;
    let metric = MetricEvaluator::new(&g, &k.assignment()).map_err(|e| DynamicsError::Setup(e.to_string()))?;
    Ok((conn, metric))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicStudy {
    pub path: Path,
    pub max_deviation: f64,
    pub interval_law_residual: f64,
    pub convergence: Convergence,
}

impl GeodesicStudy {
    pub fn max_step_defect(&self) -> f64 {
        self.path.residuals.iter().cloned().fold(0.0, f64::max)
    }

    pub fn min_order(&self) -> f64 {
        self.convergence.orders.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Integrates the closed-form seed with constants `c` over `[0, tau_end]`.
/// That seed is followed exactly by RK4 (its velocity is linear in τ), so
/// the order is measured on a perturbed seed instead.
pub fn scalar_geodesic_study(
    k: &OnShell,
    c: &[C; DIM],
    tau_end: f64,
    steps: usize,
) -> Result<GeodesicStudy, DynamicsError> {
    let (conn, metric) = scalar_evaluators(k)?;
    let start = closed_form_state(0.0, k, c)?;
    let path = integrate(&start, tau_end, steps, &conn)?;
    let max_deviation = max_deviation(&path, k, c)?;
    let interval_law_residual = interval_law_residual(&path, &metric, k);

    let mut bent = start;
    bent.v[1] += C::new(0.3, 0.0);
    bent.v[4] *= 1.3;
    let reference = integrate(&bent, tau_end, STUDY_REFERENCE, &conn)?;
    let convergence = convergence_study(&bent, tau_end, &STUDY_STEPS, &reference.states, &conn)?;
    Ok(GeodesicStudy { path, max_deviation, interval_law_residual, convergence })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn study_is_fourth_order_and_tracks_closed_form() {
        let k = OnShell::new(0.3, -0.2, 0.5, 1.0);
        let c = [0.1, -0.2, 0.3, 0.05, 0.0, 0.4].map(|r| C::new(r, 0.0));
        let s = scalar_geodesic_study(&k, &c, 1.0, 200).unwrap();
        assert!(s.max_deviation < 1e-10, "{}", s.max_deviation);
        assert!(s.interval_law_residual < 1e-10, "{}", s.interval_law_residual);
        assert!(s.min_order() > 3.8, "{:?}", s.convergence);
    }

    #[test]
    fn off_shell_momentum_is_rejected() {
        let mut k = OnShell::new(0.3, -0.2, 0.5, 1.0);
        k.p[0] += 0.1;
        let c = [C::new(0.0, 0.0); DIM];
        assert!(matches!(scalar_geodesic_study(&k, &c, 1.0, 10), Err(DynamicsError::OffShell(_))));
    }
}
