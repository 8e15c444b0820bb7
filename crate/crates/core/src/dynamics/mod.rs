//! Geodesics in complexified coordinates, intervals along them, and the
//! densities derived from `x4`.

mod fringes;
mod study;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvature::oracle::MetricEvaluator;
use crate::curvature::Connection;
use std::collections::HashMap;

use crate::ansatz::ScalarAnsatz;
use crate::symcore::{add_all, coord, diff, exp, simplify, Assignment, Compiled, Expr, SymError, Symbol};
use crate::tensor::DIM;

pub use fringes::{
    brute_force_minima, far_field_minima, two_path_fringes, FringeProfile, Grid, SlitGeometry, ORACLE_REFINEMENT,
};

pub use study::{scalar_evaluators, scalar_geodesic_study, GeodesicStudy, STUDY_REFERENCE, STUDY_STEPS};

type C = Complex64;

/// Coordinates beyond this magnitude abort an integration.
pub const BLOW_UP: f64 = 1e12;
/// `|p0² − p1² − p2² − p3² − m0²|` allowed for an on-shell momentum.
pub const ON_SHELL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("momentum is off-shell (p² − m0² = {0:e})")]
    OffShell(f64),
    #[error("non-finite connection value at tau = {tau}")]
    NonFinite { tau: f64 },
    #[error("coordinates exceeded {BLOW_UP:e} at tau = {}", partial.states.last().map_or(0.0, |s| s.tau))]
    BlowUp { partial: Path },
    #[error("at least 2 steps are required, got {0}")]
    TooFewSteps(usize),
    #[error("p^{0} must be nonzero")]
    ZeroMomentum(usize),
    #[error("metric setup failed: {0}")]
    Setup(String),
    #[error("degenerate geometry: {0}")]
    Geometry(String),
    #[error(transparent)]
    Sym(#[from] SymError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub x: [C; DIM],
    pub v: [C; DIM],
    pub tau: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub states: Vec<GeodesicState>,
    pub h: f64,
    pub integrator: String,
    /// Trapezoid defect `max_A |Δv^A/h − ½(a_n + a_{n+1})^A|` per step.
    pub residuals: Vec<f64>,
}

/// `Γ^A_BC` compiled with parameters bound; coordinates stay free.
pub struct ConnectionEvaluator {
    compiled: Compiled,
    inputs: Vec<C>,
}

impl ConnectionEvaluator {
    pub fn new(conn: &Connection, params: &Assignment) -> Result<Self, SymError> {
        let exprs: Vec<Expr> = conn.tensor().components().to_vec();
        let mut vars: Vec<Symbol> = (0..DIM).map(coord).collect();
        let mut inputs = vec![C::new(0.0, 0.0); DIM];
        for e in &exprs {
            for s in e.free_symbols() {
                if !vars.contains(&s) {
                    inputs.push(params.get(s.name()).ok_or_else(|| SymError::MissingValue(s.name().to_string()))?);
                    vars.push(s);
                }
            }
        }
        Ok(ConnectionEvaluator { compiled: Compiled::new(&exprs, &vars)?, inputs })
    }

    /// `Γ^A_BC` flattened as `A*36 + B*6 + C`.
    pub fn eval(&self, x: &[C; DIM]) -> Vec<C> {
        let mut inputs = self.inputs.clone();
        inputs[..DIM].copy_from_slice(x);
        self.compiled.eval(&inputs)
    }
}

fn acceleration(gamma: &[C], v: &[C; DIM]) -> [C; DIM] {
    let mut a = [C::new(0.0, 0.0); DIM];
    for (k, ak) in a.iter_mut().enumerate() {
        let mut s = C::new(0.0, 0.0);
        for b in 0..DIM {
            for c in 0..DIM {
                s += gamma[k * DIM * DIM + b * DIM + c] * v[b] * v[c];
            }
        }
        *ak = -s;
    }
    a
}

/// `(dx/dτ, dv/dτ) = (v, −Γ^A_BC v^B v^C)`.
pub fn geodesic_rhs(s: &GeodesicState, gamma: &ConnectionEvaluator) -> Result<([C; DIM], [C; DIM]), DynamicsError> {
    let g = gamma.eval(&s.x);
    if g.iter().any(|z| !z.is_finite()) {
        return Err(DynamicsError::NonFinite { tau: s.tau });
    }
    Ok((s.v, acceleration(&g, &s.v)))
}

/// Momentum `(p0, p1, p2, p3)` and mass of a scalar geodesic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OnShell {
    pub p: [f64; 4],
    pub m0: f64,
}

impl OnShell {
    pub fn new(p1: f64, p2: f64, p3: f64, m0: f64) -> Self {
        let p0 = (p1 * p1 + p2 * p2 + p3 * p3 + m0 * m0).sqrt();
        OnShell { p: [p0, p1, p2, p3], m0 }
    }

    pub fn shell_defect(&self) -> f64 {
        let [p0, p1, p2, p3] = self.p;
        p0 * p0 - p1 * p1 - p2 * p2 - p3 * p3 - self.m0 * self.m0
    }

    /// `p·x − m0 x5` with `p·x = p0 x0 − p1 x1 − p2 x2 − p3 x3`.
    pub fn phase(&self, x: &[C; DIM]) -> C {
        let [p0, p1, p2, p3] = self.p;
        x[0] * p0 - x[1] * p1 - x[2] * p2 - x[3] * p3 - x[5] * self.m0
    }

    /// Parameters for the scalar metric's symbols.
    pub fn assignment(&self) -> Assignment {
        Assignment::new()
            .with_real("p0", self.p[0])
            .with_real("p1", self.p[1])
            .with_real("p2", self.p[2])
            .with_real("p3", self.p[3])
            .with_real("m0", self.m0)
    }
}

/// `x^α = c^α − i p^α τ²/2`, `x5 = c5 − i m0 τ²/2`,
/// `x4 = exp(i(p·x − m0 x5)) τ + c4` with the exponent taken at the same τ.
pub fn closed_form_state(tau: f64, k: &OnShell, c: &[C; DIM]) -> Result<GeodesicState, DynamicsError> {
    let defect = k.shell_defect();
    if defect.abs() > ON_SHELL_TOL * (1.0 + k.p[0] * k.p[0]) {
        return Err(DynamicsError::OffShell(defect));
    }
    let i = C::new(0.0, 1.0);
    let mut x = *c;
    let mut v = [C::new(0.0, 0.0); DIM];
    for a in 0..4 {
        x[a] = c[a] - i * k.p[a] * tau * tau / 2.0;
        v[a] = -i * k.p[a] * tau;
    }
    x[5] = c[5] - i * k.m0 * tau * tau / 2.0;
    v[5] = -i * k.m0 * tau;
    let w = (i * k.phase(&x)).exp();
    x[4] = w * tau + c[4];
    v[4] = w;
    Ok(GeodesicState { x, v, tau })
}

/// `ẍ^A + Γ^A_BC ẋ^B ẋ^C` for the closed-form geodesic of the scalar metric,
/// with symbolic `τ` and integration constants `c0..c5`.
pub fn symbolic_geodesic_residual(s: &ScalarAnsatz, conn: &Connection) -> Vec<Expr> {
    let tau = Expr::sym(&Symbol::real("tau"));
    let half_tau2 = Expr::ratio(1, 2) * tau.pow(2);
    let c: Vec<Expr> = (0..DIM).map(|a| Expr::sym(&Symbol::real(&format!("c{a}")))).collect();
    let mut x: Vec<Expr> = (0..DIM).map(|a| c[a].clone()).collect();
    for a in 0..4 {
        x[a] = &c[a] - Expr::i() * &s.p[a] * &half_tau2;
    }
    x[5] = &c[5] - Expr::i() * &s.m0 * &half_tau2;
    let theta = &s.p[0] * &x[0] - &s.p[1] * &x[1] - &s.p[2] * &x[2] - &s.p[3] * &x[3] - &s.m0 * &x[5];
    x[4] = &tau * exp(&(Expr::i() * theta)) + &c[4];
    let v: Vec<Expr> = x.iter().map(|e| simplify(&diff(e, &Symbol::real("tau")))).collect();
    let map: HashMap<Symbol, Expr> = (0..DIM).map(|a| (coord(a), x[a].clone())).collect();
    (0..DIM)
        .map(|a| {
            let mut terms = vec![diff(&v[a], &Symbol::real("tau"))];
            for b in 0..DIM {
                for cc in 0..DIM {
                    let g = conn.get(a, b, cc);
                    if !g.is_zero() {
                        terms.push(g.subs(&map) * &v[b] * &v[cc]);
                    }
                }
            }
            simplify(&add_all(terms))
        })
        .collect()
}

fn axpy(s: &GeodesicState, k: &([C; DIM], [C; DIM]), h: f64) -> GeodesicState {
    let mut out = *s;
    for a in 0..DIM {
        out.x[a] += k.0[a] * h;
        out.v[a] += k.1[a] * h;
    }
    out.tau += h;
    out
}

fn rk4_step(s: &GeodesicState, h: f64, g: &ConnectionEvaluator) -> Result<GeodesicState, DynamicsError> {
    let k1 = geodesic_rhs(s, g)?;
    let mut mid = axpy(s, &k1, h / 2.0);
    mid.tau = s.tau + h / 2.0;
    let k2 = geodesic_rhs(&mid, g)?;
    let mut mid2 = axpy(s, &k2, h / 2.0);
    mid2.tau = s.tau + h / 2.0;
    let k3 = geodesic_rhs(&mid2, g)?;
    let end = axpy(s, &k3, h);
    let k4 = geodesic_rhs(&end, g)?;
    let mut out = *s;
    for a in 0..DIM {
        out.x[a] += (k1.0[a] + k2.0[a] * 2.0 + k3.0[a] * 2.0 + k4.0[a]) * (h / 6.0);
        out.v[a] += (k1.1[a] + k2.1[a] * 2.0 + k3.1[a] * 2.0 + k4.1[a]) * (h / 6.0);
    }
    out.tau = s.tau + h;
    Ok(out)
}

/// Classical fixed-step RK4 from `initial.tau` to `tau_end`.
pub fn integrate(
    initial: &GeodesicState,
    tau_end: f64,
    steps: usize,
    gamma: &ConnectionEvaluator,
) -> Result<Path, DynamicsError> {
    if steps < 2 {
        return Err(DynamicsError::TooFewSteps(steps));
    }
    let h = (tau_end - initial.tau) / steps as f64;
    let mut path = Path { states: vec![*initial], h, integrator: "rk4".into(), residuals: Vec::with_capacity(steps) };
    let mut acc = geodesic_rhs(initial, gamma)?.1;
    for n in 0..steps {
        let s = path.states[n];
        let mut next = rk4_step(&s, h, gamma)?;
        next.tau = initial.tau + (n + 1) as f64 * h;
        if next.x.iter().any(|z| !z.is_finite() || z.norm() > BLOW_UP) {
            return Err(DynamicsError::BlowUp { partial: path });
        }
        let acc_next = geodesic_rhs(&next, gamma)?.1;
        let defect =
            (0..DIM).map(|a| ((next.v[a] - s.v[a]) / h - (acc[a] + acc_next[a]) * 0.5).norm()).fold(0.0, f64::max);
        path.residuals.push(defect);
        path.states.push(next);
        acc = acc_next;
    }
    Ok(path)
}

/// Largest `|x − x_closed|` over the states of `path`.
pub fn max_deviation(path: &Path, k: &OnShell, c: &[C; DIM]) -> Result<f64, DynamicsError> {
    let mut worst: f64 = 0.0;
    for s in &path.states {
        let exact = closed_form_state(s.tau, k, c)?;
        for a in 0..DIM {
            worst = worst.max((s.x[a] - exact.x[a]).norm());
        }
    }
    Ok(worst)
}

/// Step-halving study against a fine reference path: `(steps, max
/// deviation)` per entry and the observed orders between consecutive entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub errors: Vec<(usize, f64)>,
    pub orders: Vec<f64>,
}

pub fn convergence_study(
    start: &GeodesicState,
    tau_end: f64,
    steps: &[usize],
    reference: &[GeodesicState],
    gamma: &ConnectionEvaluator,
) -> Result<Convergence, DynamicsError> {
    let mut errors = Vec::new();
    for &n in steps {
        let path = integrate(start, tau_end, n, gamma)?;
        let stride = (reference.len() - 1) / n;
        let mut worst: f64 = 0.0;
        for (k, s) in path.states.iter().enumerate() {
            let r = &reference[k * stride];
            for a in 0..DIM {
                worst = worst.max((s.x[a] - r.x[a]).norm());
            }
        }
        errors.push((n, worst));
    }
    let orders = errors.windows(2).map(|w| (w[0].1 / w[1].1).ln() / (w[1].0 as f64 / w[0].0 as f64).ln()).collect();
    Ok(Convergence { errors, orders })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalStep {
    pub tau: f64,
    pub ds: C,
    /// `sqrt(|ds|²)`.
    pub dl: f64,
    pub dx4: C,
    pub ds_dx4: C,
}

/// `ds` per step from the quadratic form `g_AB v^A v^B`, averaged over the
/// step ends.
pub fn interval_along(path: &Path, g: &MetricEvaluator) -> Vec<IntervalStep> {
    let rate = |s: &GeodesicState| {
        let m = g.metric(&s.x);
        let mut q = C::new(0.0, 0.0);
        for a in 0..DIM {
            for b in 0..DIM {
                q += m[(a, b)] * s.v[a] * s.v[b];
            }
        }
        q.sqrt()
    };
    path.states
        .windows(2)
        .map(|w| {
            let ds = (rate(&w[0]) + rate(&w[1])) * (0.5 * (w[1].tau - w[0].tau));
            let dx4 = w[1].x[4] - w[0].x[4];
            IntervalStep { tau: w[0].tau, ds, dl: ds.norm_sqr().sqrt(), dx4, ds_dx4: ds / dx4 }
        })
        .collect()
}

/// Largest `|ds/dx4 − exp(−i(p·x − m0 x5))|` over the steps of `path`,
/// with the phase taken at the start of each step.
pub fn interval_law_residual(path: &Path, g: &MetricEvaluator, k: &OnShell) -> f64 {
    interval_along(path, g)
        .iter()
        .zip(&path.states)
        .map(|(step, s)| (step.ds_dx4 - (-C::new(0.0, 1.0) * k.phase(&s.x)).exp()).norm())
        .fold(0.0, f64::max)
}

/// `|Δ(x4²)| = |2/p^α| |ψ|² |Δx_α|` accumulated over `bins` equal bins of
/// `[lo, hi]` in coordinate `x_α`. Returns bin centres and densities.
pub fn x4_density(
    alpha: usize,
    p_alpha: f64,
    lo: f64,
    hi: f64,
    bins: usize,
    psi: impl Fn(f64) -> C,
) -> Result<Vec<(f64, f64)>, DynamicsError> {
    if p_alpha == 0.0 {
        return Err(DynamicsError::ZeroMomentum(alpha));
    }
    let width = (hi - lo) / bins.max(1) as f64;
    Ok((0..bins)
        .map(|k| {
            let centre = lo + (k as f64 + 0.5) * width;
            (centre, (2.0 / p_alpha).abs() * psi(centre).norm_sqr() * width.abs())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{scalar_metric, ScalarAnsatz};
    use crate::curvature::christoffel;
    use crate::symcore::ZeroTest;
    use crate::tensor::Metric6;

    fn scalar_setup(k: &OnShell) -> (Metric6, ConnectionEvaluator) {
        let sym = |n: &str| Expr::sym(&Symbol::real(n));
        let s = ScalarAnsatz::new([sym("p0"), sym("p1"), sym("p2"), sym("p3")], Expr::sym(&Symbol::positive("m0")));
        let g = scalar_metric(&s, &ZeroTest::default()).unwrap();
        let ev = ConnectionEvaluator::new(&christoffel(&g), &k.assignment()).unwrap();
        (g, ev)
    }

    fn consts() -> [C; DIM] {
        [0.1, -0.2, 0.3, 0.05, 0.0, 0.4].map(|r| C::new(r, 0.0))
    }

    #[test]
    fn closed_form_solves_geodesic_symbolically() {
        let sym = |n: &str| Expr::sym(&Symbol::real(n));
        let s = ScalarAnsatz::on_shell(sym("p1"), sym("p2"), sym("p3"), Expr::sym(&Symbol::positive("m0")));
        let g = scalar_metric(&s, &ZeroTest::default()).unwrap();
        let r = symbolic_geodesic_residual(&s, &christoffel(&g));
        assert!(ZeroTest::default().all_zero(&r, &Assignment::new()).is_zero());
        let off =
            ScalarAnsatz::new([&s.p[0] + Expr::one(), s.p[1].clone(), s.p[2].clone(), s.p[3].clone()], s.m0.clone());
        let g = scalar_metric(&off, &ZeroTest::default()).unwrap();
        let r = symbolic_geodesic_residual(&off, &christoffel(&g));
        assert!(!ZeroTest::default().all_zero(&r, &Assignment::new()).is_zero());
    }

    #[test]
    fn flat_metric_keeps_velocity() {
        let ev = ConnectionEvaluator::new(&christoffel(&Metric6::flat()), &Assignment::new()).unwrap();
        let s = GeodesicState { x: consts(), v: [C::new(1.0, 0.5); DIM], tau: 0.0 };
        let (_, dv) = geodesic_rhs(&s, &ev).unwrap();
        assert!(dv.iter().all(|z| z.norm() == 0.0));
        let path = integrate(&s, 1.0, 10, &ev).unwrap();
        let last = path.states.last().unwrap();
        for a in 0..DIM {
            assert!((last.x[a] - (s.x[a] + s.v[a])).norm() < 1e-14);
        }
    }

    #[test]
    fn closed_form_seed_has_expected_acceleration() {
        let k = OnShell::new(0.3, -0.4, 0.5, 1.0);
        let (_, ev) = scalar_setup(&k);
        let s = closed_form_state(0.3, &k, &consts()).unwrap();
        let (_, dv) = geodesic_rhs(&s, &ev).unwrap();
        assert!(dv[4].norm() < 1e-12);
        assert!((dv[0] - C::new(0.0, -k.p[0])).norm() < 1e-12);
        assert!((dv[5] - C::new(0.0, -k.m0)).norm() < 1e-12);
    }

    #[test]
    fn closed_form_at_origin_and_off_shell() {
        let k = OnShell::new(0.3, -0.4, 0.5, 1.0);
        let c = consts();
        let s = closed_form_state(0.0, &k, &c).unwrap();
        assert_eq!(s.x, c);
        assert!(s.v[..4].iter().all(|z| z.norm() == 0.0));
        assert!((s.v[4] - (C::new(0.0, 1.0) * k.phase(&c)).exp()).norm() < 1e-15);
        let mut bad = k;
        bad.p[0] += 1.0;
        assert!(matches!(closed_form_state(0.1, &bad, &c), Err(DynamicsError::OffShell(_))));
        let vac = closed_form_state(0.7, &OnShell::new(0.0, 0.0, 0.0, 0.0), &c).unwrap();
        assert!((vac.x[4] - (C::new(0.7, 0.0) + c[4])).norm() < 1e-15);
    }

    #[test]
    fn integration_tracks_closed_form() {
        let k = OnShell::new(0.3, -0.4, 0.5, 1.0);
        let (g, ev) = scalar_setup(&k);
        let start = closed_form_state(0.0, &k, &consts()).unwrap();
        let path = integrate(&start, 1.0, 200, &ev).unwrap();
        for s in &path.states {
            let exact = closed_form_state(s.tau, &k, &consts()).unwrap();
            for a in 0..DIM {
                assert!((s.x[a] - exact.x[a]).norm() < 1e-8);
            }
        }
        let me = MetricEvaluator::new(&g, &k.assignment()).unwrap();
        for step in interval_along(&path, &me) {
            assert!((step.ds_dx4.norm() - 1.0).abs() < 1e-8);
            assert!((step.dl - step.ds.norm()).abs() < 1e-15);
        }
        assert!(interval_law_residual(&path, &me, &k) < 1e-8);
    }

    #[test]
    fn perturbed_seed_converges_at_fourth_order() {
        let k = OnShell::new(1.0, 1.5, -2.0, 2.0);
        let (_, ev) = scalar_setup(&k);
        let mut start = closed_form_state(0.0, &k, &consts()).unwrap();
        start.v[1] += C::new(0.3, 0.0);
        start.v[4] *= 1.3;
        let reference = integrate(&start, 1.0, 5120, &ev).unwrap();
        let c = convergence_study(&start, 1.0, &[10, 20, 40, 80], &reference.states, &ev).unwrap();
        assert!(c.orders.iter().all(|&o| o >= 3.8), "{c:?}");
    }

    #[test]
    fn too_few_steps_and_blow_up() {
        let ev = ConnectionEvaluator::new(&christoffel(&Metric6::flat()), &Assignment::new()).unwrap();
        let s = GeodesicState { x: consts(), v: [C::new(1e13, 0.0); DIM], tau: 0.0 };
        assert_eq!(integrate(&s, 1.0, 1, &ev).unwrap_err(), DynamicsError::TooFewSteps(1));
        match integrate(&s, 1.0, 4, &ev).unwrap_err() {
            DynamicsError::BlowUp { partial } => assert_eq!(partial.states.len(), 1),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn flat_intervals_timelike_and_null() {
        let flat = Metric6::flat();
        let ev = ConnectionEvaluator::new(&christoffel(&flat), &Assignment::new()).unwrap();
        let me = MetricEvaluator::new(&flat, &Assignment::new()).unwrap();
        let mut v = [C::new(0.0, 0.0); DIM];
        v[0] = C::new(1.0, 0.0);
        v[1] = C::new(0.6, 0.0);
        let timelike = integrate(&GeodesicState { x: consts(), v, tau: 0.0 }, 1.0, 4, &ev).unwrap();
        for step in interval_along(&timelike, &me) {
            assert!(step.ds.im.abs() < 1e-15 && (step.ds.re - 0.2).abs() < 1e-14, "{step:?}");
            assert!((step.dl - step.ds.norm()).abs() < 1e-15);
        }
        v[1] = C::new(1.0, 0.0);
        let null = integrate(&GeodesicState { x: consts(), v, tau: 0.0 }, 1.0, 4, &ev).unwrap();
        assert!(interval_along(&null, &me).iter().all(|s| s.ds.norm() == 0.0));
    }

    #[test]
    fn single_wave_density_is_flat() {
        let d = x4_density(1, 0.5, -1.0, 1.0, 8, |x| (C::new(0.0, 0.5 * x)).exp()).unwrap();
        assert!(d.iter().all(|(_, v)| (v - 4.0 * 0.25).abs() < 1e-12));
        let half = x4_density(1, 1.0, -1.0, 1.0, 8, |_| C::new(1.0, 0.0)).unwrap();
        assert!((d[0].1 / half[0].1 - 2.0).abs() < 1e-12);
        let empty = x4_density(1, 1.0, 0.5, 0.5, 4, |_| C::new(1.0, 0.0)).unwrap();
        assert!(empty.iter().all(|(_, v)| *v == 0.0));
        assert_eq!(x4_density(2, 0.0, 0.0, 1.0, 4, |_| C::new(1.0, 0.0)).unwrap_err(), DynamicsError::ZeroMomentum(2));
    }
}
