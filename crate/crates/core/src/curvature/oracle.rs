//! Independent numeric curvature from finite differences of the metric.
//!
//! Only the metric entries are compiled; derivatives come from stencils and
//! inverses from LU. First derivatives use central differences with
//! [`H_FIRST`]. Second derivatives use a fourth-order five-point stencil with
//! the larger [`H_SECOND`], because nesting two central differences at
//! `1e-5` leaves rounding noise near `1e-6`.

use nalgebra::Matrix6;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::symcore::{coord, exp, Assignment, Compiled, Expr, SymError, Symbol, ZeroTest};
use crate::tensor::{Metric6, TensorError, DIM};

use super::CurvatureBundle;

pub const H_FIRST: f64 = 1e-5;
pub const H_SECOND: f64 = 1e-3;

type C = Complex64;
type M6 = Matrix6<C>;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("metric is numerically singular at the sample point")]
    Singular,
}

/// Compiled metric entries with parameters bound.
pub struct MetricEvaluator {
    compiled: Compiled,
    inputs: Vec<C>,
}

impl MetricEvaluator {
    /// `params` must bind every non-coordinate symbol of the metric.
    pub fn new(g: &Metric6, params: &Assignment) -> Result<MetricEvaluator, OracleError> {
        let entries: Vec<Expr> =
            (0..DIM).flat_map(|a| (0..DIM).map(move |b| (a, b))).map(|(a, b)| g.lower(a, b).clone()).collect();
        let mut vars: Vec<Symbol> = (0..DIM).map(coord).collect();
        let mut inputs = vec![C::new(0.0, 0.0); DIM];
        for e in &entries {
            for s in e.free_symbols() {
                if !vars.contains(&s) {
                    let v = params.get(s.name()).ok_or_else(|| SymError::MissingValue(s.name().to_string()))?;
                    vars.push(s);
                    inputs.push(v);
                }
            }
        }
        Ok(MetricEvaluator { compiled: Compiled::new(&entries, &vars)?, inputs })
    }

    pub fn metric(&self, x: &[C; DIM]) -> M6 {
        let mut inputs = self.inputs.clone();
        inputs[..DIM].copy_from_slice(x);
        let out = self.compiled.eval(&inputs);
        M6::from_fn(|a, b| out[a * DIM + b])
    }
}

/// Numeric connection and curvature at one point.
#[derive(Clone, Debug)]
pub struct NumericCurvature {
    /// `gamma[c][a][b] = Γ^c_ab`.
    pub gamma: Vec<Vec<Vec<C>>>,
    pub ricci: M6,
    pub scalar: C,
    pub einstein: M6,
    pub metric: M6,
    pub inverse: M6,
}

fn shifted(x: &[C; DIM], k: usize, h: f64) -> [C; DIM] {
    let mut y = *x;
    y[k] += h;
    y
}

const D1_4: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];

pub fn numeric_curvature(ev: &MetricEvaluator, x: &[C; DIM]) -> Result<NumericCurvature, OracleError> {
    let g0 = ev.metric(x);
    let ginv = g0.try_inverse().ok_or(OracleError::Singular)?;
    let dg: Vec<M6> = (0..DIM)
        .map(|k| (ev.metric(&shifted(x, k, H_FIRST)) - ev.metric(&shifted(x, k, -H_FIRST))) / C::from(2.0 * H_FIRST))
        .collect();
    // ddg[k][l] = d_k d_l g
    let h = H_SECOND;
    let mut ddg = vec![vec![M6::zeros(); DIM]; DIM];
    for k in 0..DIM {
        for l in k..DIM {
            let m = if k == l {
                let f = |s: f64| ev.metric(&shifted(x, k, s * h));
                (f(-2.0) * C::from(-1.0)
                    + f(-1.0) * C::from(16.0)
                    + g0 * C::from(-30.0)
                    + f(1.0) * C::from(16.0)
                    + f(2.0) * C::from(-1.0))
                    / C::from(12.0 * h * h)
            } else {
                let mut acc = M6::zeros();
                for &(si, wi) in &D1_4 {
                    for &(sj, wj) in &D1_4 {
                        let y = shifted(&shifted(x, k, si * h), l, sj * h);
                        acc += ev.metric(&y) * C::from(wi * wj);
                    }
                }
                acc / C::from(144.0 * h * h)
            };
            ddg[k][l] = m;
            ddg[l][k] = m;
        }
    }
    let dginv: Vec<M6> = dg.iter().map(|d| -(ginv * d * ginv)).collect();

    // first-kind combination (without the 1/2): s[d][a][b]
    let first = |d: usize, a: usize, b: usize| dg[a][(d, b)] + dg[b][(d, a)] - dg[d][(a, b)];
    let mut gamma = vec![vec![vec![C::new(0.0, 0.0); DIM]; DIM]; DIM];
    for c in 0..DIM {
        for a in 0..DIM {
            for b in 0..DIM {
                let mut s = C::new(0.0, 0.0);
                for d in 0..DIM {
                    s += ginv[(c, d)] * first(d, a, b);
                }
                gamma[c][a][b] = s * 0.5;
            }
        }
    }
    // dgamma[k][c][a][b] = d_k Γ^c_ab
    let dgamma = |k: usize, c: usize, a: usize, b: usize| {
        let mut s = C::new(0.0, 0.0);
        for d in 0..DIM {
            let second = ddg[k][a][(d, b)] + ddg[k][b][(d, a)] - ddg[k][d][(a, b)];
            s += dginv[k][(c, d)] * first(d, a, b) + ginv[(c, d)] * second;
        }
        s * 0.5
    };
    let mut ricci = M6::zeros();
    for a in 0..DIM {
        for b in 0..DIM {
            let mut r = C::new(0.0, 0.0);
            for c in 0..DIM {
                r += dgamma(c, c, a, b) - dgamma(b, c, a, c);
                for d in 0..DIM {
                    r += gamma[c][a][b] * gamma[d][c][d] - gamma[c][a][d] * gamma[d][b][c];
                }
            }
            ricci[(a, b)] = r;
        }
    }
    let scalar = (ginv.component_mul(&ricci)).sum();
    let einstein = ricci - g0 * (scalar * 0.5);
    Ok(NumericCurvature { gamma, ricci, scalar, einstein, metric: g0, inverse: ginv })
}

/// Symbolic bundle compiled for evaluation at many points.
pub struct CompiledBundle {
    compiled: Compiled,
    inputs: Vec<C>,
}

const N_GAMMA: usize = DIM * DIM * DIM;
const N_RICCI: usize = DIM * DIM;

/// Values of a compiled bundle at one point.
pub struct BundleValues {
    pub gamma: Vec<C>,
    pub ricci: Vec<C>,
    pub scalar: C,
    pub einstein: Vec<C>,
    pub upper: Vec<C>,
}

impl CompiledBundle {
    pub fn new(g: &Metric6, bundle: &CurvatureBundle, params: &Assignment) -> Result<CompiledBundle, OracleError> {
        let mut exprs: Vec<Expr> = bundle.connection.tensor().components().to_vec();
        exprs.extend(bundle.ricci.components().iter().cloned());
        exprs.push(bundle.scalar.clone());
        exprs.extend(bundle.einstein.components().iter().cloned());
        for a in 0..DIM {
            for b in 0..DIM {
                exprs.push(g.upper(a, b).clone());
            }
        }
        let mut vars: Vec<Symbol> = (0..DIM).map(coord).collect();
        let mut inputs = vec![C::new(0.0, 0.0); DIM];
        for e in &exprs {
            for s in e.free_symbols() {
                if !vars.contains(&s) {
                    let v = params.get(s.name()).ok_or_else(|| SymError::MissingValue(s.name().to_string()))?;
                    vars.push(s);
                    inputs.push(v);
                }
            }
        }
        Ok(CompiledBundle { compiled: Compiled::new(&exprs, &vars)?, inputs })
    }

    pub fn eval(&self, x: &[C; DIM]) -> BundleValues {
        let mut inputs = self.inputs.clone();
        inputs[..DIM].copy_from_slice(x);
        let out = self.compiled.eval(&inputs);
        let (gamma, rest) = out.split_at(N_GAMMA);
        let (ricci, rest) = rest.split_at(N_RICCI);
        let (scalar, rest) = rest.split_at(1);
        let (einstein, upper) = rest.split_at(N_RICCI);
        BundleValues {
            gamma: gamma.to_vec(),
            ricci: ricci.to_vec(),
            scalar: scalar[0],
            einstein: einstein.to_vec(),
            upper: upper.to_vec(),
        }
    }
}

/// Largest relative deviation `|sym - num| / (1 + |num|)` per object.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OracleComparison {
    pub christoffel: f64,
    pub ricci: f64,
    pub scalar: f64,
    pub einstein: f64,
    pub points: usize,
}

impl OracleComparison {
    pub fn worst(&self) -> f64 {
        self.christoffel.max(self.ricci).max(self.scalar).max(self.einstein)
    }
}

fn rel(sym: C, num: C) -> f64 {
    (sym - num).norm() / (1.0 + num.norm())
}

/// Sample point: coordinates real in `[-1, 1]`.
pub fn sample_coordinates(rng: &mut ChaCha8Rng) -> [C; DIM] {
    std::array::from_fn(|_| C::new(rng.gen_range(-1.0..=1.0), 0.0))
}

/// Seeded values for every non-coordinate symbol of `g` that `fixed` leaves unbound.
pub fn sample_parameters(g: &Metric6, fixed: &Assignment, seed: u64) -> Assignment {
    let coords: Vec<Symbol> = (0..DIM).map(coord).collect();
    let mut symbols = std::collections::BTreeSet::new();
    for a in 0..DIM {
        for b in 0..DIM {
            symbols.extend(g.lower(a, b).free_symbols().into_iter().filter(|s| !coords.contains(s)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    crate::symcore::sample_point(&symbols, fixed, &mut rng)
}

/// Compare the symbolic bundle against the finite-difference oracle.
pub fn compare_with_oracle(
    g: &Metric6,
    bundle: &CurvatureBundle,
    params: &Assignment,
    points: usize,
    seed: u64,
) -> Result<OracleComparison, OracleError> {
    let ev = MetricEvaluator::new(g, params)?;
    let cb = CompiledBundle::new(g, bundle, params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = OracleComparison { points, ..Default::default() };
    for _ in 0..points {
        let x = sample_coordinates(&mut rng);
        let num = numeric_curvature(&ev, &x)?;
        let sym = cb.eval(&x);
        for c in 0..DIM {
            for a in 0..DIM {
                for b in 0..DIM {
                    out.christoffel = out.christoffel.max(rel(sym.gamma[(c * DIM + a) * DIM + b], num.gamma[c][a][b]));
                }
            }
        }
        for a in 0..DIM {
            for b in 0..DIM {
                out.ricci = out.ricci.max(rel(sym.ricci[a * DIM + b], num.ricci[(a, b)]));
                out.einstein = out.einstein.max(rel(sym.einstein[a * DIM + b], num.einstein[(a, b)]));
            }
        }
        out.scalar = out.scalar.max(rel(sym.scalar, num.scalar));
    }
    Ok(out)
}

/// Largest `|∇^A G_AB|` over sample points, from the symbolic Einstein tensor
/// and connection with a central-difference derivative.
pub fn bianchi_residual(
    g: &Metric6,
    bundle: &CurvatureBundle,
    params: &Assignment,
    points: usize,
    seed: u64,
) -> Result<f64, OracleError> {
    let cb = CompiledBundle::new(g, bundle, params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let idx = |a: usize, b: usize| a * DIM + b;
    for _ in 0..points {
        let x = sample_coordinates(&mut rng);
        let v = cb.eval(&x);
        let dgt: Vec<Vec<C>> = (0..DIM)
            .map(|c| {
                let p = cb.eval(&shifted(&x, c, H_FIRST)).einstein;
                let m = cb.eval(&shifted(&x, c, -H_FIRST)).einstein;
                p.iter().zip(&m).map(|(p, m)| (p - m) / (2.0 * H_FIRST)).collect()
            })
            .collect();
        let gam = |c: usize, a: usize, b: usize| v.gamma[(c * DIM + a) * DIM + b];
        for b in 0..DIM {
            let mut s = C::new(0.0, 0.0);
            for a in 0..DIM {
                for c in 0..DIM {
                    let up = v.upper[idx(a, c)];
                    if up == C::new(0.0, 0.0) {
                        continue;
                    }
                    let mut cov = dgt[c][idx(a, b)];
                    for d in 0..DIM {
                        cov -= gam(d, c, a) * v.einstein[idx(d, b)] + gam(d, c, b) * v.einstein[idx(a, d)];
                    }
                    s += up * cov;
                }
            }
            worst = worst.max(s.norm());
        }
    }
    Ok(worst)
}

/// `diag(±exp(2 f_i))` with small random polynomial exponents in the coordinates.
pub fn random_smooth_diagonal(seed: u64) -> Result<Metric6, TensorError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signs = [1, -1, -1, -1, 1, -1];
    let entries: [Expr; DIM] = std::array::from_fn(|i| {
        let mut f = Expr::zero();
        for k in 0..DIM {
            let c1 = Expr::ratio(rng.gen_range(-4..=4), 10);
            let c2 = Expr::ratio(rng.gen_range(-4..=4), 20);
            let x = Expr::sym(&coord(k));
            f = f + c1 * &x + c2 * x.pow(2);
        }
        Expr::int(signs[i]) * exp(&(Expr::int(2) * f))
    });
    Metric6::diagonal(entries, "(+,-,-,-,+,-)", &ZeroTest::default())
}
