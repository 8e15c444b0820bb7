//! Probabilistic zero-equivalence testing by seeded random evaluation.
//!
//! Sampling distribution, drawn per trial for every free symbol in name order
//! from a ChaCha8 stream seeded with the test seed:
//! * `Positive` symbols: magnitude uniform in `[0.1, 2]`;
//! * `Real` symbols: the same magnitude with a uniformly random sign;
//! * `Complex` symbols: magnitude uniform in `[0.1, 2]`, phase uniform in `[0, 2π)`.
//!
//! A value counts as zero when `|v| < tol * (1 + scale)`, where `scale` is
//! the sum of the magnitudes of the top-level terms at the same point.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::eval::{eval_with_scale, Assignment};
use super::expr::Expr;
use super::symbol::{Domain, Symbol};

pub const SAMPLE_MIN: f64 = 0.1;
pub const SAMPLE_MAX: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroTest {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest { trials: 32, tol: 1e-9, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ZeroVerdict {
    Zero {
        max_residual: f64,
        samples: usize,
    },
    NonZero {
        witness: Assignment,
        /// Index of the offending expression within the tested batch.
        index: usize,
        value: (f64, f64),
        scale: f64,
        max_residual: f64,
    },
    Inconclusive {
        diagnostic: String,
        witness: Assignment,
    },
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, ZeroVerdict::Zero { .. })
    }

    pub fn max_residual(&self) -> f64 {
        match self {
            ZeroVerdict::Zero { max_residual, .. } | ZeroVerdict::NonZero { max_residual, .. } => *max_residual,
            ZeroVerdict::Inconclusive { .. } => f64::NAN,
        }
    }
}

/// Draw one sample value for a symbol of the given domain.
pub fn sample_value<R: Rng>(domain: Domain, rng: &mut R) -> Complex64 {
    let mag = rng.gen_range(SAMPLE_MIN..=SAMPLE_MAX);
    match domain {
        Domain::Positive => Complex64::new(mag, 0.0),
        Domain::Real => {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            Complex64::new(sign * mag, 0.0)
        }
        Domain::Complex => Complex64::from_polar(mag, rng.gen_range(0.0..TAU)),
    }
}

/// Random point covering `symbols`; entries of `fixed` take precedence.
pub fn sample_point<R: Rng>(symbols: &BTreeSet<Symbol>, fixed: &Assignment, rng: &mut R) -> Assignment {
    let mut at = fixed.clone();
    for s in symbols {
        let v = sample_value(s.domain(), rng);
        if !fixed.contains(s.name()) {
            at.set(s.name(), v);
        }
    }
    at
}

impl ZeroTest {
    pub fn new(trials: usize, tol: f64, seed: u64) -> Self {
        assert!(trials >= 1, "at least one trial is required");
        assert!(tol > 0.0, "tolerance must be positive");
        ZeroTest { trials, tol, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        ZeroTest { seed, ..self }
    }

    pub fn is_zero(&self, e: &Expr) -> ZeroVerdict {
        self.all_zero(std::slice::from_ref(e), &Assignment::new())
    }

    pub fn is_zero_with(&self, e: &Expr, fixed: &Assignment) -> ZeroVerdict {
        self.all_zero(std::slice::from_ref(e), fixed)
    }

    /// Test a batch of expressions at shared sample points.
    pub fn all_zero(&self, exprs: &[Expr], fixed: &Assignment) -> ZeroVerdict {
        let mut symbols = BTreeSet::new();
        for e in exprs {
            symbols.extend(e.free_symbols());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut max_residual: f64 = 0.0;
        for _ in 0..self.trials {
            let at = sample_point(&symbols, fixed, &mut rng);
            for (index, e) in exprs.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                match eval_with_scale(e, &at) {
                    Ok((v, scale)) => {
                        let r = v.norm();
                        max_residual = max_residual.max(r);
                        if r >= self.tol * (1.0 + scale) {
                            return ZeroVerdict::NonZero {
                                witness: at,
                                index,
                                value: (v.re, v.im),
                                scale,
                                max_residual,
                            };
                        }
                    }
                    Err(err) => return ZeroVerdict::Inconclusive { diagnostic: err.to_string(), witness: at },
                }
            }
        }
        ZeroVerdict::Zero { max_residual, samples: self.trials }
    }
}

/// Per-expression residual statistics over a shared set of sample points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Survey {
    /// Largest `|value|` seen for each expression.
    pub max_abs: Vec<f64>,
    /// Whether each expression passed the zero criterion at every point.
    pub zero: Vec<bool>,
    /// First sample point at which some expression failed, if any.
    pub witness: Option<Assignment>,
    /// Evaluation failures (points are skipped, not counted as zero).
    pub failures: usize,
    pub diagnostic: Option<String>,
    pub samples: usize,
}

impl Survey {
    pub fn all_zero(&self) -> bool {
        self.failures == 0 && self.zero.iter().all(|z| *z)
    }

    pub fn max_residual(&self) -> f64 {
        self.max_abs.iter().copied().fold(0.0, f64::max)
    }
}

impl ZeroTest {
    /// Like [`ZeroTest::all_zero`] but never stops early, so every
    /// expression gets a residual magnitude.
    pub fn survey(&self, exprs: &[Expr], fixed: &Assignment) -> Survey {
        let mut symbols = BTreeSet::new();
        for e in exprs {
            symbols.extend(e.free_symbols());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Survey {
            max_abs: vec![0.0; exprs.len()],
            zero: vec![true; exprs.len()],
            witness: None,
            failures: 0,
            diagnostic: None,
            samples: self.trials,
        };
        for _ in 0..self.trials {
            let at = sample_point(&symbols, fixed, &mut rng);
            for (k, e) in exprs.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                match eval_with_scale(e, &at) {
                    Ok((v, scale)) => {
                        let r = v.norm();
                        out.max_abs[k] = out.max_abs[k].max(r);
                        if r >= self.tol * (1.0 + scale) {
                            out.zero[k] = false;
                            if out.witness.is_none() {
                                out.witness = Some(at.clone());
                            }
                        }
                    }
                    Err(err) => {
                        out.failures += 1;
                        if out.diagnostic.is_none() {
                            out.diagnostic = Some(err.to_string());
                            out.witness.get_or_insert_with(|| at.clone());
                        }
                    }
                }
            }
        }
        out
    }
}

/// Convenience wrapper with an explicit seed.
pub fn is_zero(e: &Expr, trials: usize, tol: f64, seed: u64) -> ZeroVerdict {
    ZeroTest::new(trials, tol, seed).is_zero(e)
}
