//! The claim catalog: every checked identity as a named, runnable check.

mod claims;
mod suite;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symcore::{Assignment, Expr, ZeroTest};

pub use claims::{
    check_dirac, check_dirac_stress, check_fsq_null, check_geodesic_closed_form, check_gravity_split,
    check_interference, check_inverse, check_klein_gordon, check_maxwell, check_proca, check_proca_components,
    check_ricci_scalar_zero, default_geometries, GEODESIC_NUMERIC_TOL,
};
pub use suite::{claim_ids, must_pass_ids, refuted_must_pass, run_claim, run_suite, CLAIMS};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Confirmed,
    Refuted,
    /// Holds only as a measurement or under stated conditions.
    Conditional,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Zero,
    NonZero,
    Inconclusive,
    /// A magnitude with no pass/fail threshold.
    Measured,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    /// Only required sub-checks decide the verdict.
    pub required: bool,
    pub outcome: Outcome,
    pub max_residual: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub id: String,
    pub anchor: String,
    pub verdict: Verdict,
    pub must_pass: bool,
    pub max_residual: f64,
    pub samples: usize,
    pub seed: u64,
    pub assumptions: Vec<String>,
    pub notes: Vec<String>,
    pub sub_checks: Vec<SubCheck>,
    pub witness: Option<Assignment>,
}

impl ClaimReport {
    pub fn sub_check(&self, name: &str) -> Option<&SubCheck> {
        self.sub_checks.iter().find(|s| s.name == name)
    }
}

/// Reports stay JSON-representable: non-finite residuals saturate.
fn finite(r: f64) -> f64 {
    if r.is_finite() {
        r
    } else {
        f64::MAX
    }
}

/// Accumulates sub-checks for one claim.
pub(crate) struct Builder {
    zt: ZeroTest,
    fixed: Assignment,
    subs: Vec<SubCheck>,
    witness: Option<Assignment>,
    notes: Vec<String>,
    assumptions: Vec<String>,
    conditional: bool,
}

impl Builder {
    pub(crate) fn new(zt: &ZeroTest) -> Self {
        Builder {
            zt: *zt,
            fixed: Assignment::new(),
            subs: Vec::new(),
            witness: None,
            notes: Vec::new(),
            assumptions: Vec::new(),
            conditional: false,
        }
    }

    pub(crate) fn fix(&mut self, fixed: Assignment) {
        self.fixed = fixed;
    }

    pub(crate) fn assume(&mut self, s: impl Into<String>) {
        self.assumptions.push(s.into());
    }

    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub(crate) fn witness(&mut self, at: Assignment) {
        self.witness.get_or_insert(at);
    }

    pub(crate) fn conditional(&mut self) {
        self.conditional = true;
    }

    /// Sample every expression; Zero iff all vanish at every point.
    pub(crate) fn zero(&mut self, name: &str, exprs: &[Expr], required: bool) -> bool {
        let s = self.zt.survey(exprs, &self.fixed);
        let outcome = if s.failures > 0 {
            Outcome::Inconclusive
        } else if s.all_zero() {
            Outcome::Zero
        } else {
            Outcome::NonZero
        };
        if let Some(d) = &s.diagnostic {
            self.notes.push(format!("{name}: {d}"));
        }
        if required && outcome != Outcome::Zero && self.witness.is_none() {
            self.witness = s.witness.clone();
        }
        self.subs.push(SubCheck {
            name: name.to_string(),
            required,
            outcome,
            max_residual: finite(s.max_residual()),
            samples: s.samples,
        });
        outcome == Outcome::Zero
    }

    /// Record a pre-computed outcome.
    pub(crate) fn record(&mut self, name: &str, outcome: Outcome, max_residual: f64, samples: usize, required: bool) {
        let max_residual = finite(max_residual);
        self.subs.push(SubCheck { name: name.to_string(), required, outcome, max_residual, samples });
    }

    pub(crate) fn finish(self, id: &str, anchor: &str, must_pass: bool) -> ClaimReport {
        let required: Vec<&SubCheck> = self.subs.iter().filter(|s| s.required).collect();
        let verdict = if required.iter().any(|s| s.outcome == Outcome::NonZero) {
            Verdict::Refuted
        } else if required.iter().any(|s| s.outcome == Outcome::Inconclusive) {
            Verdict::Inconclusive
        } else if self.conditional {
            Verdict::Conditional
        } else {
            Verdict::Confirmed
        };
        let mut pool: Vec<&SubCheck> =
            self.subs.iter().filter(|s| s.required || s.outcome == Outcome::Measured).collect();
        if pool.is_empty() {
            pool = self.subs.iter().collect();
        }
        let max_residual = pool.iter().map(|s| s.max_residual).fold(0.0, f64::max);
        let samples = pool.iter().map(|s| s.samples).max().unwrap_or(0);
        let witness = if verdict == Verdict::Refuted || verdict == Verdict::Inconclusive {
            Some(self.witness.unwrap_or_default())
        } else {
            None
        };
        ClaimReport {
            id: id.to_string(),
            anchor: anchor.to_string(),
            verdict,
            must_pass,
            max_residual,
            samples,
            seed: self.zt.seed,
            assumptions: self.assumptions,
            notes: self.notes,
            sub_checks: self.subs,
            witness,
        }
    }
}
