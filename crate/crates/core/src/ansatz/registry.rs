//! Named ansatz families with their parameters, as used by the command line.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::symcore::{sqrt, Expr, Symbol, ZeroTest};
use crate::tensor::Metric6;

use super::{
    coupled_metric, dirac_metric, gravity_metric, photon_metric, proca_metric, scalar_metric, weak_field_g4,
    AnsatzError, DiracAnsatz, GravityFields, ScalarAnsatz, VectorFieldAnsatz,
};

/// Parameter values; anything unbound stays symbolic.
pub type Bindings = BTreeMap<String, Expr>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamKind {
    Real,
    Positive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    /// Derived on-shell when left unbound.
    pub optional: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnsatzId {
    Scalar,
    Photon,
    Proca,
    Dirac(u8),
    Coupled,
    GravityScalar,
    GravityProca,
    GravityDirac,
}

impl AnsatzId {
    pub const ALL: [AnsatzId; 11] = [
        AnsatzId::Scalar,
        AnsatzId::Photon,
        AnsatzId::Proca,
        AnsatzId::Dirac(1),
        AnsatzId::Dirac(2),
        AnsatzId::Dirac(3),
        AnsatzId::Dirac(4),
        AnsatzId::Coupled,
        AnsatzId::GravityScalar,
        AnsatzId::GravityProca,
        AnsatzId::GravityDirac,
    ];

    pub fn params(self) -> Vec<ParamSpec> {
        let r = |name| ParamSpec { name, kind: ParamKind::Real, optional: false };
        let pos = |name| ParamSpec { name, kind: ParamKind::Positive, optional: false };
        let opt = |name| ParamSpec { name, kind: ParamKind::Real, optional: true };
        let momentum = vec![opt("p0"), r("p1"), r("p2"), r("p3"), pos("m0")];
        let spin = vec![r("p1"), r("p2"), r("p3"), pos("m0")];
        let wave = vec![opt("k0"), r("k1"), r("k2"), r("k3"), r("pol0"), r("pol1"), r("pol2"), r("pol3")];
        let mut out = match self {
            AnsatzId::Scalar => momentum,
            AnsatzId::Photon => wave,
            AnsatzId::Proca => [wave, vec![pos("m0")]].concat(),
            AnsatzId::Dirac(_) => spin,
            AnsatzId::Coupled => [wave, spin, vec![pos("gamma")]].concat(),
            AnsatzId::GravityScalar => momentum,
            AnsatzId::GravityProca => [wave, vec![pos("m0")]].concat(),
            AnsatzId::GravityDirac => spin,
        };
        if matches!(self, AnsatzId::GravityScalar | AnsatzId::GravityProca | AnsatzId::GravityDirac) {
            out.extend([r("eps"), pos("kappa")]);
        }
        out
    }

    /// Build the metric, rejecting bindings for undeclared parameters.
    pub fn build(self, bindings: &Bindings, zt: &ZeroTest) -> Result<Metric6, AnsatzError> {
        let specs = self.params();
        if let Some(name) = bindings.keys().find(|k| !specs.iter().any(|s| s.name == k.as_str())) {
            return Err(AnsatzError::UnknownParameter { ansatz: self.to_string(), name: name.clone() });
        }
        let get = |name: &str| -> Expr {
            if let Some(v) = bindings.get(name) {
                return v.clone();
            }
            let kind = specs.iter().find(|s| s.name == name).map(|s| s.kind).unwrap_or(ParamKind::Real);
            match kind {
                ParamKind::Real => Expr::sym(&Symbol::real(name)),
                ParamKind::Positive => Expr::sym(&Symbol::positive(name)),
            }
        };
        let scalar = || {
            let s = ScalarAnsatz::on_shell(get("p1"), get("p2"), get("p3"), get("m0"));
            match bindings.get("p0") {
                Some(p0) => ScalarAnsatz::new([p0.clone(), s.p[1].clone(), s.p[2].clone(), s.p[3].clone()], s.m0),
                None => s,
            }
        };
        let wave = |mass: Option<&Expr>| {
            let (k1, k2, k3) = (get("k1"), get("k2"), get("k3"));
            let k0 = bindings.get("k0").cloned().unwrap_or_else(|| {
                let m2 = mass.map(|m| m.pow(2)).unwrap_or_else(Expr::zero);
                sqrt(&(k1.pow(2) + k2.pow(2) + k3.pow(2) + m2))
            });
            VectorFieldAnsatz::plane_wave([k0, k1, k2, k3], [get("pol0"), get("pol1"), get("pol2"), get("pol3")])
        };
        let spinor = |sol: u8| DiracAnsatz::new(sol, get("p1"), get("p2"), get("p3"), get("m0"));
        match self {
            AnsatzId::Scalar => Ok(scalar_metric(&scalar(), zt)?),
            AnsatzId::Photon => photon_metric(&wave(None), zt),
            AnsatzId::Proca => {
                let m0 = get("m0");
                proca_metric(&wave(Some(&m0)), &m0, zt)
            }
            AnsatzId::Dirac(sol) => dirac_metric(&spinor(sol)?, zt),
            AnsatzId::Coupled => coupled_metric(&wave(None), &spinor(1)?, &get("gamma"), zt),
            AnsatzId::GravityScalar | AnsatzId::GravityProca | AnsatzId::GravityDirac => {
                let g4 = weak_field_g4(&get("eps"));
                let fields = match self {
                    AnsatzId::GravityScalar => GravityFields::Scalar(scalar()),
                    AnsatzId::GravityProca => {
                        let m0 = get("m0");
                        GravityFields::Proca(wave(Some(&m0)), m0)
                    }
                    _ => GravityFields::Dirac(spinor(1)?),
                };
                gravity_metric(&fields, &g4, &get("kappa"), zt)
            }
        }
    }
}

impl fmt::Display for AnsatzId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnsatzId::Scalar => write!(f, "scalar"),
            AnsatzId::Photon => write!(f, "photon"),
            AnsatzId::Proca => write!(f, "proca"),
            AnsatzId::Dirac(n) => write!(f, "dirac{n}"),
            AnsatzId::Coupled => write!(f, "coupled"),
            AnsatzId::GravityScalar => write!(f, "gravity-scalar"),
            AnsatzId::GravityProca => write!(f, "gravity-proca"),
            AnsatzId::GravityDirac => write!(f, "gravity-dirac"),
        }
    }
}

impl FromStr for AnsatzId {
    type Err = AnsatzError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AnsatzId::ALL
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| AnsatzError::UnknownAnsatz(s.to_string()))
    }
}
