//! A closed subspace is Cesàro-invariant exactly when its orthogonal
//! complement is invariant under every `C_{φ_t}`, `φ_t(z) = e^{-t}z + 1 - e^{-t}`.
//! Both orientations are checked: model space under the Cesàro operator
//! against the Beurling space under the semigroup, and the reverse.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::{
    compression_trend, CertifyRequest, InvarianceReport, MethodRegistry, SubspaceKind, Tolerances,
    Verdict,
};
use crate::error::{Error, Result};
use crate::inner::InnerFunctionSpec;
use crate::operators::{cesaro_matrix, semigroup_member};
use crate::subspaces::{beurling_basis, model_basis};

pub fn default_t_samples() -> Vec<f64> {
    vec![LN_2, 1.0, 3.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Consistency {
    Consistent,
    /// Agreement once limit-trend verdicts are read as invariant.
    ConsistentInLimit,
    Inconsistent,
    /// Agreement only if limit-trend verdicts are read as non-invariant.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemigroupSample {
    pub t: f64,
    pub report: InvarianceReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    /// The subspace tested against the Cesàro operator; its complement
    /// faces the semigroup.
    pub cesaro_subspace: SubspaceKind,
    pub cesaro_side: InvarianceReport,
    pub semigroup_side: Vec<SemigroupSample>,
    pub consistency: Consistency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub spec: String,
    pub order: usize,
    pub t_samples: Vec<f64>,
    /// Model space under the Cesàro operator, Beurling space under the semigroup.
    pub primary: Pairing,
    /// Beurling space under the Cesàro operator, model space under the semigroup.
    pub dual: Pairing,
    pub toolkit_version: String,
}

#[derive(Clone, Copy, PartialEq)]
enum Tri {
    Yes,
    No,
    Limit,
}

fn tri(v: Verdict) -> Tri {
    match v {
        Verdict::Invariant => Tri::Yes,
        Verdict::NonInvariant => Tri::No,
        Verdict::Inconclusive => Tri::Limit,
    }
}

fn consistency(cesaro: Verdict, semigroup: &[SemigroupSample]) -> Consistency {
    let c = tri(cesaro);
    let s = if semigroup
        .iter()
        .any(|s| s.report.verdict == Verdict::NonInvariant)
    {
        Tri::No
    } else if semigroup
        .iter()
        .any(|s| s.report.verdict == Verdict::Inconclusive)
    {
        Tri::Limit
    } else {
        Tri::Yes
    };
    let read = |x: Tri, limit: Tri| if x == Tri::Limit { limit } else { x };
    if c != Tri::Limit && s != Tri::Limit {
        if c == s {
            Consistency::Consistent
        } else {
            Consistency::Inconsistent
        }
    } else if read(c, Tri::Yes) == read(s, Tri::Yes) {
        Consistency::ConsistentInLimit
    } else if read(c, Tri::No) == read(s, Tri::No) {
        Consistency::Undetermined
    } else {
        Consistency::Inconsistent
    }
}

fn pairing(
    spec: &InnerFunctionSpec,
    cesaro_subspace: SubspaceKind,
    t_samples: &[f64],
    order: usize,
    tol: &Tolerances,
) -> Result<Pairing> {
    let cesaro = |n| Ok(cesaro_matrix(n));
    let mut cesaro_side = match cesaro_subspace {
        SubspaceKind::Model => compression_trend(|n| model_basis(spec, n), cesaro, order, tol)?,
        SubspaceKind::Beurling => {
            compression_trend(|n| beurling_basis(spec, n), cesaro, order, tol)?
        }
    };
    cesaro_side.spec = spec.name.clone();
    let other = match cesaro_subspace {
        SubspaceKind::Model => SubspaceKind::Beurling,
        SubspaceKind::Beurling => SubspaceKind::Model,
    };
    let registry = MethodRegistry::default();
    let mut semigroup_side = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        let symbol = semigroup_member(t)?;
        let req = CertifyRequest {
            spec,
            subspace: other,
            symbol: &symbol,
            order,
            tolerances: tol,
        };
        let report = registry.run("auto", &req)?;
        semigroup_side.push(SemigroupSample { t, report });
    }
    let consistency = consistency(cesaro_side.verdict, &semigroup_side);
    Ok(Pairing {
        cesaro_subspace,
        cesaro_side,
        semigroup_side,
        consistency,
    })
}

pub fn cesaro_correspondence_check(
    spec: &InnerFunctionSpec,
    t_samples: &[f64],
    order: usize,
    tol: &Tolerances,
) -> Result<CorrespondenceReport> {
    if t_samples.is_empty() || t_samples.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::Domain(
            "t samples must be a nonempty list of positive reals".into(),
        ));
    }
    Ok(CorrespondenceReport {
        spec: spec.name.clone(),
        order,
        t_samples: t_samples.to_vec(),
        primary: pairing(spec, SubspaceKind::Model, t_samples, order, tol)?,
        dual: pairing(spec, SubspaceKind::Beurling, t_samples, order, tol)?,
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}
