//! Certification of invariance of Beurling and model subspaces under
//! composition operators and the Cesàro operator.

mod cesaro;
mod compression;
mod multiplicity;
mod registry;
mod schur;
mod structure;

pub use cesaro::{
    cesaro_correspondence_check, default_t_samples, Consistency, CorrespondenceReport, Pairing,
};
pub use compression::{compression_residual, compression_trend};
pub use multiplicity::{multiplicity_criterion, multiplicity_for_spec, Horizon, Violation};
pub use registry::{CertificationMethod, CertifyRequest, MethodRegistry, SubspaceKind};
pub use schur::{quotient_series, schur_quotient};
pub use structure::{
    classify_beurling, enlarge_invariant, orbit_span_rank, BeurlingClass, Classification,
};

pub use crate::inner::zero_orbit;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const HORIZON_CAVEAT: &str = "horizon-limited";
pub const LIMIT_CAVEAT: &str = "consistent with invariance in the limit";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_inv: f64,
    pub tol_sup: f64,
    pub eps_match: f64,
    pub eps_div: f64,
    pub radius: f64,
    pub grid: usize,
    /// Required overall decay `r_N / r_{N/4}` for a limit verdict.
    pub trend_ratio: f64,
    /// Allowed step-to-step growth in a decaying residual series.
    pub trend_noise: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_inv: 1e-8,
            tol_sup: 1e-6,
            eps_match: 1e-10,
            eps_div: 1e-13,
            radius: 0.999,
            grid: 4096,
            trend_ratio: 0.9,
            trend_noise: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Invariant,
    NonInvariant,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Invariant => "invariant",
            Verdict::NonInvariant => "non_invariant",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Compression,
    SchurQuotient,
    Multiplicity,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Compression => "compression",
            Method::SchurQuotient => "schur_quotient",
            Method::Multiplicity => "multiplicity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualPoint {
    pub order: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostics {
    Compression {
        residuals: Vec<ResidualPoint>,
    },
    SchurQuotient {
        /// Saturates at `f64::MAX`; `log_sup` keeps the exact scale.
        sup: Option<f64>,
        log_sup: Option<f64>,
        argmax_theta: Option<f64>,
        radius: f64,
        grid: usize,
        paired: usize,
        virtual_pairs: usize,
        unpaired: usize,
        blocked_at: Option<Complex64>,
    },
    Multiplicity {
        checked: usize,
        excused: usize,
        violations: Vec<Violation>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamEcho {
    pub a: Option<f64>,
    pub order: Option<usize>,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub verdict: Verdict,
    /// Compression: relative residual. Schur: excess of the sup over 1.
    /// Multiplicity: number of violations. Absent when undefined.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub method: Method,
    pub spec: String,
    pub subspace: String,
    pub symbol: String,
    pub diagnostics: Diagnostics,
    pub witness: Option<String>,
    pub caveats: Vec<String>,
    pub params: ParamEcho,
    pub toolkit_version: String,
    pub wall_time_s: f64,
}

impl InvarianceReport {
    pub fn sup_quotient(&self) -> Option<f64> {
        match self.diagnostics {
            Diagnostics::SchurQuotient { sup, .. } => sup,
            _ => None,
        }
    }

    pub fn has_caveat(&self, caveat: &str) -> bool {
        self.caveats.iter().any(|c| c == caveat)
    }

    pub fn is_invariant(&self) -> bool {
        self.verdict == Verdict::Invariant
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub const SUMMARY_HEADER: [&str; 9] = [
    "spec",
    "subspace",
    "symbol",
    "method",
    "verdict",
    "residual",
    "sup_quotient",
    "N",
    "caveats",
];

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// One summary row per report, in the column order of [`SUMMARY_HEADER`].
pub fn summary_row(r: &InvarianceReport) -> [String; 9] {
    [
        r.spec.clone(),
        r.subspace.clone(),
        r.symbol.clone(),
        r.method.as_str().to_string(),
        r.verdict.as_str().to_string(),
        fmt_opt(r.residual),
        fmt_opt(r.sup_quotient()),
        r.params.order.map(|n| n.to_string()).unwrap_or_default(),
        r.caveats.join(";"),
    ]
}

pub(crate) fn base_report(
    verdict: Verdict,
    method: Method,
    residual: Option<f64>,
    tolerance: f64,
    diagnostics: Diagnostics,
    params: ParamEcho,
) -> InvarianceReport {
    InvarianceReport {
        verdict,
        residual,
        tolerance,
        method,
        spec: String::new(),
        subspace: String::new(),
        symbol: String::new(),
        diagnostics,
        witness: None,
        caveats: Vec::new(),
        params,
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: 0.0,
    }
}
