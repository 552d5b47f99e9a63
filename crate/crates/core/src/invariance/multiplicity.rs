use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    base_report, Diagnostics, InvarianceReport, Method, ParamEcho, Tolerances, Verdict,
    HORIZON_CAVEAT,
};
use crate::error::{Error, Result};
use crate::inner::InnerFunctionSpec;
use crate::operators::SymbolMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub zero: Complex64,
    pub mult: u32,
    pub image: Complex64,
    pub image_mult: u32,
}

/// How to read the end of a zero list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Horizon {
    /// The list is the whole zero set.
    Finite,
    /// The list is a truncation of a sequence converging to 1; images
    /// closer to 1 than every listed zero are beyond the horizon.
    Truncated,
}

pub(crate) struct Entry {
    pub point: Complex64,
    pub mult: u32,
    /// Distance to 1 of the last listed element of the owning sequence.
    pub frontier: Option<f64>,
}

/// Nearest listed zero within `eps`.
pub(crate) fn lookup(entries: &[Entry], p: Complex64, eps: f64) -> Option<usize> {
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| (i, (e.point - p).norm()))
        .filter(|(_, d)| *d <= eps)
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(i, _)| i)
}

pub(crate) fn beyond_horizon(e: &Entry, image: Complex64) -> bool {
    e.frontier
        .is_some_and(|f| (Complex64::new(1.0, 0.0) - image).norm() < f)
}

pub(crate) fn spec_entries(spec: &InnerFunctionSpec) -> Vec<Entry> {
    spec.zeros()
        .iter()
        .map(|z| Entry {
            point: z.point,
            mult: z.mult,
            frontier: z.generator.map(|g| spec.generators()[g].frontier),
        })
        .collect()
}

fn check(
    entries: &[Entry],
    symbol: &SymbolMap,
    a: Option<f64>,
    tol: &Tolerances,
) -> InvarianceReport {
    let mut violations = Vec::new();
    let mut excused = 0;
    for e in entries {
        let image = symbol.eval(e.point);
        // near 1 the listed points are closer together than eps_match
        if beyond_horizon(e, image) {
            excused += 1;
            continue;
        }
        let image_mult = lookup(entries, image, tol.eps_match).map_or(0, |i| entries[i].mult);
        if image_mult >= e.mult {
            continue;
        }
        violations.push(Violation {
            zero: e.point,
            mult: e.mult,
            image,
            image_mult,
        });
    }
    let verdict = if violations.is_empty() {
        Verdict::Invariant
    } else {
        Verdict::NonInvariant
    };
    let witness = violations.first().map(|v| {
        format!(
            "zero w = {} has multiplicity {} but φ(w) = {} is a zero of multiplicity {}",
            v.zero, v.mult, v.image, v.image_mult
        )
    });
    let mut rep = base_report(
        verdict,
        Method::Multiplicity,
        Some(violations.len() as f64),
        0.0,
        Diagnostics::Multiplicity {
            checked: entries.len(),
            excused,
            violations,
        },
        ParamEcho {
            a,
            order: None,
            tolerances: *tol,
        },
    );
    rep.witness = witness;
    rep.symbol = symbol.label();
    if excused > 0 {
        rep.caveats.push(HORIZON_CAVEAT.to_string());
    }
    rep
}

/// `mult_B(w) ≤ mult_{B∘φ_a}(w)` for every listed zero, i.e. `φ_a(w)` is a
/// zero of at least the same multiplicity.
pub fn multiplicity_criterion(
    zeros: &[(Complex64, u32)],
    a: f64,
    horizon: Horizon,
    tol: &Tolerances,
) -> Result<InvarianceReport> {
    let symbol = SymbolMap::affine(a)?;
    let frontier = match horizon {
        Horizon::Finite => None,
        Horizon::Truncated => Some(
            zeros
                .iter()
                .map(|(p, _)| (Complex64::new(1.0, 0.0) - p).norm())
                .fold(f64::INFINITY, f64::min),
        ),
    };
    let entries: Vec<Entry> = zeros
        .iter()
        .map(|&(point, mult)| Entry {
            point,
            mult,
            frontier,
        })
        .collect();
    let mut rep = check(&entries, &symbol, Some(a), tol);
    rep.subspace = "beurling(zero list)".into();
    Ok(rep)
}

/// The criterion on the zeros of a spec; generated zeros use the horizon
/// of their generator. Singular factors are ignored, so for specs with
/// atoms this is a necessary condition only.
pub fn multiplicity_for_spec(
    spec: &InnerFunctionSpec,
    symbol: &SymbolMap,
    tol: &Tolerances,
) -> Result<InvarianceReport> {
    if matches!(symbol, SymbolMap::General { .. }) {
        return Err(Error::Unsupported(
            "multiplicity criterion needs a closed-form symbol".into(),
        ));
    }
    let mut rep = check(&spec_entries(spec), symbol, symbol.parameter(), tol);
    rep.spec = spec.name.clone();
    rep.subspace = format!("beurling({})", spec.name);
    if !spec.atoms().is_empty() {
        rep.caveats.push("singular factor ignored".into());
    }
    Ok(rep)
}
