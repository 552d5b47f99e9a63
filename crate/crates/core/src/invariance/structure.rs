use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    multiplicity_for_spec, schur_quotient, InvarianceReport, Tolerances, Verdict, HORIZON_CAVEAT,
};
use crate::error::{Error, Result};
use crate::inner::{InnerFunctionSpec, DEFAULT_ORBIT_COUNT};
use crate::linalg::hermitian_eigen;
use crate::operators::{affine_matrix, SymbolMap};
use crate::series::TaylorSeries;

/// How close to 1 the zeros must reach to count as accumulating there.
const ACCUMULATION_TOL: f64 = 1e-3;
const ATOM_AT_ONE_TOL: f64 = 1e-12;

/// Beurling certification with the method suited to the spec: the
/// multiplicity criterion for pure Blaschke products, the Schur quotient
/// otherwise.
pub(crate) fn certify_beurling(
    spec: &InnerFunctionSpec,
    symbol: &SymbolMap,
    order: usize,
    tol: &Tolerances,
) -> Result<InvarianceReport> {
    if spec.atoms().is_empty() && !spec.is_zero_free() {
        multiplicity_for_spec(spec, symbol, tol)
    } else {
        schur_quotient(spec, symbol, order, tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeurlingClass {
    AtomicAtOne,
    ZerosAccumulatingAtOne,
    NotInvariant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: BeurlingClass,
    pub evidence: InvarianceReport,
}

/// Places an invariant `ΘH²` in one of the two branches of the dichotomy;
/// an invariant verdict fitting neither branch is a theorem violation.
pub fn classify_beurling(
    spec: &InnerFunctionSpec,
    a: f64,
    order: usize,
    tol: &Tolerances,
) -> Result<Classification> {
    if spec.is_constant() {
        return Err(Error::Precondition(
            "constant inner functions give the whole space".into(),
        ));
    }
    let evidence = certify_beurling(spec, &SymbolMap::affine(a)?, order, tol)?;
    if evidence.verdict != Verdict::Invariant {
        return Ok(Classification {
            class: BeurlingClass::NotInvariant,
            evidence,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let class = if spec.is_zero_free() {
        if spec
            .atoms()
            .iter()
            .all(|at| (at.xi - one).norm() <= ATOM_AT_ONE_TOL)
        {
            BeurlingClass::AtomicAtOne
        } else {
            return Err(Error::TheoremViolation(format!(
                "{} certified invariant with an atom away from 1",
                spec.name
            )));
        }
    } else {
        let reach = spec
            .zeros()
            .iter()
            .map(|z| z.point.re)
            .fold(f64::NEG_INFINITY, f64::max);
        if evidence.has_caveat(HORIZON_CAVEAT) && reach >= 1.0 - ACCUMULATION_TOL {
            BeurlingClass::ZerosAccumulatingAtOne
        } else {
            return Err(Error::TheoremViolation(format!(
                "{} certified invariant but its zeros do not accumulate at 1 (max Re = {reach})",
                spec.name
            )));
        }
    };
    Ok(Classification { class, evidence })
}

/// `Υ = B·Θ` with `B` the Blaschke product over the `φ_a`-orbit of `z0`.
pub fn enlarge_invariant(
    spec: &InnerFunctionSpec,
    a: f64,
    z0: Complex64,
    order: usize,
    tol: &Tolerances,
) -> Result<InnerFunctionSpec> {
    let rep = certify_beurling(spec, &SymbolMap::affine(a)?, order, tol)?;
    if rep.verdict != Verdict::Invariant {
        return Err(Error::Precondition(format!(
            "{} is not certified invariant for a = {a}",
            spec.name
        )));
    }
    let orbit = InnerFunctionSpec::phi_orbit(z0, a, DEFAULT_ORBIT_COUNT)?;
    Ok(spec
        .product(&orbit)?
        .named(format!("{}*orbit({z0},{a})", spec.name)))
}

/// Numerical ranks of the Gram matrices of `{f, Cf, …, C^{k-1}f}` for
/// `k = 1..m`, `C` the affine composition matrix. An eigenvalue counts
/// when it exceeds `rank_tol` times the largest.
pub fn orbit_span_rank(
    f: &TaylorSeries,
    a: f64,
    iterations: usize,
    order: usize,
    rank_tol: f64,
) -> Result<Vec<usize>> {
    if f.norm() == 0.0 {
        return Err(Error::Precondition("orbit of the zero function".into()));
    }
    let c = affine_matrix(a, order)?;
    let mut cols = DMatrix::<Complex64>::zeros(order + 1, iterations);
    let mut current = f.with_order(order);
    let mut ranks = Vec::with_capacity(iterations);
    for k in 0..iterations {
        cols.set_column(k, &nalgebra::DVector::from_column_slice(current.coeffs()));
        let block = cols.columns(0, k + 1);
        let gram = block.adjoint() * block;
        let (_, values) = hermitian_eigen(&gram)?;
        let top = values.iter().copied().fold(0.0f64, f64::max);
        ranks.push(values.iter().filter(|v| **v > rank_tol * top).count());
        current = c.apply(&current)?;
    }
    Ok(ranks)
}
