//! Dense helpers shared by the subspace and invariance code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pivot rule for [`projector_basis`]: the lowest-indexed column whose
/// residual norm is at least this fraction of the current maximum.
const PIVOT_FRACTION: f64 = 0.25;

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value, from the top eigenvalue of the smaller Gram matrix.
pub fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = if m.nrows() < m.ncols() {
        m * m.adjoint()
    } else {
        m.adjoint() * m
    };
    let top = gram
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(0.0f64, f64::max);
    top.sqrt()
}

/// Number of singular values above `rel_tol` times the largest.
pub fn numerical_rank(m: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|v| **v > rel_tol * top).count(),
        _ => 0,
    }
}

/// Eigenpairs of a Hermitian matrix, eigenvalues in the returned order of
/// the columns.
pub fn hermitian_eigen(h: &DMatrix<Complex64>) -> Result<(DMatrix<Complex64>, Vec<f64>)> {
    let e = h.clone().symmetric_eigen();
    let values: Vec<f64> = e.eigenvalues.iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("hermitian eigendecomposition"));
    }
    Ok((e.eigenvectors, values))
}

/// Canonical orthonormal basis of the range of an orthogonal projector `p`
/// of rank `count`, by column-pivoted Gram–Schmidt.
///
/// Pivots go to the lowest index whose deflated residual is within
/// [`PIVOT_FRACTION`] of the largest one, so projectors onto coordinate spans
/// come back as the coordinate vectors in order. Each new vector is pushed
/// back through `p`, which keeps rounding from leaking out of the range.
pub fn projector_basis(p: &DMatrix<Complex64>, count: usize) -> Result<DMatrix<Complex64>> {
    let rows = p.nrows();
    if p.ncols() != rows || count > rows {
        return Err(Error::DimensionMismatch(format!(
            "cannot extract {count} orthonormal columns from a {}x{} projector",
            rows,
            p.ncols()
        )));
    }
    let mut work = p.clone();
    let mut q = DMatrix::<Complex64>::zeros(rows, count);
    let orthogonalize = |q: &DMatrix<Complex64>, step: usize, v: &mut DVector<Complex64>| {
        for j in 0..step {
            let qj = q.column(j);
            let proj = qj.dotc(v);
            *v -= qj * proj;
        }
    };
    for step in 0..count {
        let norms: Vec<f64> = work.column_iter().map(|c| c.norm()).collect();
        let top = norms.iter().copied().fold(0.0f64, f64::max);
        if top == 0.0 || !top.is_finite() {
            return Err(Error::NonFinite("rank-deficient column set"));
        }
        let pivot = norms
            .iter()
            .position(|v| *v >= PIVOT_FRACTION * top)
            .expect("maximum is attained");
        let mut v: DVector<Complex64> = p.column(pivot).into_owned();
        for _ in 0..2 {
            orthogonalize(&q, step, &mut v);
            v = p * v;
        }
        orthogonalize(&q, step, &mut v);
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::NonFinite("rank-deficient column set"));
        }
        v /= Complex64::new(n, 0.0);
        let coeffs = v.adjoint() * &work;
        work -= &v * coeffs;
        q.set_column(step, &v);
    }
    Ok(q)
}

/// Largest entry of `|QᴴQ - I|`.
pub fn orthonormality_defect(q: &DMatrix<Complex64>) -> f64 {
    let gram = q.adjoint() * q;
    let id = DMatrix::<Complex64>::identity(gram.nrows(), gram.ncols());
    (gram - id).iter().map(|c| c.norm()).fold(0.0, f64::max)
}
