//! Beurling subspaces `ΘH²`, model spaces, polynomial spaces and shifted
//! model spaces as orthonormal bases of `ℂ^{N+1}`.
//!
//! The order-`N` section of `ΘH²` is read off the lower-triangular Toeplitz
//! matrix `A` of `Θ`, for which `A Aᴴ = P_N T_Θ T_Θᴴ P_N`. Eigenvectors of
//! `A Aᴴ` with eigenvalue `≥ 1/2` span the Beurling section and the rest
//! span the model section.

use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inner::{inner_eval, taylor_of_inner, InnerFunctionSpec};
use crate::linalg::{hermitian_eigen, orthonormality_defect, projector_basis, spectral_norm};
use crate::operators::OperatorMatrix;
use crate::series::TaylorSeries;

pub const DEFAULT_TAIL_TOL: f64 = 1e-8;
pub const ORTHOGONALITY_TOL: f64 = 1e-8;
pub const SPAN_TOL: f64 = 1e-6;

/// Below this captured Taylor energy the section says nothing about `Θ`.
const MIN_CAPTURED_ENERGY: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisMetadata {
    pub order: usize,
    /// Largest shift `k` with `‖P_N(Θ e_k)‖² ≥ 1 - tail_tol`.
    pub k_max: Option<usize>,
    /// Energy of `Θ` beyond the order.
    pub tail_energy: f64,
    pub captured_energy: f64,
    /// Distance of the nearest eigenvalue of `A Aᴴ` to the 1/2 cut.
    pub spectral_gap: Option<f64>,
    pub tail_tol: f64,
}

impl BasisMetadata {
    fn exact(order: usize) -> Self {
        Self {
            order,
            k_max: None,
            tail_energy: 0.0,
            captured_energy: 1.0,
            spectral_gap: None,
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    /// `(N+1) × dim`, orthonormal columns.
    pub vectors: DMatrix<Complex64>,
    pub label: String,
    pub meta: BasisMetadata,
}

impl SubspaceBasis {
    fn build(vectors: DMatrix<Complex64>, label: String, meta: BasisMetadata) -> Result<Self> {
        if vectors.ncols() > 0 && orthonormality_defect(&vectors) > 1e-10 {
            return Err(Error::NonFinite("basis lost orthonormality"));
        }
        Ok(Self {
            vectors,
            label,
            meta,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn order(&self) -> usize {
        self.vectors.nrows() - 1
    }

    pub fn vector(&self, j: usize) -> TaylorSeries {
        TaylorSeries::from_vec_unchecked(self.vectors.column(j).iter().copied().collect())
    }

    /// `Σ v_i v_iᴴ`.
    pub fn projector(&self) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.vectors * self.vectors.adjoint(),
            provenance: format!("projector({})", self.label),
        }
    }

    /// `‖f - Pf‖ / ‖f‖`, zero for the zero series.
    pub fn distance_ratio(&self, f: &TaylorSeries) -> Result<f64> {
        if f.order() != self.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: f.order(),
            });
        }
        let norm = f.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let v = nalgebra::DVector::from_column_slice(f.coeffs());
        let proj = &self.vectors * (self.vectors.adjoint() * &v);
        Ok((v - proj).norm() / norm)
    }

    /// Row `n` holds coefficient `n` of every basis vector as `re,im` pairs.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for row in self.vectors.row_iter() {
            let line: Vec<String> = row.iter().map(|c| format!("{},{}", c.re, c.im)).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn sidecar(&self) -> String {
        let mut s = format!(
            "label={}\norder={}\ndim={}\ncaptured_energy={}\ntail_energy={}\ntail_tol={}\n",
            self.label,
            self.meta.order,
            self.dim(),
            self.meta.captured_energy,
            self.meta.tail_energy,
            self.meta.tail_tol
        );
        if let Some(k) = self.meta.k_max {
            s.push_str(&format!("k_max={k}\n"));
        }
        if let Some(g) = self.meta.spectral_gap {
            s.push_str(&format!("spectral_gap={g}\n"));
        }
        s
    }
}

struct Section {
    beurling: DMatrix<Complex64>,
    model: DMatrix<Complex64>,
    meta: BasisMetadata,
}

fn section(spec: &InnerFunctionSpec, order: usize) -> Result<Section> {
    let theta = taylor_of_inner(spec, order)?;
    let captured = theta.norm_sq();
    if captured < MIN_CAPTURED_ENERGY {
        return Err(Error::Resolution { order, captured });
    }
    let n = order + 1;
    let a = DMatrix::from_fn(n, n, |i, j| {
        if i >= j {
            theta.coeff(i - j)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let (u, s) = hermitian_eigen(&(&a * a.adjoint()))?;
    let mut keep = Vec::new();
    let mut drop = Vec::new();
    let mut gap = f64::INFINITY;
    for (j, &e) in s.iter().enumerate() {
        gap = gap.min((e - 0.5).abs());
        if e >= 0.5 {
            keep.push(j);
        } else {
            drop.push(j);
        }
    }
    let span = |cols: &[usize]| -> Result<DMatrix<Complex64>> {
        if cols.is_empty() {
            return Ok(DMatrix::zeros(n, 0));
        }
        let sub = u.select_columns(cols);
        let p = &sub * sub.adjoint();
        projector_basis(&p, cols.len())
    };
    let energies: Vec<f64> = {
        let mut acc = 0.0;
        theta
            .coeffs()
            .iter()
            .map(|c| {
                acc += c.norm_sqr();
                acc
            })
            .collect()
    };
    let tail_tol = DEFAULT_TAIL_TOL;
    // shift k keeps coefficients 0..=N-k
    let k_max = (0..n)
        .take_while(|k| 1.0 - energies[order - k] <= tail_tol)
        .last();
    Ok(Section {
        beurling: span(&keep)?,
        model: span(&drop)?,
        meta: BasisMetadata {
            order,
            k_max,
            tail_energy: (1.0 - captured).max(0.0),
            captured_energy: captured,
            spectral_gap: gap.is_finite().then_some(gap),
            tail_tol,
        },
    })
}

pub fn beurling_basis(spec: &InnerFunctionSpec, order: usize) -> Result<SubspaceBasis> {
    let s = section(spec, order)?;
    SubspaceBasis::build(s.beurling, format!("beurling({})", spec.name), s.meta)
}

pub fn model_basis(spec: &InnerFunctionSpec, order: usize) -> Result<SubspaceBasis> {
    let s = section(spec, order)?;
    SubspaceBasis::build(s.model, format!("model({})", spec.name), s.meta)
}

/// Both halves from a single decomposition.
pub fn split_bases(
    spec: &InnerFunctionSpec,
    order: usize,
) -> Result<(SubspaceBasis, SubspaceBasis)> {
    let s = section(spec, order)?;
    Ok((
        SubspaceBasis::build(
            s.beurling,
            format!("beurling({})", spec.name),
            s.meta.clone(),
        )?,
        SubspaceBasis::build(s.model, format!("model({})", spec.name), s.meta)?,
    ))
}

/// `κ_λ^Θ = (1 - conj(Θ(λ)) Θ) κ_λ`, truncated.
pub fn model_kernel(
    spec: &InnerFunctionSpec,
    lambda: Complex64,
    order: usize,
) -> Result<TaylorSeries> {
    let k = TaylorSeries::kernel(lambda, order)?;
    let theta = taylor_of_inner(spec, order)?;
    let t_lambda = inner_eval(spec, lambda)?;
    let factor = TaylorSeries::one(order).sub(&theta.scale(t_lambda.conj()))?;
    factor.mul(&k)
}

/// `ℂ_{n-1}[z] = span{e_0, …, e_{n-1}}`.
pub fn poly_subspace(n: usize, order: usize) -> Result<SubspaceBasis> {
    if n == 0 || n > order {
        return Err(Error::Domain(format!(
            "poly subspace needs 1 ≤ n ≤ N, got n = {n}, N = {order}"
        )));
    }
    let v = DMatrix::from_fn(order + 1, n, |i, j| {
        Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
    });
    SubspaceBasis::build(v, format!("poly({n})"), BasisMetadata::exact(order))
}

/// `zⁿ (ΘH²)^⊥`: the model section of order `N - n`, shifted by `n`.
pub fn shifted_model_basis(
    n: usize,
    spec: &InnerFunctionSpec,
    order: usize,
) -> Result<SubspaceBasis> {
    if n == 0 || n >= order {
        return Err(Error::Domain(format!(
            "shift must satisfy 1 ≤ n < N, got n = {n}, N = {order}"
        )));
    }
    let base = model_basis(spec, order - n)?;
    let mut v = DMatrix::<Complex64>::zeros(order + 1, base.dim());
    v.view_mut((n, 0), (order + 1 - n, base.dim()))
        .copy_from(&base.vectors);
    let mut meta = base.meta;
    meta.order = order;
    SubspaceBasis::build(v, format!("shifted-model({n},{})", spec.name), meta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectSumCheck {
    pub orthogonal: bool,
    pub spans_match: bool,
    /// `max |⟨a_i, b_j⟩|`.
    pub overlap: f64,
    /// `‖P_A + P_B - P_C‖`.
    pub defect: f64,
}

pub fn direct_sum_check(
    a: &SubspaceBasis,
    b: &SubspaceBasis,
    c: &SubspaceBasis,
) -> Result<DirectSumCheck> {
    if a.order() != b.order() || a.order() != c.order() {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: if a.order() != b.order() {
                b.order()
            } else {
                c.order()
            },
        });
    }
    let overlap = (a.vectors.adjoint() * &b.vectors)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let diff = a.projector().entries + b.projector().entries - c.projector().entries;
    let defect = spectral_norm(&diff);
    Ok(DirectSumCheck {
        orthogonal: overlap <= ORTHOGONALITY_TOL,
        spans_match: defect <= SPAN_TOL,
        overlap,
        defect,
    })
}
