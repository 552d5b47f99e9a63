//! Matrices of composition operators and of the Cesàro operator in the
//! monomial basis `e_0..e_N`.
//!
//! Column `n` of a composition matrix holds the Taylor coefficients of
//! `φ^n`, so the matrix acts on coefficient vectors as `f ↦ f∘φ`. Every
//! matrix is the compression `P_N C P_N`; the invariance module owns the
//! interpretation of what truncation loses.

mod registry;

pub use registry::{OperatorFamily, OperatorRegistry};

use std::f64::consts::PI;
use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{is_finite, TaylorSeries};

/// Power-iteration defaults for [`operator_norm`].
pub const NORM_ITERATIONS: usize = 500;
pub const NORM_TOL: f64 = 1e-10;

fn check_parameter(a: f64) -> Result<()> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain(format!(
            "symbol parameter a must lie strictly inside (0,1), got {a}"
        )));
    }
    Ok(())
}

/// `(α + βz)/(γ + δz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

impl Mobius {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.alpha + self.beta * z) / (self.gamma + self.delta * z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SymbolMap {
    /// `φ_a(z) = a z + 1 - a`.
    Affine {
        a: f64,
    },
    /// `σ_a(z) = a z / (1 - (1-a) z)`.
    MoebiusSigma {
        a: f64,
    },
    General {
        series: TaylorSeries,
    },
}

impl SymbolMap {
    pub fn affine(a: f64) -> Result<Self> {
        check_parameter(a)?;
        Ok(SymbolMap::Affine { a })
    }

    pub fn sigma(a: f64) -> Result<Self> {
        check_parameter(a)?;
        Ok(SymbolMap::MoebiusSigma { a })
    }

    /// A polynomial self-map given by its coefficients. Checked on a grid of
    /// the circle `|z| = 0.999`.
    pub fn general(series: TaylorSeries) -> Result<Self> {
        let m = 1024;
        for j in 0..m {
            let z = Complex64::from_polar(0.999, 2.0 * PI * j as f64 / m as f64);
            let v = series.eval(z).norm();
            if v > 1.0 {
                return Err(Error::Domain(format!(
                    "general symbol leaves the disk: |φ(z)| = {v} at |z| = 0.999"
                )));
            }
        }
        Ok(SymbolMap::General { series })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            SymbolMap::General { series } => series.eval(z),
            _ => self.mobius().expect("closed-form symbol").eval(z),
        }
    }

    pub fn mobius(&self) -> Option<Mobius> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match *self {
            SymbolMap::Affine { a } => Some(Mobius {
                alpha: Complex64::new(1.0 - a, 0.0),
                beta: Complex64::new(a, 0.0),
                gamma: one,
                delta: zero,
            }),
            SymbolMap::MoebiusSigma { a } => Some(Mobius {
                alpha: zero,
                beta: Complex64::new(a, 0.0),
                gamma: one,
                delta: Complex64::new(-(1.0 - a), 0.0),
            }),
            SymbolMap::General { .. } => None,
        }
    }

    pub fn parameter(&self) -> Option<f64> {
        match *self {
            SymbolMap::Affine { a } | SymbolMap::MoebiusSigma { a } => Some(a),
            SymbolMap::General { .. } => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SymbolMap::Affine { a } => format!("affine(a={a})"),
            SymbolMap::MoebiusSigma { a } => format!("sigma(a={a})"),
            SymbolMap::General { series } => format!("general(order={})", series.order()),
        }
    }
}

/// `φ_t(z) = e^{-t} z + 1 - e^{-t}`; `t = 0` (the identity) is excluded.
pub fn semigroup_member(t: f64) -> Result<SymbolMap> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!(
            "semigroup time must be positive, got {t}"
        )));
    }
    SymbolMap::affine((-t).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: DMatrix<Complex64>,
    pub provenance: String,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<Complex64>, provenance: impl Into<String>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "operator matrices are square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if !entries.iter().all(|c| is_finite(*c)) {
            return Err(Error::NonFinite("operator matrix"));
        }
        Ok(Self {
            entries,
            provenance: provenance.into(),
        })
    }

    pub fn identity(order: usize) -> Self {
        Self {
            entries: DMatrix::identity(order + 1, order + 1),
            provenance: "identity".into(),
        }
    }

    pub fn order(&self) -> usize {
        self.entries.nrows() - 1
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn apply(&self, f: &TaylorSeries) -> Result<TaylorSeries> {
        if f.order() != self.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: f.order(),
            });
        }
        let v = DVector::from_column_slice(f.coeffs());
        TaylorSeries::new((&self.entries * v).iter().copied().collect())
    }

    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(OperatorMatrix {
            entries: &self.entries * &other.entries,
            provenance: format!("{}*{}", self.provenance, other.provenance),
        })
    }

    /// Row-major CSV, each entry written as an `re,im` pair.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for row in self.entries.row_iter() {
            let line: Vec<String> = row.iter().map(|c| format!("{},{}", c.re, c.im)).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// `entry(k, n) = C(n,k) a^k (1-a)^{n-k}`, built column by column with the
/// weighted Pascal rule `P(n,k) = a P(n-1,k-1) + (1-a) P(n-1,k)`; every
/// column is a binomial probability vector so nothing overflows.
pub fn affine_matrix(a: f64, order: usize) -> Result<OperatorMatrix> {
    check_parameter(a)?;
    let n = order + 1;
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    let mut col = vec![0.0f64; n];
    col[0] = 1.0;
    m[(0, 0)] = Complex64::new(1.0, 0.0);
    for j in 1..n {
        for k in (0..=j).rev() {
            let from_below = if k > 0 { a * col[k - 1] } else { 0.0 };
            col[k] = from_below + (1.0 - a) * col[k];
        }
        for k in 0..=j {
            m[(k, j)] = Complex64::new(col[k], 0.0);
        }
    }
    OperatorMatrix::new(m, format!("affine(a={a})"))
}

/// `entry(k, n) = a^n C(k-1, n-1) (1-a)^{k-n}` for `k ≥ n ≥ 1`, column 0 = `e_0`.
pub fn sigma_matrix(a: f64, order: usize) -> Result<OperatorMatrix> {
    check_parameter(a)?;
    let n = order + 1;
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    m[(0, 0)] = Complex64::new(1.0, 0.0);
    let (ln_a, ln_b) = (a.ln(), (1.0 - a).ln());
    for col in 1..n {
        // log C(k-1, col-1), advanced along k
        let mut ln_binom = 0.0f64;
        for k in col..n {
            if k > col {
                ln_binom += ((k - 1) as f64).ln() - ((k - col) as f64).ln();
            }
            let v = (col as f64 * ln_a + ln_binom + (k - col) as f64 * ln_b).exp();
            m[(k, col)] = Complex64::new(v, 0.0);
        }
    }
    OperatorMatrix::new(m, format!("sigma(a={a})"))
}

/// Row `n` averages `a_0..a_n`.
pub fn cesaro_matrix(order: usize) -> OperatorMatrix {
    let n = order + 1;
    let m = DMatrix::from_fn(n, n, |row, col| {
        if col <= row {
            Complex64::new(1.0 / (row as f64 + 1.0), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    OperatorMatrix {
        entries: m,
        provenance: "cesaro".into(),
    }
}

/// Composition matrix for any symbol: closed forms for the affine and
/// sigma families, series powers otherwise.
pub fn composition_matrix(symbol: &SymbolMap, order: usize) -> Result<OperatorMatrix> {
    match symbol {
        SymbolMap::Affine { a } => affine_matrix(*a, order),
        SymbolMap::MoebiusSigma { a } => sigma_matrix(*a, order),
        SymbolMap::General { series } => {
            let phi = series.with_order(order);
            let n = order + 1;
            let mut m = DMatrix::<Complex64>::zeros(n, n);
            let mut power = TaylorSeries::one(order);
            for col in 0..n {
                for (k, c) in power.coeffs().iter().enumerate() {
                    m[(k, col)] = *c;
                }
                power = power.mul(&phi)?;
            }
            OperatorMatrix::new(m, symbol.label())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Largest singular value by power iteration on `MᴴM`, seeded with the
/// normalized all-ones vector. Non-convergence is reported, not raised.
pub fn operator_norm(m: &OperatorMatrix, iterations: usize, tol: f64) -> Result<NormEstimate> {
    if iterations == 0 {
        return Err(Error::Domain(
            "power iteration needs at least one step".into(),
        ));
    }
    let n = m.entries.nrows();
    let gram = m.entries.adjoint() * &m.entries;
    let mut v = DVector::from_element(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
    let mut estimate = 0.0f64;
    for it in 1..=iterations {
        let w = &gram * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return Ok(NormEstimate {
                value: 0.0,
                converged: true,
                iterations: it,
            });
        }
        let next = norm.sqrt();
        v = w / Complex64::new(norm, 0.0);
        if (next - estimate).abs() <= tol * next {
            return Ok(NormEstimate {
                value: next,
                converged: true,
                iterations: it,
            });
        }
        estimate = next;
    }
    Ok(NormEstimate {
        value: estimate,
        converged: false,
        iterations,
    })
}

/// `|a e^{iθ} / (1 - e^{iθ} + a e^{iθ})|`, the boundary modulus of `σ_a`.
pub fn sigma_boundary_modulus(a: f64, theta: f64) -> Result<f64> {
    check_parameter(a)?;
    let e = Complex64::from_polar(1.0, theta);
    Ok((e * a / (Complex64::new(1.0, 0.0) - e + e * a)).norm())
}
