//! Truncated Taylor series standing in for H² functions.
//!
//! A [`TaylorSeries`] of order `N` holds the coefficients `a_0..a_N` of a
//! power series. The H² inner product is the coefficient dot product
//! `<f, g> = Σ a_n conj(b_n)`, so everything here is exact arithmetic on
//! the retained coefficients. Binary operations never promote orders
//! implicitly: operands must agree, and callers reconcile with
//! [`TaylorSeries::with_order`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation order used when callers do not pick one.
pub const DEFAULT_ORDER: usize = 256;

/// Leading-coefficient floor for series division.
pub const DEFAULT_EPS_DIV: f64 = 1e-13;

pub(crate) fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
}

impl TaylorSeries {
    /// Wraps a coefficient vector. Rejects empty or non-finite input.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain(
                "a series needs at least one coefficient".into(),
            ));
        }
        if !coeffs.iter().all(|c| is_finite(*c)) {
            return Err(Error::NonFinite("TaylorSeries::new"));
        }
        Ok(Self { coeffs })
    }

    pub(crate) fn from_vec_unchecked(coeffs: Vec<Complex64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, order)
    }

    /// The basis monomial `e_n(z) = z^n` at the given order (zero if `n > order`).
    pub fn monomial(n: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if n <= order {
            s.coeffs[n] = Complex64::new(1.0, 0.0);
        }
        s
    }

    /// Reproducing kernel `κ_w(z) = 1/(1 - conj(w) z)`, coefficients `conj(w)^n`.
    pub fn kernel(w: Complex64, order: usize) -> Result<Self> {
        if !is_finite(w) {
            return Err(Error::NonFinite("kernel point"));
        }
        if w.norm() >= 1.0 {
            return Err(Error::Domain(format!(
                "kernel point must lie in the open unit disk, got |w| = {}",
                w.norm()
            )));
        }
        let wc = w.conj();
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 0..=order {
            coeffs.push(p);
            p *= wc;
        }
        Ok(Self { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Pads with zeros or truncates to the requested order.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    /// `Σ |a_n|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// `<self, other> = Σ a_n conj(b_n)`; linear in the first argument.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_order(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Multiplication by `z^n`, keeping the order (top coefficients fall off).
    pub fn shift(&self, n: usize) -> Self {
        let order = self.order();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if k + n > order {
                break;
            }
            coeffs[k + n] = *c;
        }
        Self { coeffs }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let order = self.order();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(Self { coeffs })
    }

    /// Series quotient by forward substitution. Requires `|g_0| > eps`.
    pub fn div(&self, other: &Self, eps: f64) -> Result<Self> {
        self.check_order(other)?;
        let g0 = other.coeffs[0];
        if g0.norm() <= eps {
            return Err(Error::SingularDivision {
                leading: g0.norm(),
                eps,
            });
        }
        let order = self.order();
        let mut h: Vec<Complex64> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n];
            for k in 1..=n {
                acc -= other.coeffs[k] * h[n - k];
            }
            h.push(acc / g0);
        }
        finite_or(h, "series division")
    }

    /// `exp(f)` via `h' = f' h`, i.e. `n h_n = Σ_{k=1..n} k f_k h_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        let order = self.order();
        let mut h: Vec<Complex64> = Vec::with_capacity(order + 1);
        h.push(self.coeffs[0].exp());
        for n in 1..=order {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=n {
                acc += self.coeffs[k] * (k as f64) * h[n - k];
            }
            h.push(acc / (n as f64));
        }
        finite_or(h, "series exponential")
    }
}

fn finite_or(coeffs: Vec<Complex64>, what: &'static str) -> Result<TaylorSeries> {
    if coeffs.iter().all(|c| is_finite(*c)) {
        Ok(TaylorSeries { coeffs })
    } else {
        Err(Error::NonFinite(what))
    }
}

pub fn inner_product(f: &TaylorSeries, g: &TaylorSeries) -> Result<Complex64> {
    f.inner(g)
}

pub fn eval(f: &TaylorSeries, z: Complex64) -> Complex64 {
    f.eval(z)
}

pub fn kernel(w: Complex64, order: usize) -> Result<TaylorSeries> {
    TaylorSeries::kernel(w, order)
}

pub fn multiply(f: &TaylorSeries, g: &TaylorSeries) -> Result<TaylorSeries> {
    f.mul(g)
}

pub fn divide(f: &TaylorSeries, g: &TaylorSeries) -> Result<TaylorSeries> {
    f.div(g, DEFAULT_EPS_DIV)
}

pub fn exp_series(f: &TaylorSeries) -> Result<TaylorSeries> {
    f.exp()
}

/// A first-degree rational function `(p0 + p1 z) / (q0 + q1 z)`.
///
/// Every Blaschke factor, every factor of a composed Blaschke factor and
/// every singular exponent in this crate has this shape, so expansions are
/// done in closed form rather than by generic division.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFraction {
    pub p0: Complex64,
    pub p1: Complex64,
    pub q0: Complex64,
    pub q1: Complex64,
}

impl LinearFraction {
    pub fn new(p0: Complex64, p1: Complex64, q0: Complex64, q1: Complex64) -> Self {
        Self { p0, p1, q0, q1 }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.p0 + self.p1 * z) / (self.q0 + self.q1 * z)
    }

    /// Taylor expansion at 0: `(p0 + p1 z) · (1/q0) Σ (-q1/q0)^n z^n`.
    pub fn series(&self, order: usize, eps: f64) -> Result<TaylorSeries> {
        if self.q0.norm() <= eps {
            return Err(Error::SingularDivision {
                leading: self.q0.norm(),
                eps,
            });
        }
        let ratio = -self.q1 / self.q0;
        let mut geo = Vec::with_capacity(order + 1);
        let mut p = Complex64::new(1.0, 0.0) / self.q0;
        for _ in 0..=order {
            geo.push(p);
            p *= ratio;
        }
        let mut coeffs = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut c = self.p0 * geo[n];
            if n > 0 {
                c += self.p1 * geo[n - 1];
            }
            coeffs.push(c);
        }
        finite_or(coeffs, "linear fraction expansion")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomials_are_orthonormal() {
        let e1 = TaylorSeries::monomial(1, 8);
        let e2 = TaylorSeries::monomial(2, 8);
        assert_eq!(e2.inner(&e2).unwrap(), c(1.0, 0.0));
        assert_eq!(e1.inner(&e2).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn kernel_norm_is_geometric_sum() {
        let k = TaylorSeries::kernel(c(0.5, 0.0), 64).unwrap();
        let n = k.inner(&k).unwrap();
        assert!((n.re - 4.0 / 3.0).abs() < 1e-12);
        assert!(n.im.abs() < 1e-15);
    }

    #[test]
    fn mismatched_orders_are_rejected() {
        let f = TaylorSeries::one(3);
        let g = TaylorSeries::one(4);
        assert_eq!(f.inner(&g), Err(Error::OrderMismatch { left: 3, right: 4 }));
        assert!(f.mul(&g).is_err());
    }

    #[test]
    fn horner_values() {
        let f = TaylorSeries::from_real(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(f.eval(c(0.0, 0.0)), c(1.0, 0.0));
        let e3 = TaylorSeries::monomial(3, 5);
        assert_eq!(e3.eval(c(0.5, 0.0)), c(0.125, 0.0));
        let k = TaylorSeries::kernel(c(0.5, 0.0), 64).unwrap();
        assert!((k.eval(c(0.5, 0.0)) - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn kernel_coefficients() {
        let k0 = TaylorSeries::kernel(c(0.0, 0.0), 4).unwrap();
        assert_eq!(k0, TaylorSeries::one(4));
        let k = TaylorSeries::kernel(c(0.5, 0.0), 3).unwrap();
        assert_eq!(
            k,
            TaylorSeries::from_real(&[1.0, 0.5, 0.25, 0.125]).unwrap()
        );
        assert!(TaylorSeries::kernel(c(1.0, 0.0), 3).is_err());
        assert!(TaylorSeries::kernel(c(0.6, 0.8), 3).is_err());
    }

    #[test]
    fn kernel_reproduces_point_value() {
        let mut coeffs = vec![c(0.0, 0.0); 9];
        coeffs[0] = c(2.0, 0.0);
        coeffs[1] = c(0.0, 3.0);
        let f = TaylorSeries::new(coeffs).unwrap();
        let k = TaylorSeries::kernel(c(0.5, 0.0), 8).unwrap();
        assert!((f.inner(&k).unwrap() - c(2.0, 1.5)).norm() < 1e-15);
    }

    #[test]
    fn product_quotient_exponential() {
        let f = TaylorSeries::from_real(&[1.0, 1.0, 0.0]).unwrap();
        let g = TaylorSeries::from_real(&[1.0, -1.0, 0.0]).unwrap();
        assert_eq!(
            f.mul(&g).unwrap(),
            TaylorSeries::from_real(&[1.0, 0.0, -1.0]).unwrap()
        );

        let one = TaylorSeries::from_real(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            one.div(&g, DEFAULT_EPS_DIV).unwrap(),
            TaylorSeries::from_real(&[1.0, 1.0, 1.0]).unwrap()
        );

        let z = TaylorSeries::from_real(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        let e = z.exp().unwrap();
        let expect = [1.0, 1.0, 0.5, 1.0 / 6.0];
        for (a, b) in e.coeffs().iter().zip(expect) {
            assert!((a - c(b, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn division_by_vanishing_leading_term_fails() {
        let f = TaylorSeries::one(3);
        let g = TaylorSeries::monomial(1, 3);
        assert!(matches!(
            f.div(&g, DEFAULT_EPS_DIV),
            Err(Error::SingularDivision { .. })
        ));
    }

    #[test]
    fn linear_fraction_matches_division() {
        let lf = LinearFraction::new(c(0.5, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(-0.5, 0.0));
        let num = TaylorSeries::from_real(&[0.5, -1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let den = TaylorSeries::from_real(&[1.0, -0.5, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let a = lf.series(5, DEFAULT_EPS_DIV).unwrap();
        let b = num.div(&den, DEFAULT_EPS_DIV).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() < 1e-15);
        }
        let z = c(0.3, -0.2);
        assert!((lf.eval(z) - a.with_order(200).eval(z)).norm() < 1e-3);
    }

    #[test]
    fn shift_and_reorder() {
        let f = TaylorSeries::from_real(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(
            f.shift(1),
            TaylorSeries::from_real(&[0.0, 1.0, 2.0]).unwrap()
        );
        assert_eq!(f.with_order(3).order(), 3);
        assert_eq!(
            f.with_order(1),
            TaylorSeries::from_real(&[1.0, 2.0]).unwrap()
        );
    }
}
