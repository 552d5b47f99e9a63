//! The quotient `Θ∘φ / Θ` for Möbius symbols, assembled factor by factor.
//!
//! A zero `w` of `Θ` with `v = φ(w)` also a zero contributes the analytic
//! ratio `b_v(φ)/b_w = (c_v/c_w)(β - vδ)(1 - w̄z) / ((γ - v̄α) + (δ - v̄β)z)`
//! where `φ = (α + βz)/(γ + δz)` and `b_w = c_w (w - z)/(1 - w̄z)`. Leftover
//! numerator factors are `b_v∘φ`. An atom `(ξ, K)` contributes the exponent
//! `-K[(ξ+φ)/(ξ-φ) - (ξ+z)/(ξ-z)]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::multiplicity::{beyond_horizon, lookup, spec_entries};
use super::{
    base_report, Diagnostics, InvarianceReport, Method, ParamEcho, Tolerances, Verdict,
    HORIZON_CAVEAT,
};
use crate::error::{Error, Result};
use crate::inner::{blaschke_normalizer, InnerFunctionSpec};
use crate::operators::{Mobius, SymbolMap};
use crate::series::{is_finite, LinearFraction, TaylorSeries};

struct Factors {
    /// Analytic factors with their powers.
    terms: Vec<(LinearFraction, u32)>,
    /// Summed into the exponent.
    exponent: Vec<LinearFraction>,
    blocked: Option<Complex64>,
    paired: usize,
    virtual_pairs: usize,
    unpaired: usize,
}

fn paired_ratio(w: Complex64, v: Complex64, m: &Mobius) -> LinearFraction {
    let s = blaschke_normalizer(v) / blaschke_normalizer(w) * (m.beta - v * m.delta);
    LinearFraction::new(
        s,
        -s * w.conj(),
        m.gamma - v.conj() * m.alpha,
        m.delta - v.conj() * m.beta,
    )
}

fn composed_factor(v: Complex64, m: &Mobius) -> LinearFraction {
    let c = blaschke_normalizer(v);
    LinearFraction::new(
        c * (v * m.gamma - m.alpha),
        c * (v * m.delta - m.beta),
        m.gamma - v.conj() * m.alpha,
        m.delta - v.conj() * m.beta,
    )
}

fn factorize(spec: &InnerFunctionSpec, m: &Mobius, tol: &Tolerances) -> Factors {
    let entries = spec_entries(spec);
    let mut used = vec![0u32; entries.len()];
    let mut f = Factors {
        terms: Vec::new(),
        exponent: Vec::new(),
        blocked: None,
        paired: 0,
        virtual_pairs: 0,
        unpaired: 0,
    };
    for e in &entries {
        let v = m.eval(e.point);
        if beyond_horizon(e, v) {
            f.terms.push((paired_ratio(e.point, v, m), e.mult));
            f.virtual_pairs += 1;
            continue;
        }
        match lookup(&entries, v, tol.eps_match) {
            Some(i) if entries[i].mult >= used[i] + e.mult => {
                used[i] += e.mult;
                f.terms
                    .push((paired_ratio(e.point, entries[i].point, m), e.mult));
                f.paired += 1;
            }
            _ => {
                f.blocked.get_or_insert(e.point);
            }
        }
    }
    for (e, u) in entries.iter().zip(&used) {
        if e.mult > *u {
            f.terms.push((composed_factor(e.point, m), e.mult - u));
            f.unpaired += 1;
        }
    }
    for atom in spec.atoms() {
        let k = Complex64::new(atom.mass, 0.0);
        let xi = atom.xi;
        f.exponent.push(LinearFraction::new(
            -k * (xi * m.gamma + m.alpha),
            -k * (xi * m.delta + m.beta),
            xi * m.gamma - m.alpha,
            xi * m.delta - m.beta,
        ));
        f.exponent.push(LinearFraction::new(
            k * xi,
            k,
            xi,
            Complex64::new(-1.0, 0.0),
        ));
    }
    f
}

fn mobius_of(symbol: &SymbolMap) -> Result<Mobius> {
    symbol
        .mobius()
        .ok_or_else(|| Error::Unsupported("Schur quotient needs a Möbius symbol".into()))
}

fn log_modulus(f: &Factors, z: Complex64) -> f64 {
    let mut s = 0.0;
    for (lf, p) in &f.terms {
        s += *p as f64 * lf.eval(z).norm().ln();
    }
    let x: Complex64 = f.exponent.iter().map(|lf| lf.eval(z)).sum();
    s + x.re
}

/// Taylor series of `Θ∘φ / Θ` up to `order`, or `None` when an uncancelled
/// zero blocks the division.
pub fn quotient_series(
    spec: &InnerFunctionSpec,
    symbol: &SymbolMap,
    order: usize,
    tol: &Tolerances,
) -> Result<Option<TaylorSeries>> {
    let f = factorize(spec, &mobius_of(symbol)?, tol);
    if f.blocked.is_some() {
        return Ok(None);
    }
    let mut q = TaylorSeries::one(order);
    for (lf, p) in &f.terms {
        let s = lf.series(order, tol.eps_div)?;
        for _ in 0..*p {
            q = q.mul(&s)?;
        }
    }
    if !f.exponent.is_empty() {
        let mut x = TaylorSeries::zero(order);
        for lf in &f.exponent {
            x = x.add(&lf.series(order, tol.eps_div)?)?;
        }
        q = q.mul(&x.exp()?)?;
    }
    if !q.coeffs().iter().all(|c| is_finite(*c)) {
        return Err(Error::NonFinite("quotient series"));
    }
    Ok(Some(q))
}

/// Schur-class test for `Θ∘φ / Θ`: the sup of its modulus over the circle
/// `|z| = r` on an `M`-point grid, evaluated from the closed-form factors.
pub fn schur_quotient(
    spec: &InnerFunctionSpec,
    symbol: &SymbolMap,
    order: usize,
    tol: &Tolerances,
) -> Result<InvarianceReport> {
    if !(tol.radius > 0.0 && tol.radius < 1.0) || tol.grid == 0 {
        return Err(Error::Domain("Schur grid needs 0 < r < 1 and M ≥ 1".into()));
    }
    let m = mobius_of(symbol)?;
    let f = factorize(spec, &m, tol);
    let params = ParamEcho {
        a: symbol.parameter(),
        order: Some(order),
        tolerances: *tol,
    };
    let mut diag = Diagnostics::SchurQuotient {
        sup: None,
        log_sup: None,
        argmax_theta: None,
        radius: tol.radius,
        grid: tol.grid,
        paired: f.paired,
        virtual_pairs: f.virtual_pairs,
        unpaired: f.unpaired,
        blocked_at: f.blocked,
    };
    let mut rep = if let Some(w) = f.blocked {
        let mut rep = base_report(
            Verdict::NonInvariant,
            Method::SchurQuotient,
            None,
            tol.tol_sup,
            diag,
            params,
        );
        rep.witness = Some(format!(
            "quotient not analytic at w = {w}: φ(w) = {} is not a zero of matching multiplicity",
            m.eval(w)
        ));
        rep
    } else {
        let grid = tol.grid;
        let logs: Vec<f64> = (0..grid)
            .into_par_iter()
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / grid as f64;
                log_modulus(&f, Complex64::from_polar(tol.radius, theta))
            })
            .collect();
        let (jmax, lmax) = logs
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (j, v)| {
                if *v > acc.1 {
                    (j, *v)
                } else {
                    acc
                }
            });
        if lmax.is_nan() {
            return Err(Error::NonFinite("quotient modulus"));
        }
        // saturate so reports stay finite
        let lmax = lmax.min(f64::MAX);
        let sup = lmax.exp().min(f64::MAX);
        let theta = 2.0 * PI * jmax as f64 / grid as f64;
        if let Diagnostics::SchurQuotient {
            sup: s,
            log_sup,
            argmax_theta,
            ..
        } = &mut diag
        {
            *s = Some(sup);
            *log_sup = Some(lmax);
            *argmax_theta = Some(theta);
        }
        let verdict = if sup <= 1.0 + tol.tol_sup {
            Verdict::Invariant
        } else {
            Verdict::NonInvariant
        };
        let mut rep = base_report(
            verdict,
            Method::SchurQuotient,
            Some((sup - 1.0).max(0.0)),
            tol.tol_sup,
            diag,
            params,
        );
        if verdict == Verdict::NonInvariant {
            rep.witness = Some(format!(
                "|Θ∘φ/Θ| reaches {sup:e} (log {lmax}) at θ = {theta}, r = {}",
                tol.radius
            ));
        }
        rep
    };
    if f.virtual_pairs > 0 {
        rep.caveats.push(HORIZON_CAVEAT.to_string());
    }
    rep.spec = spec.name.clone();
    rep.subspace = format!("beurling({})", spec.name);
    rep.symbol = symbol.label();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_is_blocked_under_affine() {
        let tol = Tolerances::default();
        let r = schur_quotient(
            &InnerFunctionSpec::monomial(1),
            &SymbolMap::affine(0.5).unwrap(),
            64,
            &tol,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::NonInvariant);
        assert!(r.witness.unwrap().contains("not analytic"));
        assert!(quotient_series(
            &InnerFunctionSpec::monomial(1),
            &SymbolMap::affine(0.5).unwrap(),
            8,
            &tol
        )
        .unwrap()
        .is_none());
    }

    #[test]
    fn monomial_pairs_with_itself_under_sigma() {
        let tol = Tolerances::default();
        let sigma = SymbolMap::sigma(0.5).unwrap();
        let r = schur_quotient(&InnerFunctionSpec::monomial(3), &sigma, 64, &tol).unwrap();
        assert_eq!(r.verdict, Verdict::Invariant);
        // (σ/z)^3 = (a / (1 - (1-a) z))^3
        let q = quotient_series(&InnerFunctionSpec::monomial(3), &sigma, 6, &tol)
            .unwrap()
            .unwrap();
        assert!((q.coeff(0) - Complex64::new(0.125, 0.0)).norm() < 1e-15);
        assert!((q.coeff(1) - Complex64::new(3.0 * 0.125 * 0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn constant_quotient_is_one() {
        let tol = Tolerances::default();
        let spec = InnerFunctionSpec::constant(Complex64::new(0.0, 1.0)).unwrap();
        let r = schur_quotient(&spec, &SymbolMap::affine(0.3).unwrap(), 32, &tol).unwrap();
        assert_eq!(r.verdict, Verdict::Invariant);
        assert!((r.sup_quotient().unwrap() - 1.0).abs() < 1e-15);
    }
}
