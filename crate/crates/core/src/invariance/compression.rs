use super::{
    base_report, Diagnostics, InvarianceReport, Method, ParamEcho, ResidualPoint, Tolerances,
    Verdict, LIMIT_CAVEAT,
};
use crate::error::{Error, Result};
use crate::linalg::spectral_norm;
use crate::operators::OperatorMatrix;
use crate::subspaces::SubspaceBasis;

/// Smallest order used as the low end of a trend.
const MIN_TREND_ORDER: usize = 8;

fn residual_value(sub: &SubspaceBasis, op: &OperatorMatrix) -> Result<f64> {
    if sub.order() != op.order() {
        return Err(Error::DimensionMismatch(format!(
            "subspace has order {} but operator has order {}",
            sub.order(),
            op.order()
        )));
    }
    if sub.dim() == 0 {
        return Err(Error::Precondition(
            "compression needs a nontrivial subspace".into(),
        ));
    }
    let q = &sub.vectors;
    let tq = &op.entries * q;
    let outside = &tq - q * (q.adjoint() * &tq);
    let num = spectral_norm(&outside);
    let den = spectral_norm(&tq).max(f64::MIN_POSITIVE);
    let r = num / den;
    if !r.is_finite() {
        return Err(Error::NonFinite("compression residual"));
    }
    Ok(r)
}

/// `‖(I - P) T P‖ / ‖T P‖` at a single order, with norms from singular values.
pub fn compression_residual(
    sub: &SubspaceBasis,
    op: &OperatorMatrix,
    tol: &Tolerances,
) -> Result<InvarianceReport> {
    let r = residual_value(sub, op)?;
    let verdict = if r <= tol.tol_inv {
        Verdict::Invariant
    } else {
        Verdict::NonInvariant
    };
    let mut rep = base_report(
        verdict,
        Method::Compression,
        Some(r),
        tol.tol_inv,
        Diagnostics::Compression {
            residuals: vec![ResidualPoint {
                order: sub.order(),
                residual: r,
            }],
        },
        ParamEcho {
            a: None,
            order: Some(sub.order()),
            tolerances: *tol,
        },
    );
    rep.subspace = sub.label.clone();
    rep.symbol = op.provenance.clone();
    if verdict == Verdict::NonInvariant {
        rep.witness = Some(format!(
            "residual {r:e} exceeds {:e} at N = {}",
            tol.tol_inv,
            sub.order()
        ));
    }
    Ok(rep)
}

/// Residuals at `N/4`, `N/2` and `N`, rebuilding subspace and operator at
/// each order.
///
/// Invariant when the residual at `N` is within `tol_inv`. Otherwise a
/// series that decays (each step within `trend_noise` growth, overall ratio
/// at most `trend_ratio`) is inconclusive with a limit caveat, and anything
/// else is non-invariant.
pub fn compression_trend<S, O>(
    sub: S,
    op: O,
    order: usize,
    tol: &Tolerances,
) -> Result<InvarianceReport>
where
    S: Fn(usize) -> Result<SubspaceBasis>,
    O: Fn(usize) -> Result<OperatorMatrix>,
{
    let orders: Vec<usize> = if order / 4 >= MIN_TREND_ORDER {
        vec![order / 4, order / 2, order]
    } else {
        vec![order]
    };
    let mut points = Vec::new();
    let mut caveats = Vec::new();
    let mut top = None;
    for &n in &orders {
        let basis = match sub(n) {
            Ok(b) => b,
            Err(Error::Resolution { .. }) if n != order => {
                caveats.push(format!("order {n} unresolved, left out of the trend"));
                continue;
            }
            Err(e) => return Err(e),
        };
        let m = op(n)?;
        points.push(ResidualPoint {
            order: n,
            residual: residual_value(&basis, &m)?,
        });
        if n == order {
            top = Some((basis.label.clone(), m.provenance.clone()));
        }
    }
    let last = points.last().expect("order N always evaluated").residual;
    let first = points[0].residual;
    let decays = points.len() >= 3
        && points
            .windows(2)
            .all(|w| w[1].residual <= (1.0 + tol.trend_noise) * w[0].residual)
        && last <= tol.trend_ratio * first;
    let (verdict, witness) = if last <= tol.tol_inv {
        (Verdict::Invariant, None)
    } else if decays {
        caveats.push(LIMIT_CAVEAT.to_string());
        (Verdict::Inconclusive, None)
    } else {
        let series: Vec<String> = points
            .iter()
            .map(|p| format!("N={}: {:e}", p.order, p.residual))
            .collect();
        (
            Verdict::NonInvariant,
            Some(format!("residual does not decay ({})", series.join(", "))),
        )
    };
    let mut rep = base_report(
        verdict,
        Method::Compression,
        Some(last),
        tol.tol_inv,
        Diagnostics::Compression { residuals: points },
        ParamEcho {
            a: None,
            order: Some(order),
            tolerances: *tol,
        },
    );
    let (label, symbol) = top.expect("order N always evaluated");
    rep.subspace = label;
    rep.symbol = symbol;
    rep.witness = witness;
    rep.caveats = caveats;
    Ok(rep)
}
