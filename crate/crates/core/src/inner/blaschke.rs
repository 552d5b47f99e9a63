use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ZeroGenerator;
use crate::error::{Error, Result};
use crate::series::is_finite;

/// Ratios at or above this are treated as non-summable.
const DIVERGENCE_RATIO: f64 = 0.999;

/// Points `a^n z0 + 1 - a^n`, `n = 0..count`, via `w_{n+1} = a w_n + 1 - a`.
///
/// The recurrence is exactly the affine map, so `φ_a(w_n)` reproduces
/// `w_{n+1}` bit for bit and zero matching stays exact.
pub fn zero_orbit(z0: Complex64, a: f64, count: usize) -> Result<Vec<Complex64>> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain(format!(
            "orbit parameter a must lie in (0,1), got {a}"
        )));
    }
    if !is_finite(z0) || z0.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "orbit seed must lie in the open unit disk, got |z0| = {}",
            z0.norm()
        )));
    }
    let mut out = Vec::with_capacity(count);
    let mut w = z0;
    for _ in 0..count {
        out.push(w);
        w = w * a + (1.0 - a);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeCheck {
    /// `Σ_{n<horizon} (1 - |z_n|)`.
    pub sum: f64,
    pub convergent: bool,
    /// Bound on the remaining sum beyond the horizon, when one exists.
    pub tail_bound: Option<f64>,
}

/// Blaschke summability estimate for a zero generator.
///
/// Phi-orbits carry the certified tail `a^M (1+|z0|)/(1-a)`. Explicit
/// sequences are extrapolated geometrically from the largest of the last
/// few ratios `d_{n+1}/d_n` of the distances `d_n = 1 - |z_n|`.
pub fn blaschke_condition_check(
    generator: &ZeroGenerator,
    horizon: usize,
) -> Result<BlaschkeCheck> {
    match generator {
        ZeroGenerator::PhiOrbit { z0, a, .. } => {
            let pts = zero_orbit(*z0, *a, horizon)?;
            let sum = pts.iter().map(|p| 1.0 - p.norm()).sum();
            let tail = a.powi(horizon as i32) * (1.0 + z0.norm()) / (1.0 - a);
            Ok(BlaschkeCheck {
                sum,
                convergent: true,
                tail_bound: Some(tail),
            })
        }
        ZeroGenerator::ExplicitSequence { points } => {
            let used = &points[..points.len().min(horizon)];
            for p in used {
                if !is_finite(*p) || p.norm() > 1.0 + f64::EPSILON {
                    return Err(Error::InvalidSpec(format!(
                        "sequence point {p} lies outside the open unit disk"
                    )));
                }
            }
            // points that rounded onto the circle carry no usable distance
            let d: Vec<f64> = used
                .iter()
                .map(|p| 1.0 - p.norm())
                .filter(|d| *d > 0.0)
                .collect();
            let sum = d.iter().sum();
            if d.len() < 2 {
                return Ok(BlaschkeCheck {
                    sum,
                    convergent: true,
                    tail_bound: Some(0.0),
                });
            }
            let window = (d.len() - 1).min(5);
            let ratio = d
                .windows(2)
                .rev()
                .take(window)
                .map(|w| w[1] / w[0])
                .fold(0.0f64, f64::max);
            if ratio < DIVERGENCE_RATIO {
                let last = *d.last().unwrap();
                Ok(BlaschkeCheck {
                    sum,
                    convergent: true,
                    tail_bound: Some(last * ratio / (1.0 - ratio)),
                })
            } else {
                Ok(BlaschkeCheck {
                    sum,
                    convergent: false,
                    tail_bound: None,
                })
            }
        }
    }
}
