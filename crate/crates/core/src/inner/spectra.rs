use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{inner_eval, InnerFunctionSpec, Zero};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectraConfig {
    pub grid: usize,
    /// Increasing radii in (0,1).
    pub radii: Vec<f64>,
    pub tol: f64,
}

impl Default for SpectraConfig {
    fn default() -> Self {
        Self {
            grid: 1024,
            radii: (1..=20).map(|k| 1.0 - 0.5f64.powi(k)).collect(),
            tol: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryHit {
    pub theta: f64,
    pub min_modulus: f64,
}

/// A maximal run of consecutive flagged grid angles (cyclic).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
    pub points: usize,
    pub min_modulus: f64,
    pub contains_zero_angle: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectraReport {
    pub samples: Vec<BoundaryHit>,
    pub boundary_hits: Vec<BoundaryHit>,
    pub interior_zeros: Vec<Zero>,
    pub tol: f64,
    pub grid: usize,
    /// Radii over which the boundary minimum was taken.
    pub boundary_radii: Vec<f64>,
}

impl SpectraReport {
    pub fn arcs(&self) -> Vec<Arc> {
        let m = self.samples.len();
        let flagged: Vec<bool> = self
            .samples
            .iter()
            .map(|s| s.min_modulus < self.tol)
            .collect();
        if !flagged.iter().any(|&f| f) {
            return Vec::new();
        }
        if flagged.iter().all(|&f| f) {
            let min = self
                .samples
                .iter()
                .map(|s| s.min_modulus)
                .fold(f64::INFINITY, f64::min);
            return vec![Arc {
                start: 0.0,
                end: 2.0 * PI,
                points: m,
                min_modulus: min,
                contains_zero_angle: true,
            }];
        }
        // start scanning right after an unflagged index so no arc is split
        let origin = flagged.iter().position(|&f| !f).unwrap();
        let mut arcs = Vec::new();
        let mut current: Option<(usize, usize, f64)> = None;
        for step in 1..=m {
            let i = (origin + step) % m;
            if flagged[i] {
                let v = self.samples[i].min_modulus;
                current = Some(match current {
                    None => (i, 1, v),
                    Some((s, n, mn)) => (s, n + 1, mn.min(v)),
                });
            } else if let Some((s, n, mn)) = current.take() {
                arcs.push(self.make_arc(s, n, mn));
            }
        }
        if let Some((s, n, mn)) = current {
            arcs.push(self.make_arc(s, n, mn));
        }
        arcs
    }

    fn make_arc(&self, start: usize, len: usize, min_modulus: f64) -> Arc {
        let m = self.samples.len();
        let end = (start + len - 1) % m;
        Arc {
            start: self.samples[start].theta,
            end: self.samples[end].theta,
            points: len,
            min_modulus,
            contains_zero_angle: start + len > m || start == 0,
        }
    }

    pub fn flags_angle_zero(&self) -> bool {
        self.arcs().iter().any(|a| a.contains_zero_angle)
    }
}

/// Boundary spectrum probe: for each grid angle, the minimum of `|Θ(r e^{iθ})|`
/// over the outer half of the radius schedule, as a finite proxy for
/// `liminf_{w→e^{iθ}} |Θ(w)|`. Interior zeros are echoed separately.
pub fn spectra_estimate(spec: &InnerFunctionSpec, config: &SpectraConfig) -> Result<SpectraReport> {
    if config.grid < 256 {
        return Err(Error::Domain(format!(
            "spectra grid needs at least 256 angles, got {}",
            config.grid
        )));
    }
    if config.radii.is_empty()
        || config.radii.iter().any(|r| !(*r > 0.0 && *r < 1.0))
        || config.radii.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::Domain(
            "radius schedule must be strictly increasing inside (0,1)".into(),
        ));
    }
    let skip = config.radii.len() / 2;
    let radii = &config.radii[skip..];
    let m = config.grid;
    let samples = (0..m)
        .into_par_iter()
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / m as f64;
            let mut min_modulus = f64::INFINITY;
            for r in radii {
                let v = inner_eval(spec, Complex64::from_polar(*r, theta))?.norm();
                min_modulus = min_modulus.min(v);
            }
            Ok(BoundaryHit { theta, min_modulus })
        })
        .collect::<Result<Vec<_>>>()?;
    let boundary_hits = samples
        .iter()
        .filter(|s| s.min_modulus < config.tol)
        .copied()
        .collect();
    Ok(SpectraReport {
        samples,
        boundary_hits,
        interior_zeros: spec.zeros().to_vec(),
        tol: config.tol,
        grid: m,
        boundary_radii: radii.to_vec(),
    })
}
