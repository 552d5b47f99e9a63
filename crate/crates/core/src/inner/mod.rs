//! Inner functions `Θ = λ · B · S` built from a finite symbolic description:
//! a unimodular constant, a Blaschke zero list with multiplicities (optionally
//! grown by a generator) and finitely many atoms of the singular measure.

mod blaschke;
mod spec_file;
mod spectra;

pub use blaschke::{blaschke_condition_check, zero_orbit, BlaschkeCheck};
pub use spec_file::parse_spec;
pub use spectra::{spectra_estimate, Arc, BoundaryHit, SpectraConfig, SpectraReport};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{is_finite, LinearFraction, TaylorSeries, DEFAULT_EPS_DIV};

/// Absolute tolerance for "z coincides with a zero".
pub const POINT_TOL: f64 = 1e-15;

/// Tolerance on `|λ| = 1` and `|ξ| = 1`.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Number of orbit points used when a generator count is not given.
pub const DEFAULT_ORBIT_COUNT: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub point: Complex64,
    pub mult: u32,
    /// Index into [`InnerFunctionSpec::generators`] when the zero was produced by a generator.
    pub generator: Option<usize>,
}

/// Point mass `mass` of the singular measure at `xi` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub xi: Complex64,
    pub mass: f64,
}

impl Atom {
    pub fn at_angle(angle: f64, mass: f64) -> Self {
        Self {
            xi: Complex64::from_polar(1.0, angle),
            mass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ZeroGenerator {
    /// `a^n z0 + 1 - a^n` for `n = 0..count`.
    PhiOrbit {
        z0: Complex64,
        a: f64,
        count: usize,
    },
    ExplicitSequence {
        points: Vec<Complex64>,
    },
}

impl ZeroGenerator {
    pub fn points(&self) -> Result<Vec<Complex64>> {
        match self {
            ZeroGenerator::PhiOrbit { z0, a, count } => zero_orbit(*z0, *a, *count),
            ZeroGenerator::ExplicitSequence { points } => Ok(points.clone()),
        }
    }
}

/// A generator after expansion, with the truncation horizon it implies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub generator: ZeroGenerator,
    /// Smallest `|1 - z|` over the generated points.
    pub frontier: f64,
    /// Certified (phi-orbit) or extrapolated (explicit) bound on the discarded Blaschke sum.
    pub tail_bound: f64,
    /// Points dropped because they round onto the unit circle in double precision.
    pub clipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerFunctionSpec {
    pub name: String,
    unimodular: Complex64,
    zeros: Vec<Zero>,
    atoms: Vec<Atom>,
    generators: Vec<GeneratorRecord>,
}

fn check_point_in_disk(z: Complex64, what: &str) -> Result<()> {
    if !is_finite(z) {
        return Err(Error::InvalidSpec(format!("{what} is not finite")));
    }
    if z.norm() >= 1.0 {
        return Err(Error::InvalidSpec(format!(
            "{what} {z} must lie in the open unit disk (|z| = {})",
            z.norm()
        )));
    }
    Ok(())
}

impl InnerFunctionSpec {
    /// The constant inner function `λ`.
    pub fn constant(unimodular: Complex64) -> Result<Self> {
        if !is_finite(unimodular) || (unimodular.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::InvalidSpec(format!(
                "unimodular constant must satisfy |λ| = 1, got |λ| = {}",
                unimodular.norm()
            )));
        }
        Ok(Self {
            name: "constant".into(),
            unimodular,
            zeros: Vec::new(),
            atoms: Vec::new(),
            generators: Vec::new(),
        })
    }

    pub fn identity() -> Self {
        Self::constant(Complex64::new(1.0, 0.0)).expect("1 is unimodular")
    }

    /// `z^n`.
    pub fn monomial(n: u32) -> Self {
        let mut s = Self::identity();
        s.name = format!("z^{n}");
        if n > 0 {
            s.zeros.push(Zero {
                point: Complex64::new(0.0, 0.0),
                mult: n,
                generator: None,
            });
        }
        s
    }

    /// `exp(-K (ξ+z)/(ξ-z))` with `ξ = e^{i angle}`.
    pub fn atomic(angle: f64, mass: f64) -> Result<Self> {
        let mut s = Self::identity().with_atom(Atom::at_angle(angle, mass))?;
        s.name = format!("atomic(angle={angle},K={mass})");
        Ok(s)
    }

    /// Finite Blaschke product with simple zeros.
    pub fn blaschke(points: &[Complex64]) -> Result<Self> {
        let mut s = Self::identity();
        for p in points {
            s = s.with_zero(*p, 1)?;
        }
        s.name = "blaschke".into();
        Ok(s)
    }

    pub fn phi_orbit(z0: Complex64, a: f64, count: usize) -> Result<Self> {
        let mut s = Self::identity().with_generator(ZeroGenerator::PhiOrbit { z0, a, count })?;
        s.name = format!("orbit(z0={z0},a={a},n={count})");
        Ok(s)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_unimodular(mut self, unimodular: Complex64) -> Result<Self> {
        let c = Self::constant(unimodular)?;
        self.unimodular = c.unimodular;
        Ok(self)
    }

    pub fn with_zero(self, point: Complex64, mult: u32) -> Result<Self> {
        self.push_zero(point, mult, None)
    }

    fn push_zero(mut self, point: Complex64, mult: u32, generator: Option<usize>) -> Result<Self> {
        check_point_in_disk(point, "zero")?;
        if mult == 0 {
            return Err(Error::InvalidSpec(
                "zero multiplicity must be positive".into(),
            ));
        }
        if let Some(z) = self
            .zeros
            .iter_mut()
            .find(|z| (z.point - point).norm() <= POINT_TOL)
        {
            z.mult += mult;
            z.generator = z.generator.or(generator);
        } else {
            self.zeros.push(Zero {
                point,
                mult,
                generator,
            });
        }
        Ok(self)
    }

    pub fn with_atom(mut self, atom: Atom) -> Result<Self> {
        if !is_finite(atom.xi) || (atom.xi.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::InvalidSpec(format!(
                "atom location must be unimodular, got |ξ| = {}",
                atom.xi.norm()
            )));
        }
        if !(atom.mass.is_finite() && atom.mass > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "atom mass must be positive and finite, got {}",
                atom.mass
            )));
        }
        if let Some(a) = self
            .atoms
            .iter_mut()
            .find(|a| (a.xi - atom.xi).norm() <= UNIMODULAR_TOL)
        {
            a.mass += atom.mass;
        } else {
            self.atoms.push(atom);
        }
        Ok(self)
    }

    /// Expands a generator into zeros. Divergent generators are rejected.
    pub fn with_generator(mut self, generator: ZeroGenerator) -> Result<Self> {
        let raw = generator.points()?;
        if let Some(p) = raw.iter().find(|p| p.norm() > 1.0 + f64::EPSILON) {
            return Err(Error::InvalidSpec(format!(
                "generated point {p} lies outside the open unit disk"
            )));
        }
        let points: Vec<Complex64> = raw.iter().copied().filter(|p| p.norm() < 1.0).collect();
        let clipped = raw.len() - points.len();
        if points.is_empty() {
            return Err(Error::InvalidSpec(
                "zero generator produced no points".into(),
            ));
        }
        let check = blaschke_condition_check(&generator, points.len())?;
        if !check.convergent {
            return Err(Error::InvalidSpec(format!(
                "zero generator fails the Blaschke condition estimate (partial sum {})",
                check.sum
            )));
        }
        let frontier = points
            .iter()
            .map(|p| (Complex64::new(1.0, 0.0) - p).norm())
            .fold(f64::INFINITY, f64::min);
        let index = self.generators.len();
        self.generators.push(GeneratorRecord {
            generator,
            frontier,
            tail_bound: check.tail_bound.unwrap_or(0.0),
            clipped,
        });
        for p in points {
            self = self.push_zero(p, 1, Some(index))?;
        }
        Ok(self)
    }

    /// Product of two inner functions: zeros and atoms merged, generators kept.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.unimodular *= other.unimodular;
        let offset = out.generators.len();
        out.generators.extend(other.generators.iter().cloned());
        for z in &other.zeros {
            out = out.push_zero(z.point, z.mult, z.generator.map(|g| g + offset))?;
        }
        for a in &other.atoms {
            out = out.with_atom(*a)?;
        }
        out.name = format!("{}*{}", self.name, other.name);
        Ok(out)
    }

    pub fn unimodular(&self) -> Complex64 {
        self.unimodular
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn generators(&self) -> &[GeneratorRecord] {
        &self.generators
    }

    pub fn is_constant(&self) -> bool {
        self.zeros.is_empty() && self.atoms.is_empty()
    }

    pub fn is_zero_free(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn zero_count(&self) -> u32 {
        self.zeros.iter().map(|z| z.mult).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Multiplicity of `point` in the zero list, matching within `eps`.
    pub fn multiplicity_at(&self, point: Complex64, eps: f64) -> u32 {
        self.zeros
            .iter()
            .filter(|z| (z.point - point).norm() <= eps)
            .map(|z| z.mult)
            .sum()
    }
}

/// `c (w - z)/(1 - conj(w) z)` with `c = conj(w)/|w|`, or plain `z` when `w = 0`.
pub(crate) fn blaschke_factor(w: Complex64) -> LinearFraction {
    let one = Complex64::new(1.0, 0.0);
    let c = blaschke_normalizer(w);
    LinearFraction::new(c * w, -c, one, -w.conj())
}

pub(crate) fn blaschke_normalizer(w: Complex64) -> Complex64 {
    if w.norm() == 0.0 {
        Complex64::new(-1.0, 0.0)
    } else {
        w.conj() / w.norm()
    }
}

/// `-K (ξ + z)/(ξ - z)`.
pub(crate) fn atom_exponent(atom: &Atom) -> LinearFraction {
    let k = Complex64::new(atom.mass, 0.0);
    LinearFraction::new(-k * atom.xi, -k, atom.xi, Complex64::new(-1.0, 0.0))
}

/// Point value `Θ(z)` for `|z| < 1`.
pub fn inner_eval(spec: &InnerFunctionSpec, z: Complex64) -> Result<Complex64> {
    if !is_finite(z) {
        return Err(Error::NonFinite("inner_eval argument"));
    }
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "inner functions are evaluated inside the disk, got |z| = {}",
            z.norm()
        )));
    }
    if spec.zeros.iter().any(|w| (w.point - z).norm() <= POINT_TOL) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut value = spec.unimodular;
    for w in &spec.zeros {
        value *= blaschke_factor(w.point).eval(z).powu(w.mult);
    }
    let exponent: Complex64 = spec.atoms.iter().map(|a| atom_exponent(a).eval(z)).sum();
    Ok(value * exponent.exp())
}

/// Taylor coefficients of `Θ` up to `order`.
pub fn taylor_of_inner(spec: &InnerFunctionSpec, order: usize) -> Result<TaylorSeries> {
    let mut out = TaylorSeries::one(order).scale(spec.unimodular);
    for w in &spec.zeros {
        let factor = blaschke_factor(w.point).series(order, DEFAULT_EPS_DIV)?;
        for _ in 0..w.mult {
            out = out.mul(&factor)?;
        }
    }
    if !spec.atoms.is_empty() {
        let mut exponent = TaylorSeries::zero(order);
        for a in &spec.atoms {
            exponent = exponent.add(&atom_exponent(a).series(order, DEFAULT_EPS_DIV)?)?;
        }
        out = out.mul(&exponent.exp()?)?;
    }
    Ok(out)
}
