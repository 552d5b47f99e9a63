//! TOML schema for [`InnerFunctionSpec`] files.
//!
//! ```toml
//! name = "orbit-plus-atom"                 # optional
//! unimodular = { re = 1.0, im = 0.0 }      # optional, defaults to 1
//! zeros = [ { re = 0.5, im = 0.0, mult = 2 } ]   # mult defaults to 1
//! atoms = [ { angle_radians = 0.0, mass = 1.0 } ]
//!
//! [zero_generator]                         # optional; may also be an array of tables
//! kind = "phi-orbit"                       # or "explicit-sequence" with `points = [{re, im}, ...]`
//! z0 = { re = 0.0, im = 0.0 }
//! a = 0.5
//! count = 40
//! ```

use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use toml::Spanned;

use super::{Atom, InnerFunctionSpec, ZeroGenerator};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ComplexField {
    re: f64,
    im: f64,
}

impl From<ComplexField> for Complex64 {
    fn from(c: ComplexField) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl From<Complex64> for ComplexField {
    fn from(c: Complex64) -> Self {
        ComplexField { re: c.re, im: c.im }
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ZeroField {
    re: f64,
    im: f64,
    #[serde(default = "one")]
    mult: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct AtomField {
    angle_radians: f64,
    mass: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum GeneratorField {
    PhiOrbit {
        z0: ComplexField,
        a: f64,
        count: usize,
    },
    ExplicitSequence {
        points: Vec<ComplexField>,
    },
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum OneOrMany {
    One(GeneratorField),
    Many(Vec<GeneratorField>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    name: Option<String>,
    unimodular: Option<Spanned<ComplexField>>,
    #[serde(default)]
    zeros: Vec<Spanned<ZeroField>>,
    #[serde(default)]
    atoms: Vec<Spanned<AtomField>>,
    zero_generator: Option<Spanned<OneOrMany>>,
}

#[derive(Debug, Serialize)]
struct SpecFileOut {
    name: String,
    unimodular: ComplexField,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    zeros: Vec<ZeroField>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    atoms: Vec<AtomField>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    zero_generator: Vec<GeneratorField>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(offset, |p| offset - p - 1) + 1;
    (line, column)
}

fn at(text: &str, span: Range<usize>, err: Error) -> Error {
    let (line, column) = line_col(text, span.start);
    let message = match err {
        Error::InvalidSpec(m) | Error::Domain(m) => m,
        other => other.to_string(),
    };
    Error::Parse {
        line,
        column,
        message,
    }
}

/// Parses and validates a spec document. Violations of the type invariants
/// are reported with the line and column of the offending entry.
pub fn parse_spec(text: &str) -> Result<InnerFunctionSpec> {
    let file: SpecFile = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        Error::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;

    let mut spec = InnerFunctionSpec::identity();
    if let Some(u) = &file.unimodular {
        spec = spec
            .with_unimodular((*u.get_ref()).into())
            .map_err(|e| at(text, u.span(), e))?;
    }
    for z in &file.zeros {
        let f = z.get_ref();
        spec = spec
            .with_zero(Complex64::new(f.re, f.im), f.mult)
            .map_err(|e| at(text, z.span(), e))?;
    }
    for a in &file.atoms {
        let f = a.get_ref();
        if !f.angle_radians.is_finite() {
            return Err(at(
                text,
                a.span(),
                Error::InvalidSpec("atom angle is not finite".into()),
            ));
        }
        spec = spec
            .with_atom(Atom::at_angle(f.angle_radians, f.mass))
            .map_err(|e| at(text, a.span(), e))?;
    }
    if let Some(g) = &file.zero_generator {
        let gens = match g.get_ref() {
            OneOrMany::One(one) => vec![one.clone()],
            OneOrMany::Many(many) => many.clone(),
        };
        for field in gens {
            let generator = match field {
                GeneratorField::PhiOrbit { z0, a, count } => ZeroGenerator::PhiOrbit {
                    z0: z0.into(),
                    a,
                    count,
                },
                GeneratorField::ExplicitSequence { points } => ZeroGenerator::ExplicitSequence {
                    points: points.into_iter().map(Into::into).collect(),
                },
            };
            spec = spec
                .with_generator(generator)
                .map_err(|e| at(text, g.span(), e))?;
        }
    }
    if let Some(name) = file.name {
        spec.name = name;
    }
    Ok(spec)
}

impl InnerFunctionSpec {
    /// Serializes back to the file schema. Generated zeros are written as
    /// their generators, not as explicit zeros.
    pub fn to_toml_string(&self) -> String {
        let mut explicit: Vec<ZeroField> = Vec::new();
        for z in &self.zeros {
            // a point shared by a generator may carry extra explicit multiplicity
            let generated = u32::from(z.generator.is_some());
            if z.mult > generated {
                explicit.push(ZeroField {
                    re: z.point.re,
                    im: z.point.im,
                    mult: z.mult - generated,
                });
            }
        }
        let out = SpecFileOut {
            name: self.name.clone(),
            unimodular: self.unimodular.into(),
            zeros: explicit,
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomField {
                    angle_radians: a.xi.arg(),
                    mass: a.mass,
                })
                .collect(),
            zero_generator: self
                .generators
                .iter()
                .map(|g| match &g.generator {
                    ZeroGenerator::PhiOrbit { z0, a, count } => GeneratorField::PhiOrbit {
                        z0: (*z0).into(),
                        a: *a,
                        count: *count,
                    },
                    ZeroGenerator::ExplicitSequence { points } => {
                        GeneratorField::ExplicitSequence {
                            points: points.iter().map(|p| (*p).into()).collect(),
                        }
                    }
                })
                .collect(),
        };
        toml::to_string(&out).expect("spec serializes to TOML")
    }
}
