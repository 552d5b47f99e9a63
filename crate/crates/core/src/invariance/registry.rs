use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{
    compression_trend, multiplicity_for_spec, schur_quotient, InvarianceReport, Tolerances,
};
use crate::error::{Error, Result};
use crate::inner::InnerFunctionSpec;
use crate::operators::{composition_matrix, SymbolMap};
use crate::subspaces::{beurling_basis, model_basis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubspaceKind {
    Beurling,
    Model,
}

impl SubspaceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SubspaceKind::Beurling => "beurling",
            SubspaceKind::Model => "model",
        }
    }
}

pub struct CertifyRequest<'a> {
    pub spec: &'a InnerFunctionSpec,
    pub subspace: SubspaceKind,
    pub symbol: &'a SymbolMap,
    pub order: usize,
    pub tolerances: &'a Tolerances,
}

impl CertifyRequest<'_> {
    fn is_pure_blaschke(&self) -> bool {
        self.spec.atoms().is_empty() && !self.spec.is_zero_free()
    }

    /// `σ_a` for an affine symbol `φ_a`: model spaces invariant under
    /// `C_{φ_a}` are those whose Beurling complement is `C_{σ_a}`-invariant.
    fn dual_symbol(&self) -> std::result::Result<SymbolMap, String> {
        match self.symbol {
            SymbolMap::Affine { a } => SymbolMap::sigma(*a).map_err(|e| e.to_string()),
            _ => Err("the model-space dual route needs an affine symbol".into()),
        }
    }
}

/// A certification route selectable by name.
pub trait CertificationMethod: Send + Sync {
    fn name(&self) -> &'static str;
    /// `Err` carries the reason the method does not apply.
    fn applicable(&self, req: &CertifyRequest) -> std::result::Result<(), String>;
    fn certify(&self, req: &CertifyRequest) -> Result<InvarianceReport>;
}

struct Compression;
struct Schur;
struct Multiplicity;

impl CertificationMethod for Compression {
    fn name(&self) -> &'static str {
        "compression"
    }

    fn applicable(&self, _req: &CertifyRequest) -> std::result::Result<(), String> {
        Ok(())
    }

    fn certify(&self, req: &CertifyRequest) -> Result<InvarianceReport> {
        let op = |n| composition_matrix(req.symbol, n);
        match req.subspace {
            SubspaceKind::Beurling => compression_trend(
                |n| beurling_basis(req.spec, n),
                op,
                req.order,
                req.tolerances,
            ),
            SubspaceKind::Model => {
                compression_trend(|n| model_basis(req.spec, n), op, req.order, req.tolerances)
            }
        }
    }
}

impl CertificationMethod for Schur {
    fn name(&self) -> &'static str {
        "schur"
    }

    fn applicable(&self, req: &CertifyRequest) -> std::result::Result<(), String> {
        if req.symbol.mobius().is_none() {
            return Err("the Schur quotient needs a Möbius symbol".into());
        }
        if req.subspace == SubspaceKind::Model {
            req.dual_symbol()?;
        }
        Ok(())
    }

    fn certify(&self, req: &CertifyRequest) -> Result<InvarianceReport> {
        match req.subspace {
            SubspaceKind::Beurling => {
                schur_quotient(req.spec, req.symbol, req.order, req.tolerances)
            }
            SubspaceKind::Model => {
                let dual = req.dual_symbol().map_err(Error::Unsupported)?;
                let mut rep = schur_quotient(req.spec, &dual, req.order, req.tolerances)?;
                rep.caveats
                    .push(format!("dual route: beurling under {}", dual.label()));
                Ok(rep)
            }
        }
    }
}

impl CertificationMethod for Multiplicity {
    fn name(&self) -> &'static str {
        "multiplicity"
    }

    fn applicable(&self, req: &CertifyRequest) -> std::result::Result<(), String> {
        if !req.is_pure_blaschke() {
            return Err(
                "the multiplicity criterion needs a Blaschke product without singular factor"
                    .into(),
            );
        }
        if req.symbol.mobius().is_none() {
            return Err("the multiplicity criterion needs a closed-form symbol".into());
        }
        if req.subspace == SubspaceKind::Model {
            req.dual_symbol()?;
        }
        Ok(())
    }

    fn certify(&self, req: &CertifyRequest) -> Result<InvarianceReport> {
        match req.subspace {
            SubspaceKind::Beurling => multiplicity_for_spec(req.spec, req.symbol, req.tolerances),
            SubspaceKind::Model => {
                let dual = req.dual_symbol().map_err(Error::Unsupported)?;
                let mut rep = multiplicity_for_spec(req.spec, &dual, req.tolerances)?;
                rep.caveats
                    .push(format!("dual route: beurling under {}", dual.label()));
                Ok(rep)
            }
        }
    }
}

pub struct MethodRegistry {
    methods: BTreeMap<&'static str, Box<dyn CertificationMethod>>,
}

impl MethodRegistry {
    pub fn empty() -> Self {
        Self {
            methods: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, method: Box<dyn CertificationMethod>) {
        self.methods.insert(method.name(), method);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn CertificationMethod> {
        self.methods
            .get(name)
            .map(|m| m.as_ref())
            .ok_or_else(|| Error::Unsupported(format!("unknown certification method `{name}`")))
    }

    /// The method `auto` stands for.
    pub fn auto_method(&self, req: &CertifyRequest) -> &'static str {
        match req.subspace {
            SubspaceKind::Beurling if req.is_pure_blaschke() => "multiplicity",
            SubspaceKind::Beurling => "schur",
            SubspaceKind::Model => "compression",
        }
    }

    /// Runs a named method (or `auto`) and stamps the report.
    pub fn run(&self, name: &str, req: &CertifyRequest) -> Result<InvarianceReport> {
        let resolved = if name == "auto" {
            self.auto_method(req)
        } else {
            name
        };
        let method = self.get(resolved)?;
        method
            .applicable(req)
            .map_err(|why| Error::Unsupported(format!("{resolved}: {why}")))?;
        let start = Instant::now();
        let mut rep = method.certify(req)?;
        rep.wall_time_s = start.elapsed().as_secs_f64();
        rep.spec = req.spec.name.clone();
        rep.subspace = format!("{}({})", req.subspace.as_str(), req.spec.name);
        rep.symbol = req.symbol.label();
        rep.params.a = req.symbol.parameter();
        rep.params.order = Some(req.order);
        Ok(rep)
    }
}

impl Default for MethodRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Compression));
        r.register(Box::new(Schur));
        r.register(Box::new(Multiplicity));
        r
    }
}
