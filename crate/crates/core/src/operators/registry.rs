use std::collections::BTreeMap;

use super::{affine_matrix, cesaro_matrix, sigma_matrix, OperatorMatrix};
use crate::error::{Error, Result};

/// A family of operators selectable by name at runtime.
pub trait OperatorFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn takes_parameter(&self) -> bool;
    fn build(&self, param: Option<f64>, order: usize) -> Result<OperatorMatrix>;
}

struct Affine;
struct Sigma;
struct Cesaro;

fn require(name: &str, param: Option<f64>) -> Result<f64> {
    param.ok_or_else(|| Error::Precondition(format!("operator `{name}` needs a parameter a")))
}

impl OperatorFamily for Affine {
    fn name(&self) -> &'static str {
        "affine"
    }
    fn takes_parameter(&self) -> bool {
        true
    }
    fn build(&self, param: Option<f64>, order: usize) -> Result<OperatorMatrix> {
        affine_matrix(require(self.name(), param)?, order)
    }
}

impl OperatorFamily for Sigma {
    fn name(&self) -> &'static str {
        "sigma"
    }
    fn takes_parameter(&self) -> bool {
        true
    }
    fn build(&self, param: Option<f64>, order: usize) -> Result<OperatorMatrix> {
        sigma_matrix(require(self.name(), param)?, order)
    }
}

impl OperatorFamily for Cesaro {
    fn name(&self) -> &'static str {
        "cesaro"
    }
    fn takes_parameter(&self) -> bool {
        false
    }
    fn build(&self, _param: Option<f64>, order: usize) -> Result<OperatorMatrix> {
        Ok(cesaro_matrix(order))
    }
}

pub struct OperatorRegistry {
    families: BTreeMap<&'static str, Box<dyn OperatorFamily>>,
}

impl OperatorRegistry {
    pub fn empty() -> Self {
        Self {
            families: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, family: Box<dyn OperatorFamily>) {
        self.families.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Result<&dyn OperatorFamily> {
        self.families
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Unsupported(format!("unknown operator family `{name}`")))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.keys().copied().collect()
    }
}

impl Default for OperatorRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Affine));
        r.register(Box::new(Sigma));
        r.register(Box::new(Cesaro));
        r
    }
}
