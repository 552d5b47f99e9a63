//! Command-line flags. Every subcommand also takes `--config FILE`, a TOML
//! table whose keys are the flag names with underscores; flags given on the
//! command line win over the file and unknown keys are rejected.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::{Failure, Outcome};

#[derive(Debug, Parser)]
#[command(name = "hardy", version, about = "Invariant subspaces of composition and Cesàro operators on H²")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an operator matrix as CSV together with a norm summary.
    Matrix(MatrixArgs),
    /// Certify invariance of Beurling or model subspaces.
    Certify(CertifyArgs),
    /// Boundary spectrum probe of an inner function.
    Spectra(SpectraArgs),
    /// Cesàro operator versus the affine semigroup.
    Cesaro(CesaroArgs),
    /// Orbit ranks of a function under an affine composition operator, and zero orbits.
    Orbit(OrbitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Affine,
    Sigma,
    Cesaro,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Affine,
    Sigma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubspaceArg {
    Beurling,
    Model,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Auto,
    Compression,
    Schur,
    Multiplicity,
}

impl MethodArg {
    pub fn name(self) -> &'static str {
        match self {
            MethodArg::Auto => "auto",
            MethodArg::Compression => "compression",
            MethodArg::Schur => "schur",
            MethodArg::Multiplicity => "multiplicity",
        }
    }
}

/// Fills unset fields from a config file.
pub trait Merge: Sized + DeserializeOwned {
    fn config(&self) -> Option<&Path>;
    fn merge(self, file: Self) -> Self;

    fn resolve(self) -> Outcome<Self> {
        let Some(path) = self.config().map(Path::to_path_buf) else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let file: Self =
            toml::from_str(&text).map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))?;
        Ok(self.merge(file))
    }
}

macro_rules! merge_fields {
    ($ty:ty; $($field:ident),*; $($flag:ident),*) => {
        impl Merge for $ty {
            fn config(&self) -> Option<&Path> {
                self.config.as_deref()
            }
            fn merge(self, file: Self) -> Self {
                Self {
                    config: self.config,
                    $($field: self.$field.or(file.$field),)*
                    $($flag: self.$flag || file.$flag,)*
                }
            }
        }
    };
}

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct MatrixArgs {
    /// TOML file with default values for these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<OperatorKind>,
    /// Symbol parameter in (0,1); required for affine and sigma.
    #[arg(long)]
    pub a: Option<f64>,
    /// Truncation order N (matrix is (N+1)×(N+1)). Default 256.
    #[arg(long)]
    pub order: Option<usize>,
    /// Power iterations for the norm estimate. Default 500.
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Convergence tolerance of the norm estimate. Default 1e-10.
    #[arg(long)]
    pub norm_tol: Option<f64>,
    /// Output directory. Default `hardy-out`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
merge_fields!(MatrixArgs; kind, a, order, iterations, norm_tol, out;);

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct CertifyArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Inner function spec files (TOML). Repeatable.
    #[arg(long, num_args = 1..)]
    pub spec: Option<Vec<PathBuf>>,
    /// Default beurling.
    #[arg(long, value_enum)]
    pub subspace: Option<SubspaceArg>,
    /// Symbol family. Default affine.
    #[arg(long, value_enum)]
    pub symbol: Option<SymbolKind>,
    /// Symbol parameters in (0,1). Repeatable.
    #[arg(long, num_args = 1..)]
    pub a: Option<Vec<f64>>,
    /// Certification methods. Default auto.
    #[arg(long, value_enum, num_args = 1..)]
    pub method: Option<Vec<MethodArg>>,
    /// Truncation order N. Default 256.
    #[arg(long)]
    pub order: Option<usize>,
    /// Boundary radius for the Schur test. Default 0.999.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Angular grid size for the Schur test. Default 4096.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Residual threshold for the compression test. Default 1e-8.
    #[arg(long)]
    pub tol_inv: Option<f64>,
    /// Slack on the Schur supremum. Default 1e-6.
    #[arg(long)]
    pub tol_sup: Option<f64>,
    /// Distance at which two zeros are matched. Default 1e-10.
    #[arg(long)]
    pub eps_match: Option<f64>,
    /// Also write the subspace basis as CSV with a sidecar header.
    #[arg(long)]
    pub export_basis: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
merge_fields!(CertifyArgs; spec, subspace, symbol, a, method, order, radius, grid, tol_inv, tol_sup, eps_match, out; export_basis);

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct SpectraArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Inner function spec file (TOML).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Number of grid angles (at least 256). Default 1024.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Flagging threshold for the boundary minimum. Default 0.1.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Increasing radii in (0,1). Default 1 - 2^-k, k = 1..20.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
merge_fields!(SpectraArgs; spec, grid, tol, radii, out;);

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct CesaroArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Inner function spec file (TOML).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Semigroup times t > 0. Default ln 2, 1, 3.
    #[arg(long, num_args = 1..)]
    pub t: Option<Vec<f64>>,
    /// Truncation order N. Default 256.
    #[arg(long)]
    pub order: Option<usize>,
    /// Residual threshold. Default 1e-8.
    #[arg(long)]
    pub tol_inv: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
merge_fields!(CesaroArgs; spec, t, order, tol_inv, out;);

#[derive(Debug, Args, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OrbitArgs {
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Start from the reproducing kernel at this point, e.g. `0.5` or `0.1+0.2i`.
    #[arg(long, conflicts_with = "coeffs")]
    pub kernel: Option<String>,
    /// Start from these Taylor coefficients, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub coeffs: Option<Vec<String>>,
    /// Affine parameter in (0,1).
    #[arg(long)]
    pub a: Option<f64>,
    /// Number of iterates m. Default 8.
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Truncation order N. Default 128.
    #[arg(long)]
    pub order: Option<usize>,
    /// Relative rank threshold. Default 1e-10.
    #[arg(long)]
    pub rank_tol: Option<f64>,
    /// Seed of the zero orbit listing. Default 0.
    #[arg(long)]
    pub z0: Option<String>,
    /// Length of the zero orbit listing. Default 20.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
merge_fields!(OrbitArgs; kernel, coeffs, a, iterations, order, rank_tol, z0, count, out;);
