use std::path::{Path, PathBuf};
use std::str::FromStr;

use hardy_core::inner::{parse_spec, spectra_estimate, zero_orbit, InnerFunctionSpec, SpectraConfig};
use hardy_core::invariance::{
    cesaro_correspondence_check, default_t_samples, orbit_span_rank, summary_row, CertifyRequest, Diagnostics,
    InvarianceReport, MethodRegistry, Pairing, SubspaceKind, Tolerances, SUMMARY_HEADER,
};
use hardy_core::operators::{operator_norm, OperatorRegistry, SymbolMap, NORM_ITERATIONS, NORM_TOL};
use hardy_core::series::TaylorSeries;
use hardy_core::subspaces::{beurling_basis, model_basis};
use num_complex::Complex64;
use serde_json::json;

use crate::args::{CertifyArgs, CesaroArgs, MatrixArgs, Merge, OperatorKind, OrbitArgs, SpectraArgs, SubspaceArg, SymbolKind};
use crate::output::{csv_bytes, ensure_dir, slug, write_atomic};
use crate::{Failure, Outcome};

const MAX_ORDER: usize = 2048;
const DEFAULT_ORDER: usize = 256;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn order(n: Option<usize>, default: usize) -> Outcome<usize> {
    let n = n.unwrap_or(default);
    if !(1..=MAX_ORDER).contains(&n) {
        return Err(usage(format!("order must lie in 1..={MAX_ORDER}, got {n}")));
    }
    Ok(n)
}

fn positive(x: Option<f64>, default: f64, name: &str) -> Outcome<f64> {
    let x = x.unwrap_or(default);
    if !(x.is_finite() && x > 0.0) {
        return Err(usage(format!("{name} must be a positive number, got {x}")));
    }
    Ok(x)
}

fn out_dir(p: Option<PathBuf>) -> Outcome<PathBuf> {
    let dir = p.unwrap_or_else(|| PathBuf::from("hardy-out"));
    ensure_dir(&dir)?;
    Ok(dir)
}

fn complex(s: &str) -> Outcome<Complex64> {
    Complex64::from_str(s.trim()).map_err(|_| usage(format!("cannot read `{s}` as a complex number")))
}

/// Reads a spec file; a file without `name` is named after its stem.
fn load_spec(path: &Path) -> Outcome<InnerFunctionSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read spec {}: {e}", path.display())))?;
    let mut spec = parse_spec(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let named = text.parse::<toml::Table>().is_ok_and(|t| t.contains_key("name"));
    if !named {
        spec.name = path.file_stem().map_or("spec".into(), |s| s.to_string_lossy().into_owned());
    }
    Ok(spec)
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn matrix(args: MatrixArgs) -> Outcome<()> {
    let args = args.resolve()?;
    let kind = args.kind.ok_or_else(|| usage("--kind is required (affine, sigma or cesaro)"))?;
    let n = order(args.order, DEFAULT_ORDER)?;
    let iterations = args.iterations.unwrap_or(NORM_ITERATIONS);
    if iterations == 0 {
        return Err(usage("--iterations must be at least 1"));
    }
    let norm_tol = positive(args.norm_tol, NORM_TOL, "--norm-tol")?;
    let name = match kind {
        OperatorKind::Affine => "affine",
        OperatorKind::Sigma => "sigma",
        OperatorKind::Cesaro => "cesaro",
    };
    let registry = OperatorRegistry::default();
    let family = registry.get(name)?;
    if family.takes_parameter() && args.a.is_none() {
        return Err(usage(format!("--a is required for {name} (a must lie in (0,1))")));
    }
    if !family.takes_parameter() && args.a.is_some() {
        return Err(usage(format!("{name} takes no parameter --a")));
    }
    let m = family.build(args.a, n)?;
    let dir = out_dir(args.out)?;
    let stem = match args.a {
        Some(a) => format!("{name}-a{a}-N{n}"),
        None => format!("{name}-N{n}"),
    };
    let mut body = Vec::new();
    m.write_csv(&mut body)?;
    let csv_path = write_atomic(&dir, &format!("matrix-{stem}.csv"), &body)?;
    let norm = operator_norm(&m, iterations, norm_tol)?;
    let ceiling = match kind {
        OperatorKind::Affine => args.a.map(|a| ((2.0 - a) / a).sqrt()),
        _ => None,
    };
    let summary = json!({
        "operator": m.provenance,
        "order": n,
        "norm": norm.value,
        "converged": norm.converged,
        "iterations": norm.iterations,
        "littlewood_ceiling": ceiling,
    });
    let norm_path = write_atomic(&dir, &format!("norm-{stem}.json"), serde_json::to_string_pretty(&summary).unwrap().as_bytes())?;
    println!("{}: norm {} ({})", m.provenance, norm.value, if norm.converged { "converged" } else { "not converged" });
    println!("wrote {} and {}", csv_path.display(), norm_path.display());
    Ok(())
}

pub fn certify(args: CertifyArgs) -> Outcome<()> {
    let args = args.resolve()?;
    let specs = args.spec.clone().filter(|s| !s.is_empty()).ok_or_else(|| usage("--spec is required"))?;
    let a_values = args.a.clone().filter(|a| !a.is_empty()).ok_or_else(|| usage("--a is required"))?;
    let methods = args.method.clone().unwrap_or_else(|| vec![crate::args::MethodArg::Auto]);
    let n = order(args.order, DEFAULT_ORDER)?;
    let defaults = Tolerances::default();
    let tol = Tolerances {
        tol_inv: positive(args.tol_inv, defaults.tol_inv, "--tol-inv")?,
        tol_sup: positive(args.tol_sup, defaults.tol_sup, "--tol-sup")?,
        eps_match: positive(args.eps_match, defaults.eps_match, "--eps-match")?,
        radius: args.radius.unwrap_or(defaults.radius),
        grid: args.grid.unwrap_or(defaults.grid),
        ..defaults
    };
    if !(tol.radius > 0.0 && tol.radius < 1.0) {
        return Err(usage(format!("--radius must lie in (0,1), got {}", tol.radius)));
    }
    if tol.grid == 0 {
        return Err(usage("--grid must be at least 1"));
    }
    let subspace = match args.subspace.unwrap_or(SubspaceArg::Beurling) {
        SubspaceArg::Beurling => SubspaceKind::Beurling,
        SubspaceArg::Model => SubspaceKind::Model,
    };
    let symbol_kind = args.symbol.unwrap_or(SymbolKind::Affine);
    let loaded: Vec<(PathBuf, InnerFunctionSpec)> =
        specs.iter().map(|p| load_spec(p).map(|s| (p.clone(), s))).collect::<Outcome<_>>()?;
    let symbols: Vec<SymbolMap> = a_values
        .iter()
        .map(|&a| match symbol_kind {
            SymbolKind::Affine => SymbolMap::affine(a),
            SymbolKind::Sigma => SymbolMap::sigma(a),
        })
        .collect::<Result<_, _>>()?;
    let dir = out_dir(args.out)?;
    let registry = MethodRegistry::default();
    let mut reports: Vec<InvarianceReport> = Vec::new();
    for (path, spec) in &loaded {
        let stem = slug(&spec.name);
        if args.export_basis {
            let basis = match subspace {
                SubspaceKind::Beurling => beurling_basis(spec, n)?,
                SubspaceKind::Model => model_basis(spec, n)?,
            };
            let mut body = Vec::new();
            basis.write_csv(&mut body)?;
            let base = format!("basis-{}-{stem}-N{n}", subspace.as_str());
            write_atomic(&dir, &format!("{base}.csv"), &body)?;
            write_atomic(&dir, &format!("{base}.txt"), basis.sidecar().as_bytes())?;
        }
        for symbol in &symbols {
            for method in &methods {
                let req = CertifyRequest { spec, subspace, symbol, order: n, tolerances: &tol };
                let rep = registry
                    .run(method.name(), &req)
                    .map_err(Failure::from)
                    .map_err(|f| match f {
                        Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
                        other => other,
                    })?;
                let name = format!(
                    "report-{stem}-{}-{}-{}.json",
                    subspace.as_str(),
                    slug(&symbol.label()),
                    method.name()
                );
                write_atomic(&dir, &name, rep.to_json().as_bytes())?;
                println!(
                    "{} {} {} [{}]: {}{}",
                    rep.subspace,
                    rep.symbol,
                    rep.method.as_str(),
                    method.name(),
                    rep.verdict.as_str(),
                    if rep.caveats.is_empty() { String::new() } else { format!(" ({})", rep.caveats.join("; ")) }
                );
                reports.push(rep);
            }
        }
    }
    let body = csv_bytes(&SUMMARY_HEADER, reports.iter().map(summary_row))?;
    let path = write_atomic(&dir, "summary.csv", &body)?;
    println!("wrote {} reports and {}", reports.len(), path.display());
    Ok(())
}

pub fn spectra(args: SpectraArgs) -> Outcome<()> {
    let args = args.resolve()?;
    let path = args.spec.clone().ok_or_else(|| usage("--spec is required"))?;
    let spec = load_spec(&path)?;
    let defaults = SpectraConfig::default();
    let config = SpectraConfig {
        grid: args.grid.unwrap_or(defaults.grid),
        radii: args.radii.clone().unwrap_or(defaults.radii),
        tol: positive(args.tol, defaults.tol, "--tol")?,
    };
    let rep = spectra_estimate(&spec, &config)?;
    let dir = out_dir(args.out)?;
    let stem = slug(&spec.name);
    let rows = rep.samples.iter().map(|s| {
        [num(s.theta), num(s.min_modulus), (s.min_modulus < rep.tol).to_string()]
    });
    let csv_path = write_atomic(&dir, &format!("spectra-{stem}.csv"), &csv_bytes(&["theta", "min_modulus", "flagged"], rows)?)?;
    let arcs = rep.arcs();
    let summary = json!({
        "spec": spec.name,
        "tol": rep.tol,
        "grid": rep.grid,
        "boundary_radii": rep.boundary_radii,
        "boundary_hits": rep.boundary_hits.len(),
        "arcs": arcs,
        "interior_zeros": rep.interior_zeros,
    });
    write_atomic(&dir, &format!("arcs-{stem}.json"), serde_json::to_string_pretty(&summary).unwrap().as_bytes())?;
    if arcs.is_empty() {
        println!("{}: no flagged arcs at tol {}", spec.name, rep.tol);
    }
    for a in &arcs {
        println!(
            "{}: arc [{}, {}] ({} angles, min {}){}",
            spec.name,
            a.start,
            a.end,
            a.points,
            a.min_modulus,
            if a.contains_zero_angle { ", contains θ = 0" } else { "" }
        );
    }
    println!("wrote {}", csv_path.display());
    Ok(())
}

fn residual_rows(label: &str, side: &str, t: Option<f64>, r: &InvarianceReport, order: usize) -> Vec<[String; 7]> {
    let row = |n: usize, v: Option<f64>| {
        [label.to_string(), side.to_string(), opt_num(t), r.method.as_str().to_string(), n.to_string(), opt_num(v), r.verdict.as_str().to_string()]
    };
    match &r.diagnostics {
        Diagnostics::Compression { residuals } => residuals.iter().map(|p| row(p.order, Some(p.residual))).collect(),
        _ => vec![row(order, r.residual)],
    }
}

fn pairing_rows(label: &str, p: &Pairing, order: usize) -> Vec<[String; 7]> {
    let mut rows = residual_rows(label, "cesaro", None, &p.cesaro_side, order);
    for s in &p.semigroup_side {
        rows.extend(residual_rows(label, "semigroup", Some(s.t), &s.report, order));
    }
    rows
}

pub fn cesaro(args: CesaroArgs) -> Outcome<()> {
    let args = args.resolve()?;
    let path = args.spec.clone().ok_or_else(|| usage("--spec is required"))?;
    let spec = load_spec(&path)?;
    let n = order(args.order, DEFAULT_ORDER)?;
    let t = args.t.clone().unwrap_or_else(default_t_samples);
    let defaults = Tolerances::default();
    let tol = Tolerances { tol_inv: positive(args.tol_inv, defaults.tol_inv, "--tol-inv")?, ..defaults };
    let rep = cesaro_correspondence_check(&spec, &t, n, &tol)?;
    let dir = out_dir(args.out)?;
    let stem = slug(&spec.name);
    write_atomic(&dir, &format!("cesaro-{stem}.json"), serde_json::to_string_pretty(&rep).unwrap().as_bytes())?;
    let mut rows = pairing_rows("primary", &rep.primary, n);
    rows.extend(pairing_rows("dual", &rep.dual, n));
    let header = ["pairing", "side", "t", "method", "order", "residual", "verdict"];
    let csv_path = write_atomic(&dir, &format!("cesaro-{stem}-residuals.csv"), &csv_bytes(&header, rows)?)?;
    for (label, p) in [("primary", &rep.primary), ("dual", &rep.dual)] {
        let semi: Vec<&str> = p.semigroup_side.iter().map(|s| s.report.verdict.as_str()).collect();
        println!(
            "{label}: {} under cesaro {}; complement under semigroup [{}]; {}",
            p.cesaro_subspace.as_str(),
            p.cesaro_side.verdict.as_str(),
            semi.join(", "),
            serde_json::to_value(p.consistency).unwrap().as_str().unwrap_or_default()
        );
    }
    println!("wrote {}", csv_path.display());
    Ok(())
}

pub fn orbit(args: OrbitArgs) -> Outcome<()> {
    let args = args.resolve()?;
    let a = args.a.ok_or_else(|| usage("--a is required"))?;
    let n = order(args.order, 128)?;
    let iterations = args.iterations.unwrap_or(8);
    if iterations == 0 {
        return Err(usage("--iterations must be at least 1"));
    }
    let rank_tol = positive(args.rank_tol, 1e-10, "--rank-tol")?;
    let f = match (&args.kernel, &args.coeffs) {
        (Some(_), Some(_)) => return Err(usage("give either --kernel or --coeffs, not both")),
        (Some(k), None) => TaylorSeries::kernel(complex(k)?, n)?,
        (None, Some(cs)) => {
            if cs.len() > n + 1 {
                return Err(usage(format!("{} coefficients do not fit order {n}", cs.len())));
            }
            let v = cs.iter().map(|s| complex(s)).collect::<Outcome<Vec<_>>>()?;
            TaylorSeries::new(v)?.with_order(n)
        }
        (None, None) => return Err(usage("one of --kernel or --coeffs is required")),
    };
    let ranks = orbit_span_rank(&f, a, iterations, n, rank_tol)?;
    let z0 = complex(args.z0.as_deref().unwrap_or("0"))?;
    let count = args.count.unwrap_or(20);
    if count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let points = zero_orbit(z0, a, count)?;
    let dir = out_dir(args.out)?;
    let rank_rows = ranks.iter().enumerate().map(|(k, r)| [(k + 1).to_string(), r.to_string()]);
    let rank_path = write_atomic(&dir, "orbit-ranks.csv", &csv_bytes(&["k", "rank"], rank_rows)?)?;
    let zero_rows = points.iter().enumerate().map(|(i, p)| [i.to_string(), num(p.re), num(p.im)]);
    let zero_path = write_atomic(&dir, "zero-orbit.csv", &csv_bytes(&["n", "re", "im"], zero_rows)?)?;
    println!("ranks: {ranks:?}");
    println!("wrote {} and {}", rank_path.display(), zero_path.display());
    Ok(())
}
