#![allow(dead_code)]

use hardy_core::inner::{InnerFunctionSpec, ZeroGenerator};
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn atomic(mass: f64) -> InnerFunctionSpec {
    InnerFunctionSpec::atomic(0.0, mass)
        .unwrap()
        .named(format!("atomic-{mass}"))
}

/// Zeros `1 - a^{2n}`, `n = 1..30`, as an explicit sequence.
pub fn example_common(a: f64) -> InnerFunctionSpec {
    let points = (1..=30).map(|n| c(1.0 - a.powi(2 * n), 0.0)).collect();
    InnerFunctionSpec::identity()
        .with_generator(ZeroGenerator::ExplicitSequence { points })
        .unwrap()
        .named("example-common")
}

pub fn orbit(z0: Complex64, a: f64) -> InnerFunctionSpec {
    InnerFunctionSpec::phi_orbit(z0, a, 40).unwrap()
}

pub fn corpus() -> Vec<InnerFunctionSpec> {
    vec![
        InnerFunctionSpec::monomial(1).named("z"),
        InnerFunctionSpec::monomial(3).named("z^3"),
        atomic(1.0),
        atomic(2.0),
        InnerFunctionSpec::atomic(std::f64::consts::PI, 1.0)
            .unwrap()
            .named("atomic-at-minus-one"),
        InnerFunctionSpec::blaschke(&[c(0.5, 0.0)])
            .unwrap()
            .named("single-zero"),
        orbit(c(0.0, 0.0), 0.5).named("orbit-0"),
        orbit(c(0.0, 0.2), 0.5).named("orbit-0.2i"),
        example_common(0.5),
        atomic(1.0)
            .product(&orbit(c(0.0, 0.0), 0.5))
            .unwrap()
            .named("atomic*orbit-0"),
    ]
}
