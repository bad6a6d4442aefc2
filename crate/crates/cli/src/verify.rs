//! Invariant and oracle suites.

use std::f64::consts::{E, PI};
use std::process::ExitCode;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use simplex_volume::complex_gaussian::{phi, PhiAccuracy};
use simplex_volume::contour_quadrature::{ray_integral, HalfPlane, QuadratureConfig, RayIntegralProblem, SECTOR_BOUND};
use simplex_volume::oracles::{abrosimov_regular_d3, direct_klein_volume, lobachevsky_ideal_d3, mc_spherical_volume};
use simplex_volume::quadrature::gauss_kronrod;
use simplex_volume::simplex_geometry::{
    euclidean_volume, kappa_min, realize_vertices, OrthocentricParams, RegularSimplexSpec, SideLength,
};
use simplex_volume::volume_engine::{f_plus, f_value, volume, FMethod, VolumeRequest};
use simplex_volume::Result;

use crate::EXIT_VERIFY;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Phi,
    Rotation,
    IdealValues,
    Abrosimov,
    McSpherical,
    KleinDirect,
    Asymptotic,
    FZero,
    EuclideanLimit,
    All,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
    /// Monte Carlo samples per case.
    #[arg(long, default_value_t = 10_000_000)]
    samples: u64,
}

struct Check {
    name: String,
    measured: f64,
    expected: f64,
    tolerance: f64,
    passed: bool,
}

impl Check {
    /// `|measured - expected| <= tolerance`.
    fn close(name: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        let passed = (measured - expected).abs() <= tolerance;
        Self { name: name.into(), measured, expected, tolerance, passed }
    }

    /// `measured <= bound`, reported as expected 0 within `bound`.
    fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self { name: name.into(), measured, expected: 0.0, tolerance: bound, passed: measured <= bound }
    }

    fn flag(name: impl Into<String>, ok: bool) -> Self {
        let m = if ok { 1.0 } else { 0.0 };
        Self { name: name.into(), measured: m, expected: 1.0, tolerance: 0.0, passed: ok }
    }
}

fn random_taus(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> Result<OrthocentricParams> {
    OrthocentricParams::new((0..=d).map(|_| rng.gen_range(lo..hi)).collect())
}

fn phi_suite(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let acc = PhiAccuracy::default();
    let tol = acc.target_abs_error;
    let (mut refl, mut conj): (f64, f64) = (0.0, 0.0);
    for _ in 0..10_000 {
        let z = Complex64::from_polar(10.0 * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI));
        let a = phi(z, &acc)?;
        let scale = a.norm().max(1.0);
        refl = refl.max((a + phi(-z, &acc)? - 1.0).norm() / scale);
        conj = conj.max((phi(z.conj(), &acc)? - a.conj()).norm() / scale);
    }
    let mut real: f64 = 0.0;
    for _ in 0..2_000 {
        let x: f64 = rng.gen_range(-9.0..9.0);
        let q = gauss_kronrod(|t: f64| (-t * t / 2.0).exp() / (2.0 * PI).sqrt(), 0.0, x, 1e-17, 1e-15, 100);
        real = real.max((phi(Complex64::new(x, 0.0), &acc)?.re - 0.5 - q.value).abs());
    }
    let mut checks = vec![
        Check::at_most("reflection Phi(z) + Phi(-z) = 1", refl, 10.0 * tol),
        Check::at_most("conjugation Phi(conj z) = conj Phi(z)", conj, 10.0 * tol),
        Check::at_most("real axis against quadrature of the density", real, tol),
    ];
    let mut sup: f64 = 0.0;
    for r in [10.0, 20.0, 40.0] {
        let (mut up, mut down): (f64, f64) = (0.0, 0.0);
        for _ in 0..1_000 {
            let z = Complex64::from_polar(r, rng.gen_range(-PI / 4.0..=PI / 4.0));
            up = up.max((phi(z, &acc)? - 1.0).norm());
            down = down.max(phi(-z, &acc)?.norm());
        }
        let cap = 1.5 / ((2.0 * PI).sqrt() * r);
        checks.push(Check::at_most(format!("sector limit Phi -> 1 at |z| = {r}"), up, cap));
        checks.push(Check::at_most(format!("sector limit Phi -> 0 at |z| = {r}"), down, cap));
    }
    for _ in 0..10_000 {
        let z = Complex64::from_polar(rng.gen_range(0.0..40.0), rng.gen_range(-PI / 4.0..=PI / 4.0));
        sup = sup.max(phi(z, &acc)?.norm());
    }
    checks.push(Check::at_most("sup |Phi| on the closed sector", sup, SECTOR_BOUND));
    Ok(checks)
}

fn rotation_suite() -> Result<Vec<Check>> {
    let cfg = QuadratureConfig::default();
    let rays = [
        ("1", Complex64::new(1.0, 0.0), HalfPlane::Upper),
        ("e^{i pi/8}", Complex64::from_polar(1.0, PI / 8.0), HalfPlane::Upper),
        ("1-i", Complex64::new(1.0, -1.0), HalfPlane::Upper),
        ("1+i", Complex64::new(1.0, 1.0), HalfPlane::Lower),
    ];
    let mus: &[f64] = &[0.3, 0.5, 0.7, 0.9];
    let mut checks = Vec::new();
    for z in [0.25, 1.0, 9.0] {
        let zc = Complex64::new(z, 0.0);
        let base = ray_integral(&RayIntegralProblem::new(mus.to_vec(), zc, rays[0].1, rays[0].2)?, &cfg)?.value;
        for (name, w, hp) in &rays[1..] {
            let v = ray_integral(&RayIntegralProblem::new(mus.to_vec(), zc, *w, *hp)?, &cfg)?.value;
            checks.push(Check::at_most(format!("z = {z}: ray {name} against ray 1"), (v - base).norm(), 1e-10));
        }
        let split = f_value(mus, zc, false, FMethod::Split)?.value;
        let ray = f_value(mus, zc, false, FMethod::RayQuadrature)?.value;
        checks.push(Check::at_most(format!("z = {z}: split terms against ray quadrature"), (split - ray).norm(), 1e-10));
    }
    Ok(checks)
}

fn ideal(d: usize) -> Result<f64> {
    Ok(volume(&VolumeRequest::ideal(d, -1.0))?.volume)
}

fn ideal_values_suite() -> Result<Vec<Check>> {
    let v3 = ideal(3)?;
    Ok(vec![
        Check::close("d = 2 equals pi", ideal(2)?, PI, 1e-8),
        Check::close("d = 3 equals 1.01494", v3, 1.01494, 5e-6),
        Check::close("d = 3 equals the Lobachevsky value", v3, lobachevsky_ideal_d3(), 1e-8),
        Check::close("d = 4 equals 0.26889", ideal(4)?, 10.0 * PI / 3.0 * (1.0f64 / 3.0).asin() - PI * PI / 3.0, 1e-8),
    ])
}

fn abrosimov_suite() -> Result<Vec<Check>> {
    [0.25, 0.5, 1.0, 2.0, 4.0]
        .into_iter()
        .map(|ell| {
            let spec = RegularSimplexSpec::new(3, SideLength::Finite(ell), -1.0)?;
            let v = volume(&VolumeRequest::regular(spec))?.volume;
            Ok(Check::close(format!("d = 3, l = {ell}"), v, abrosimov_regular_d3(ell)?, 1e-7))
        })
        .collect()
}

fn mc_suite(rng: &mut ChaCha8Rng, seed: u64, samples: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut within2 = 0;
    for i in 0..20u64 {
        let d = 2 + (i as usize) % 5;
        let p = random_taus(rng, d, 0.5, 1.5)?;
        let kappa = p.s() * rng.gen_range(1.0..3.0);
        let v = volume(&VolumeRequest::orthocentric(p.clone(), kappa))?.volume;
        let mc = mc_spherical_volume(&p, kappa, samples, seed.wrapping_add(i))?;
        within2 += usize::from((v - mc.estimate).abs() <= 2.0 * mc.std_error);
        checks.push(Check::close(format!("case {i}: d = {d}, kappa = {kappa:.4} within 3 se"), v, mc.estimate, 3.0 * mc.std_error));
    }
    checks.push(Check {
        name: "at least 18 of 20 within 2 se".into(),
        measured: within2 as f64,
        expected: 20.0,
        tolerance: 2.0,
        passed: within2 >= 18,
    });
    Ok(checks)
}

fn klein_suite(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    (0..10)
        .map(|i| {
            let d = 2 + i % 2;
            let p = random_taus(rng, d, 0.5, 1.5)?;
            let kappa = kappa_min(&p) * rng.gen_range(0.05..0.95);
            let v = volume(&VolumeRequest::orthocentric(p.clone(), kappa))?.volume;
            let k = direct_klein_volume(&realize_vertices(&p)?, kappa, 1e-8)?;
            Ok(Check::close(format!("case {i}: d = {d}, kappa = {kappa:.4}"), v, k, 1e-4 * k.abs()))
        })
        .collect()
}

fn asymptotic_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut fact: f64 = (1..10).map(|k| k as f64).product();
    let mut prev: Option<f64> = None;
    let mut decreasing = true;
    for d in 10..=20usize {
        fact *= d as f64;
        let r = ideal(d)? * fact / (E * (d as f64).sqrt());
        checks.push(Check::close(format!("d = {d}: Vol d! / (e sqrt d) in [0.5, 1.5]"), r, 1.0, 0.5));
        if let Some(p) = prev {
            decreasing &= (r - 1.0).abs() < (p - 1.0).abs();
        }
        prev = Some(r);
    }
    checks.push(Check::flag("|ratio - 1| strictly decreasing", decreasing));
    Ok(checks)
}

fn f_zero_suite(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    (0..10)
        .map(|i| {
            let d = 2 + i % 5;
            let p = random_taus(rng, d, 0.3, 2.0)?;
            let s = p.s();
            let mus: Vec<f64> = p.taus().iter().map(|t| t / s).collect();
            let f = f_plus(&mus, Complex64::new(-s, 0.0))?;
            Ok(Check::at_most(format!("case {i}: |F+(-s)| for d = {d}"), f.norm(), 1e-9))
        })
        .collect()
}

fn euclidean_suite(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for i in 0..5 {
        let d = 2 + i % 4;
        let p = random_taus(rng, d, 0.5, 1.5)?;
        let ev = euclidean_volume(&realize_vertices(&p)?);
        for k in [1e-4, -1e-4] {
            let v = volume(&VolumeRequest::orthocentric(p.clone(), k))?.volume;
            checks.push(Check::close(format!("case {i}: d = {d}, kappa = {k:e}"), v, ev, 1e-3 * ev));
        }
    }
    Ok(checks)
}

fn run_suite(s: Suite, a: &VerifyArgs) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed ^ (s as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    match s {
        Suite::Phi => phi_suite(&mut rng),
        Suite::Rotation => rotation_suite(),
        Suite::IdealValues => ideal_values_suite(),
        Suite::Abrosimov => abrosimov_suite(),
        Suite::McSpherical => mc_suite(&mut rng, a.seed, a.samples),
        Suite::KleinDirect => klein_suite(&mut rng),
        Suite::Asymptotic => asymptotic_suite(),
        Suite::FZero => f_zero_suite(&mut rng),
        Suite::EuclideanLimit => euclidean_suite(&mut rng),
        Suite::All => unreachable!(),
    }
}

pub fn run(a: VerifyArgs) -> ExitCode {
    let suites: Vec<Suite> = if a.suite == Suite::All {
        Suite::value_variants().iter().copied().filter(|s| *s != Suite::All).collect()
    } else {
        vec![a.suite]
    };
    let mut first_failure: Option<String> = None;
    for s in suites {
        let name = s.to_possible_value().expect("named").get_name().to_string();
        let checks = match run_suite(s, &a) {
            Ok(c) => c,
            Err(e) => {
                println!("FAIL {name}: evaluation error: {e}");
                eprintln!("first failing check: {name} (evaluation error)");
                return ExitCode::from(EXIT_VERIFY);
            }
        };
        for c in &checks {
            println!(
                "{} {name}: {}: measured {:.10e}, expected {:.10e}, tolerance {:.1e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.measured,
                c.expected,
                c.tolerance
            );
            if !c.passed && first_failure.is_none() {
                first_failure = Some(format!("{name}: {}", c.name));
            }
        }
    }
    match first_failure {
        Some(f) => {
            eprintln!("first failing check: {f}");
            ExitCode::from(EXIT_VERIFY)
        }
        None => ExitCode::SUCCESS,
    }
}
