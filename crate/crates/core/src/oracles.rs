//! Reference computations that do not go through the contour formula.
//!
//! * Monte Carlo for spherical volumes with `kappa >= s`: the volume is
//!   `omega_{d+1} kappa^{-d/2} P[N in cone]`, and cone membership is decided
//!   by the dual inequalities `xi_j / tau_j - sqrt((kappa - s)/s^2) xi <= 0`.
//! * Direct integration of the Klein-model density over the Euclidean simplex.
//! * The Lobachevsky integral for the ideal regular tetrahedron.
//! * The one-dimensional integral for the regular tetrahedron with side `l`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::gauss_kronrod;
use crate::simplex_geometry::{OrthocentricParams, VertexRealization};

/// Samples drawn per independent stream.
const CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloReport {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Surface area of the unit sphere in `R^n`, computed independently of the engine.
fn unit_sphere_area(n: usize) -> f64 {
    // 2 pi^{n/2} / Gamma(n/2) with Gamma at integers and half integers.
    let pi = std::f64::consts::PI;
    let half = n as f64 / 2.0;
    let gamma = if n.is_multiple_of(2) {
        (1..n / 2).map(|k| k as f64).product::<f64>()
    } else {
        let mut g = pi.sqrt();
        let mut a = 0.5;
        while a < half {
            g *= a;
            a += 1.0;
        }
        g
    };
    2.0 * pi.powf(half) / gamma
}

/// Monte Carlo estimate of the spherical volume for `kappa >= s`.
///
/// Chunk `i` of `2^16` samples is drawn from ChaCha8 seeded with `seed` on
/// stream `i`, so the report depends only on `(p, kappa, samples, seed)`.
pub fn mc_spherical_volume(p: &OrthocentricParams, kappa: f64, samples: u64, seed: u64) -> Result<MonteCarloReport> {
    let s = p.s();
    if !(kappa >= s) || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "the Gaussian cone representation needs kappa >= s = {s}, got {kappa}"
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("at least two samples are needed".into()));
    }
    let inv_tau: Vec<f64> = p.taus().iter().map(|t| 1.0 / t).collect();
    let a = ((kappa - s) / (s * s)).sqrt();
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let n = CHUNK.min(samples - i * CHUNK);
            let mut count = 0u64;
            for _ in 0..n {
                let xi: f64 = StandardNormal.sample(&mut rng);
                let shift = a * xi;
                let mut inside = true;
                // All d + 1 coordinates are drawn even after a failure so the
                // stream position does not depend on the outcome.
                for w in &inv_tau {
                    let x: f64 = StandardNormal.sample(&mut rng);
                    inside &= x * w - shift <= 0.0;
                }
                count += u64::from(inside);
            }
            count
        })
        .sum();
    let d = p.dim();
    let scale = unit_sphere_area(d + 1) * kappa.powf(-(d as f64) / 2.0);
    let n = samples as f64;
    let hits = hits as f64;
    let prob = hits / n;
    let var = (hits * (n - hits)) / (n * (n - 1.0));
    Ok(MonteCarloReport { estimate: scale * prob, std_error: scale * (var / n).sqrt(), samples, seed })
}

fn gk_real(f: impl FnMut(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let r = gauss_kronrod(f, a, b, 0.0, rel_tol, 4000);
    if !r.converged {
        return Err(Error::ToleranceNotMet { best_re: r.value, best_im: 0.0, estimate: r.abs_error, requested: rel_tol });
    }
    Ok(r.value)
}

/// `int_Q (1 + kappa |y|^2)^{-(d+1)/2} dy` over the Euclidean simplex `Q`.
///
/// The simplex is collapsed onto the unit cube with a Duffy map centred at the
/// vertex of largest norm, where the density varies fastest, and the cube
/// integral is done by nested adaptive Gauss-Kronrod.
pub fn direct_klein_volume(v: &VertexRealization, kappa: f64, rel_tol: f64) -> Result<f64> {
    let d = v.dim();
    if d > 3 {
        return Err(Error::CostLimit(format!("direct Klein integration in dimension {d} (supported: 2, 3)")));
    }
    if d < 2 {
        return Err(Error::InvalidParameter("dimension must be at least 2".into()));
    }
    let max_norm = v.vertices().iter().map(|x| x.iter().map(|c| c * c).sum::<f64>()).fold(0.0, f64::max);
    let k0 = -1.0 / max_norm;
    if !(kappa > k0) {
        return Err(Error::CurvatureBelowBound { kappa, kappa_min: k0 });
    }
    if kappa - k0 < 1e-3 * k0.abs() {
        log::warn!("kappa = {kappa} is within 1e-3 |kappa_0| of the bound {k0}; the density is nearly singular");
    }
    let mut verts: Vec<Vec<f64>> = v.vertices().to_vec();
    let apex = (0..verts.len())
        .max_by(|&a, &b| {
            let na: f64 = verts[a].iter().map(|c| c * c).sum();
            let nb: f64 = verts[b].iter().map(|c| c * c).sum();
            na.total_cmp(&nb)
        })
        .unwrap_or(0);
    verts.swap(0, apex);
    let v0 = verts[0].clone();
    let e: Vec<Vec<f64>> = verts[1..].iter().map(|p| p.iter().zip(&v0).map(|(a, b)| a - b).collect()).collect();
    let det = {
        let m = nalgebra::DMatrix::from_fn(d, d, |i, j| e[j][i]);
        m.determinant().abs()
    };
    let power = -((d + 1) as f64) / 2.0;
    let density = |y: &[f64]| -> f64 {
        let r2: f64 = y.iter().map(|c| c * c).sum();
        (1.0 + kappa * r2).powf(power)
    };
    let tol = rel_tol * 0.1;
    let value = if d == 2 {
        gk_real(
            |u| {
                let inner = gk_real(
                    |w| {
                        let y: Vec<f64> =
                            (0..2).map(|i| v0[i] + u * ((1.0 - w) * e[0][i] + w * e[1][i])).collect();
                        density(&y)
                    },
                    0.0,
                    1.0,
                    tol,
                )
                .unwrap_or(f64::NAN);
                u * inner
            },
            0.0,
            1.0,
            rel_tol,
        )?
    } else {
        gk_real(
            |u| {
                let mid = gk_real(
                    |w| {
                        let inner = gk_real(
                            |t| {
                                let y: Vec<f64> = (0..3)
                                    .map(|i| {
                                        v0[i]
                                            + u * ((1.0 - w) * e[0][i]
                                                + w * ((1.0 - t) * e[1][i] + t * e[2][i]))
                                    })
                                    .collect();
                                density(&y)
                            },
                            0.0,
                            1.0,
                            tol * 0.1,
                        )
                        .unwrap_or(f64::NAN);
                        w * inner
                    },
                    0.0,
                    1.0,
                    tol,
                )
                .unwrap_or(f64::NAN);
                u * u * mid
            },
            0.0,
            1.0,
            rel_tol,
        )?
    };
    if !value.is_finite() {
        return Err(Error::ToleranceNotMet { best_re: value, best_im: 0.0, estimate: f64::INFINITY, requested: rel_tol });
    }
    Ok(value * det)
}

/// `-3 int_0^{pi/3} log(2 sin theta) d theta`, the volume of the ideal regular tetrahedron.
pub fn lobachevsky_ideal_d3() -> f64 {
    lobachevsky_with_tolerance(1e-15)
}

fn lobachevsky_with_tolerance(rel: f64) -> f64 {
    let eps: f64 = 1e-3;
    // On [0, eps]: log(2 sin t) = log(2t) + log(sin t / t); the first part integrates to eps (log(2 eps) - 1).
    let singular = eps * ((2.0 * eps).ln() - 1.0);
    let smooth = gauss_kronrod(|t: f64| (t.sin() / t).ln(), 0.0, eps, 1e-18, rel, 200).value;
    let rest = gauss_kronrod(|t: f64| (2.0 * t.sin()).ln(), eps, std::f64::consts::FRAC_PI_3, 1e-16, rel, 200).value;
    -3.0 * (singular + smooth + rest)
}

/// `int_0^l 3a sinh a / ((1 + 2 cosh a) sqrt((1 + cosh a)(1 + 3 cosh a))) da`, the
/// volume of the regular tetrahedron with side length `l` at curvature `-1`.
pub fn abrosimov_regular_d3(ell: f64) -> Result<f64> {
    if !(ell >= 0.0 && ell.is_finite()) {
        return Err(Error::InvalidParameter(format!("side length must be finite and nonnegative, got {ell}")));
    }
    let integrand = |a: f64| {
        let c = a.cosh();
        3.0 * a * a.sinh() / ((1.0 + 2.0 * c) * ((1.0 + c) * (1.0 + 3.0 * c)).sqrt())
    };
    let r = gauss_kronrod(integrand, 0.0, ell, 1e-14, 1e-14, 2000);
    if !r.converged {
        return Err(Error::ToleranceNotMet { best_re: r.value, best_im: 0.0, estimate: r.abs_error, requested: 1e-14 });
    }
    Ok(r.value)
}
