//! The standard normal CDF continued to the complex plane.
//!
//! Everything is built on the scaled tail
//!
//! ```text
//! G(z) = exp(z^2/2) * Phi(-z) = erfcx(z/sqrt(2)) / 2
//! ```
//!
//! which is bounded by `1/2 + O(1/|z|)` in the closed right half plane. `Phi`
//! follows from `Phi(z) = 1 - exp(-z^2/2) G(z)` for `Re z >= 0` and
//! `Phi(z) = exp(-z^2/2) G(-z)` otherwise, so the reflection identity is built
//! in. Values with `Im z < 0` are obtained by conjugation, which makes
//! `Phi(conj z) = conj Phi(z)` exact.
//!
//! `G` itself switches between three evaluations of `erfcx(u)`, `u = z/sqrt 2`:
//! the Maclaurin series of `erf` near the origin and near the imaginary axis,
//! Laplace's continued fraction in the right half plane, and the asymptotic
//! series for large `|u|`. Accuracy is relative to `|Phi(z)|`, which matters in
//! the growth sectors `pi/4 < |arg z| < 3pi/4` where `Phi` is exponentially
//! large.

use num_complex::{Complex, Complex64};

use crate::error::{Error, Result};
use crate::real::{cexp, cnorm, CompensatedSum, Real};

/// Largest `-Re(z^2)/2` for which `exp(-z^2/2)` is representable.
const MAX_EXPONENT: f64 = 708.0;

/// Accuracy control for [`phi`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiAccuracy {
    /// Target error relative to `max(1, |Phi(z)|)`.
    pub target_abs_error: f64,
    /// `|z|` beyond which the asymptotic series is used.
    pub series_asymptotic_switch_radius: f64,
}

impl PhiAccuracy {
    pub fn new(target_abs_error: f64) -> Result<Self> {
        if !(1e-16..=1e-6).contains(&target_abs_error) {
            return Err(Error::InvalidParameter(format!(
                "target accuracy must lie in [1e-16, 1e-6], got {target_abs_error}"
            )));
        }
        Ok(Self { target_abs_error, series_asymptotic_switch_radius: asymptotic_radius(target_abs_error) })
    }
}

impl Default for PhiAccuracy {
    fn default() -> Self {
        let t = 1e-12;
        Self { target_abs_error: t, series_asymptotic_switch_radius: asymptotic_radius(t) }
    }
}

/// Radius in `z` where the optimally truncated asymptotic series of `G`
/// reaches relative error `tol`. The truncation error is about `exp(-|z|^2/2)`.
pub fn asymptotic_radius(tol: f64) -> f64 {
    let tol = tol.max(f64::EPSILON / 2.0);
    std::f64::consts::SQRT_2 * asym_u2(tol).sqrt()
}

fn asym_u2(tol: f64) -> f64 {
    -tol.ln() + 2.0
}

/// Which closed-form asymptotic expansion [`phi_tail_branch`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailBranch {
    /// `Phi = 1 - exp(-z^2/2)/(sqrt(2 pi) z) * S(z)`, valid for `|arg z| < 3pi/4`.
    UnitLimit,
    /// `Phi = -exp(-z^2/2)/(sqrt(2 pi) z) * S(z)`, valid for `|arg z| > pi/4`.
    ZeroLimit,
}

/// Standard normal density continued to complex arguments.
pub fn phi_density(z: Complex64) -> Complex64 {
    (-z * z / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `Phi(z) = 1/2 + erf(z/sqrt 2)/2`.
pub fn phi(z: Complex64, acc: &PhiAccuracy) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite argument {z}")));
    }
    if z.im < 0.0 {
        return phi(z.conj(), acc).map(|v| v.conj());
    }
    check_exponent(z)?;
    let r = z.norm();
    let u = z * std::f64::consts::FRAC_1_SQRT_2;
    if r < acc.series_asymptotic_switch_radius && maclaurin_regime(u.norm_sqr(), u.re) {
        return Ok(Complex64::new(0.5, 0.0) + erf_series(u) * 0.5);
    }
    let a2 = if r >= acc.series_asymptotic_switch_radius { 0.0 } else { f64::INFINITY };
    let e = (-z * z / 2.0).exp();
    if z.re >= 0.0 {
        Ok(Complex64::new(1.0, 0.0) - e * g_right(u, a2))
    } else {
        Ok(e * g_right(-u, a2))
    }
}

/// `Phi` on the real line.
pub fn phi_real(x: f64) -> f64 {
    let u = x * std::f64::consts::FRAC_1_SQRT_2;
    if u.abs() <= 1.5 {
        return 0.5 + 0.5 * erf_series(Complex::new(u, 0.0)).re;
    }
    let g = g_right(Complex::new(u.abs(), 0.0), asym_u2(f64::EPSILON / 2.0)).re;
    let tail = (-x * x / 2.0).exp() * g;
    if x > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Asymptotic expansion of `Phi`, choosing the branch by the sign of `Re z`.
pub fn phi_tail(z: Complex64, acc: &PhiAccuracy) -> Result<Complex64> {
    let branch = if z.re >= 0.0 { TailBranch::UnitLimit } else { TailBranch::ZeroLimit };
    phi_tail_branch(z, branch, acc)
}

pub fn phi_tail_branch(z: Complex64, branch: TailBranch, acc: &PhiAccuracy) -> Result<Complex64> {
    let r = z.norm();
    if r < acc.series_asymptotic_switch_radius {
        return Err(Error::BelowSwitchRadius { modulus: r, radius: acc.series_asymptotic_switch_radius });
    }
    let arg = z.arg().abs();
    let q = std::f64::consts::FRAC_PI_4;
    let ok = match branch {
        TailBranch::UnitLimit => arg < 3.0 * q,
        TailBranch::ZeroLimit => arg > q,
    };
    if !ok {
        return Err(Error::SectorMismatch { branch, arg: z.arg() });
    }
    check_exponent(z)?;
    let s = asymptotic_sum(z * z, f64::EPSILON / 2.0);
    let lead = (-z * z / 2.0).exp() / ((2.0 * std::f64::consts::PI).sqrt() * z) * s;
    Ok(match branch {
        TailBranch::UnitLimit => Complex64::new(1.0, 0.0) - lead,
        TailBranch::ZeroLimit => -lead,
    })
}

fn check_exponent(z: Complex64) -> Result<()> {
    if -(z * z).re / 2.0 > MAX_EXPONENT {
        return Err(Error::OutsideSupportedRegion { re: z.re, im: z.im });
    }
    Ok(())
}

/// The scaled tail `G(z) = exp(z^2/2) Phi(-z)` at the working precision of `T`.
///
/// Bounded in the closed right half plane; for `Re z < 0` it is computed from
/// `G(z) = exp(z^2/2) - G(-z)` and grows like `exp(Re(z^2)/2)`.
pub fn scaled_tail<T: Real>(z: Complex<T>) -> Complex<T> {
    let h = T::from_f64(0.5).sqrt();
    let a2 = asym_u2(T::EPSILON);
    if z.re >= T::zero() {
        g_right(z * h, a2)
    } else {
        cexp(z * z * T::from_f64(0.5)) - g_right(-z * h, a2)
    }
}

fn maclaurin_regime(u2: f64, re: f64) -> bool {
    u2 <= 2.25 || re * re <= 1.0
}

/// `erfcx(u)/2` for `Re u >= 0`. The asymptotic series is used once `|u|^2`
/// reaches `asym_u2`.
fn g_right<T: Real>(u: Complex<T>, asym_u2: f64) -> Complex<T> {
    let u2 = cnorm(u).powi(2);
    let half = T::from_f64(0.5);
    if u2 >= asym_u2 {
        let s = asymptotic_sum(u * u * T::from_f64(2.0), T::EPSILON);
        return s / (u * (T::pi().sqrt() * T::from_f64(2.0)));
    }
    if maclaurin_regime(u2, u.re.to_f64()) {
        let one = Complex::new(T::one(), T::zero());
        return cexp(u * u) * (one - erf_series(u)) * half;
    }
    continued_fraction(u) * half
}

/// Maclaurin series of `erf(u)` with compensated summation.
fn erf_series<T: Real>(u: Complex<T>) -> Complex<T> {
    let mu2 = -(u * u);
    let mut term = u;
    let mut sum = CompensatedSum::default();
    sum.add(u);
    let u2 = cnorm(u).powi(2);
    let mut n = 1usize;
    loop {
        term = term * mu2 / T::from_usize(n);
        let t = term / T::from_usize(2 * n + 1);
        sum.add(t);
        if n as f64 > u2 && cnorm(t) <= T::EPSILON * cnorm(sum.value()) {
            break;
        }
        n += 1;
        if n > 2000 {
            break;
        }
    }
    sum.value() * (T::from_f64(2.0) / T::pi().sqrt())
}

/// Laplace's continued fraction
/// `erfcx(u) = 1/sqrt(pi) / (u + (1/2)/(u + 1/(u + (3/2)/(u + ...))))`
/// by the modified Lentz method. Converges for `Re u > 0`.
fn continued_fraction<T: Real>(u: Complex<T>) -> Complex<T> {
    let tiny = Complex::new(T::from_f64(1e-300), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut f = u;
    let mut c = f;
    let mut d = Complex::new(T::zero(), T::zero());
    for k in 1..20_000usize {
        let a = T::from_f64(k as f64 / 2.0);
        d = u + d * a;
        if d.re == T::zero() && d.im == T::zero() {
            d = tiny;
        }
        c = u + one / c * a;
        if c.re == T::zero() && c.im == T::zero() {
            c = tiny;
        }
        d = one / d;
        let delta = c * d;
        f = f * delta;
        if cnorm(delta - one) <= T::EPSILON {
            break;
        }
    }
    one / (f * T::pi().sqrt())
}

/// `S = sum_n (-1)^n (2n-1)!! / w^n` with `w = z^2`, truncated when the terms
/// stop decreasing or fall below `eps`.
fn asymptotic_sum<T: Real>(w: Complex<T>, eps: f64) -> Complex<T> {
    let inv = Complex::new(T::one(), T::zero()) / w;
    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = CompensatedSum::default();
    sum.add(term);
    let mut last = 1.0;
    for n in 1..400usize {
        let next = -(term * inv) * T::from_usize(2 * n - 1);
        let m = cnorm(next);
        if m >= last {
            break;
        }
        term = next;
        sum.add(term);
        last = m;
        if m <= eps * cnorm(sum.value()) {
            break;
        }
    }
    sum.value()
}
