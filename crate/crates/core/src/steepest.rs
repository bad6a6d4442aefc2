//! Integrals of products of `Phi` against a complex Gaussian, evaluated by
//! splitting each factor into its recessive and dominant parts and rotating
//! every resulting term onto its own steepest-descent ray.
//!
//! With `G(x) = exp(x^2/2) Phi(-x)`, a factor with `Re c >= 0` is written as
//! `Phi(c y) = 1 - exp(-c^2 y^2/2) G(c y)` and one with `Re c < 0` as
//! `Phi(c y) = exp(-c^2 y^2/2) G(-c y)`. Expanding the product gives terms
//! `coef_K * prod G(+-c_j y)^{k_j} * exp(-q_K y^2)` with `q_K = q + sum k_j c_j^2/2`.
//! Each term is analytic and, along real `y`, at most oscillatory, so its ray
//! can be turned to `arg y = -arg(q_K)/2` where the Gaussian is real and
//! decaying. The `G` factors stay bounded as long as their arguments remain in
//! the closed right half plane, which is checked.

use num_complex::Complex;

use crate::complex_gaussian::scaled_tail;
use crate::error::{Error, Result};
use crate::quadrature::exp_sinh;
use crate::real::{cexp, cnorm, cpowi, csqrt, lower, Real};

/// A factor `Phi(c y)^multiplicity`.
#[derive(Clone, Copy, Debug)]
pub struct Factor<T: Real> {
    pub c: Complex<T>,
    pub multiplicity: u32,
}

#[derive(Clone, Copy, Debug)]
pub struct SplitIntegral<T: Real> {
    pub value: Complex<T>,
    pub abs_error: f64,
    /// `sum_K |coef_K| * int |term_K|`, the scale against which rounding acts.
    pub magnitude: f64,
    pub evaluations: usize,
    pub components: usize,
}

/// `int_{y0}^inf prod_j Phi(c_j y)^{m_j} y^power exp(-q y^2) dy` along real `y`,
/// plus `prod_j Phi(-c_j y)^{m_j}` in the integrand when `symmetric` is set.
///
/// `exponent(k)` must return `q + sum_j k_j c_j^2 / 2` for the multiplicity
/// vector `k`. Callers that know these exponents in closed form pass them so
/// that exact cancellations (for example `q_K = 0`) survive rounding.
pub fn phi_product_integral<T, Q>(
    factors: &[Factor<T>],
    power: i32,
    y0: T,
    symmetric: bool,
    exponent: Q,
    rel_tol: f64,
) -> Result<SplitIntegral<T>>
where
    T: Real,
    Q: Fn(&[u32]) -> Complex<T>,
{
    split(factors, power, y0, symmetric, &exponent, rel_tol)
}

fn split<T: Real>(
    factors: &[Factor<T>],
    power: i32,
    y0: T,
    symmetric: bool,
    exponent: &dyn Fn(&[u32]) -> Complex<T>,
    rel_tol: f64,
) -> Result<SplitIntegral<T>> {
    let plus: Vec<bool> = factors.iter().map(|f| f.c.re >= T::zero()).collect();
    if symmetric && plus.iter().any(|p| !p) {
        if plus.iter().all(|p| !p) {
            // The symmetric integrand is invariant under c -> -c.
            let flipped: Vec<Factor<T>> =
                factors.iter().map(|f| Factor { c: -f.c, multiplicity: f.multiplicity }).collect();
            return split(&flipped, power, y0, true, exponent, rel_tol);
        }
        let a = split(factors, power, y0, false, exponent, rel_tol)?;
        let flipped: Vec<Factor<T>> =
            factors.iter().map(|f| Factor { c: -f.c, multiplicity: f.multiplicity }).collect();
        let b = split(&flipped, power, y0, false, exponent, rel_tol)?;
        return Ok(SplitIntegral {
            value: a.value + b.value,
            abs_error: a.abs_error + b.abs_error,
            magnitude: a.magnitude + b.magnitude,
            evaluations: a.evaluations + b.evaluations,
            components: a.components + b.components,
        });
    }

    let n = factors.len();
    let mut k: Vec<u32> = factors
        .iter()
        .zip(&plus)
        .map(|(f, p)| if *p { 0 } else { f.multiplicity })
        .collect();
    let mut total = Complex::new(T::zero(), T::zero());
    let mut abs_error = 0.0;
    let mut magnitude = 0.0;
    let mut evaluations = 0;
    let mut components = 0;
    loop {
        let full = (0..n).all(|j| k[j] == factors[j].multiplicity);
        let mut coef = 1.0f64;
        for j in 0..n {
            if plus[j] {
                coef *= binomial(factors[j].multiplicity, k[j]);
                if k[j] % 2 == 1 {
                    coef = -coef;
                }
            }
        }
        if symmetric && full {
            coef += 1.0;
        }
        if coef != 0.0 {
            let q = exponent(&k);
            let r = component(factors, &plus, &k, power, y0, q, rel_tol)?;
            let cf = T::from_f64(coef);
            total = total + r.value * cf;
            abs_error += coef.abs() * r.abs_error;
            magnitude += coef.abs() * r.magnitude;
            evaluations += r.evaluations;
            components += 1;
        }
        // Next multiplicity vector over the plus factors.
        let mut j = 0;
        loop {
            if j == n {
                abs_error += 8.0 * T::EPSILON * magnitude;
                return Ok(SplitIntegral { value: total, abs_error, magnitude, evaluations, components });
            }
            if plus[j] && k[j] < factors[j].multiplicity {
                k[j] += 1;
                break;
            }
            if plus[j] {
                k[j] = 0;
            }
            j += 1;
        }
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * f64::from(n - i) / f64::from(i + 1);
    }
    r.round()
}

struct Component<T: Real> {
    value: Complex<T>,
    abs_error: f64,
    magnitude: f64,
    evaluations: usize,
}

fn component<T: Real>(
    factors: &[Factor<T>],
    plus: &[bool],
    k: &[u32],
    power: i32,
    y0: T,
    q: Complex<T>,
    rel_tol: f64,
) -> Result<Component<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let qn = cnorm(q);
    let g_count: u32 = k.iter().sum();
    let scale_ref: f64 = factors.iter().map(|f| cnorm(f.c).powi(2)).sum::<f64>() + 1.0;
    if q.re.to_f64() < -64.0 * T::EPSILON * scale_ref {
        return Err(Error::Divergent(format!(
            "Gaussian exponent {} grows along the real axis",
            lower(q)
        )));
    }
    let dir = if qn == 0.0 {
        Complex::new(T::one(), T::zero())
    } else {
        let unit = q.conj() / T::from_f64(qn);
        // Renormalize in working precision before the square root.
        let unit = unit / crate::real::cabs(unit);
        csqrt(unit)
    };
    let phi_arg = lower(dir).arg();
    for (j, f) in factors.iter().enumerate() {
        if k[j] == 0 {
            continue;
        }
        let c = if plus[j] { f.c } else { -f.c };
        let a = lower(c).arg();
        let lim = std::f64::consts::FRAC_PI_2 + 1e-12;
        if a.abs() > lim || (a + phi_arg).abs() > lim {
            return Err(Error::InvalidContour(format!(
                "rotated ray leaves the half plane where G is bounded (arg c = {a}, ray angle {phi_arg})"
            )));
        }
    }
    if qn == 0.0 && f64::from(g_count) - f64::from(power) <= 1.0 {
        return Err(Error::Divergent(format!(
            "algebraic decay of order {} is not integrable",
            f64::from(g_count) - f64::from(power)
        )));
    }

    let y0f = y0.to_f64();
    let scale = if qn == 0.0 {
        y0f.max(1.0)
    } else {
        let cosang = (0.5 * lower(q).arg()).cos().max(0.0);
        1.0 / (qn.sqrt() + 2.0 * y0f * qn * cosang)
    };
    let scale = scale.clamp(1e-6, 1e6);
    let signs: Vec<Complex<T>> = factors.iter().zip(plus).map(|(f, p)| if *p { f.c } else { -f.c }).collect();
    let base = if y0 == T::zero() { zero } else { q * y0 * y0 };
    let integrand = |t: T| -> Complex<T> {
        let y = dir * t + Complex::new(y0, T::zero());
        let mut v = dir;
        for (j, c) in signs.iter().enumerate() {
            if k[j] > 0 {
                v = v * cpowi(scaled_tail(*c * y), k[j]);
            }
        }
        if power != 0 {
            let yp = cpowi(y, power.unsigned_abs());
            v = if power > 0 { v * yp } else { v / yp };
        }
        v * cexp(base - q * y * y)
    };
    // Relative accuracy is bounded below by rounding in the summation.
    let rel = rel_tol.max(4.0 * T::EPSILON);
    let max_level = if T::EPSILON < 1e-20 { 10 } else { 8 };
    let r = exp_sinh(integrand, T::from_f64(scale), 0.0, rel, max_level);
    let mut abs_error = r.abs_error;
    if !r.converged {
        // Rounding noise can keep the level difference just above the target;
        // accept it when it is at the rounding floor of the integrand sum.
        if r.abs_error > 64.0 * T::EPSILON * r.magnitude.max(cnorm(r.value)) {
            return Err(Error::ToleranceNotMet {
                best_re: lower(r.value).re,
                best_im: lower(r.value).im,
                estimate: r.abs_error,
                requested: rel_tol,
            });
        }
        abs_error = r.abs_error.max(T::EPSILON * r.magnitude);
    }
    let outer = if y0 == T::zero() { Complex::new(T::one(), T::zero()) } else { cexp(-base) };
    let on = cnorm(outer);
    Ok(Component {
        value: r.value * outer,
        abs_error: abs_error * on,
        magnitude: r.magnitude * on,
        evaluations: r.evaluations,
    })
}

/// The default exponent map `q_K = q + sum_j k_j c_j^2 / 2`.
pub fn default_exponent<T: Real>(factors: &[Factor<T>], q: Complex<T>) -> impl Fn(&[u32]) -> Complex<T> + '_ {
    move |k: &[u32]| {
        let mut e = q;
        for (f, kj) in factors.iter().zip(k) {
            if *kj > 0 {
                e = e + f.c * f.c * T::from_f64(0.5 * f64::from(*kj));
            }
        }
        e
    }
}
