//! Ray integrals `int_0^{omega inf} prod_j Phi(mu_j sqrt(z) x) exp(-x^2/2) dx`.
//!
//! On the rays `arg omega = -+pi/4` the integral converges only conditionally.
//! It is evaluated as a head integral on `[0, A]` plus the integration-by-parts
//! representation of the tail: two boundary terms at `x = A^2` and three
//! absolutely convergent integrals over `[A^2, inf)`. For `|arg omega| < pi/4`
//! the integrand decays like a Gaussian and a truncated quadrature is used.

use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::complex_gaussian::{phi, PhiAccuracy};
use crate::error::{Error, Result};
use crate::quadrature::gauss_kronrod;
use crate::steepest::{default_exponent, phi_product_integral, Factor};

/// Uniform bound on `|Phi|` over the closed sectors `|arg(+-w)| <= pi/4`.
/// The supremum is about 1.1706, attained near `|w| = 2.15` on a Stokes ray.
pub const SECTOR_BOUND: f64 = 1.2;

const POLE_GUARD: f64 = 1e-8;
const ANGLE_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfPlane {
    Upper,
    Lower,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RayIntegralProblem {
    pub mus: Vec<f64>,
    pub z: Complex64,
    pub omega: Complex64,
    pub half_plane: HalfPlane,
}

impl RayIntegralProblem {
    pub fn new(mus: Vec<f64>, z: Complex64, omega: Complex64, half_plane: HalfPlane) -> Result<Self> {
        let p = Self { mus, z, omega, half_plane };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mus.is_empty() || self.mus.iter().any(|m| *m == 0.0 || !m.is_finite()) {
            return Err(Error::InvalidParameter("multipliers mu_j must be finite and nonzero".into()));
        }
        if !(self.z.re.is_finite() && self.z.im.is_finite()) {
            return Err(Error::InvalidParameter("z must be finite".into()));
        }
        if self.z == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidParameter("z = 0 is the branch point of sqrt(z)".into()));
        }
        match self.half_plane {
            HalfPlane::Upper if self.z.im < 0.0 => {
                return Err(Error::InvalidParameter("upper half-plane problem needs Im z >= 0".into()))
            }
            HalfPlane::Lower if self.z.im > 0.0 => {
                return Err(Error::InvalidParameter("lower half-plane problem needs Im z <= 0".into()))
            }
            _ => {}
        }
        if self.omega.norm() == 0.0 || !self.omega.norm().is_finite() {
            return Err(Error::InvalidContour("omega must be finite and nonzero".into()));
        }
        if self.omega.arg().abs() > FRAC_PI_4 + ANGLE_SLACK {
            return Err(Error::InvalidContour(format!(
                "|arg omega| = {} exceeds pi/4",
                self.omega.arg().abs()
            )));
        }
        for m in &self.mus {
            if self.z == Complex64::new(-1.0 / (m * m), 0.0) {
                return Err(Error::NearPole { z: self.z.re, pole: -1.0 / (m * m), distance: 0.0 });
            }
        }
        Ok(())
    }

    /// `lambda_j = mu_j sqrt(z)` under the half-plane branch convention.
    pub fn lambdas(&self) -> Vec<Complex64> {
        let r = branch_sqrt(self.z, self.half_plane);
        self.mus.iter().map(|m| r * *m).collect()
    }
}

/// `sqrt(r e^{i theta}) = sqrt(r) e^{i theta/2}` with `theta` in `[0, pi]` for
/// the upper half plane and `[-pi, 0]` for the lower one.
pub fn branch_sqrt(z: Complex64, half_plane: HalfPlane) -> Complex64 {
    if z.im == 0.0 && z.re < 0.0 {
        let r = (-z.re).sqrt();
        return match half_plane {
            HalfPlane::Upper => Complex64::new(0.0, r),
            HalfPlane::Lower => Complex64::new(0.0, -r),
        };
    }
    z.sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub split_point_a: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub tail_cutoff: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { split_point_a: 6.0, rel_tol: 1e-12, abs_tol: 1e-13, max_subdivisions: 2000, tail_cutoff: 144.0 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| (1e-14..=1e-4).contains(&t);
        if !tol_ok(self.rel_tol) || !tol_ok(self.abs_tol) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerances must lie in [1e-14, 1e-4], got rel {} abs {}",
                self.rel_tol, self.abs_tol
            )));
        }
        if !(self.split_point_a > 0.0 && self.split_point_a.is_finite()) {
            return Err(Error::InvalidParameter("split point A must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter("max_subdivisions must be positive".into()));
        }
        if !(self.tail_cutoff >= self.split_point_a * self.split_point_a) {
            return Err(Error::InvalidParameter("tail_cutoff must be at least A^2".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegralPath {
    DirectRay,
    StabilizedIbp,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub path: IntegralPath,
}

fn accuracy() -> PhiAccuracy {
    PhiAccuracy::new(1e-15).expect("valid accuracy")
}

/// Collects the first `phi` error raised inside a quadrature closure.
struct Trap(RefCell<Option<Error>>);

impl Trap {
    fn new() -> Self {
        Self(RefCell::new(None))
    }

    fn phi(&self, w: Complex64, acc: &PhiAccuracy) -> Complex64 {
        match phi(w, acc) {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    }

    fn product(&self, cs: &[Complex64], skip: &[usize], y: f64, acc: &PhiAccuracy) -> Complex64 {
        let mut p = Complex64::new(1.0, 0.0);
        for (j, c) in cs.iter().enumerate() {
            if !skip.contains(&j) {
                p *= self.phi(c * y, acc);
            }
        }
        p
    }

    fn check(self) -> Result<()> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

fn not_met(value: Complex64, estimate: f64, requested: f64) -> Error {
    Error::ToleranceNotMet { best_re: value.re, best_im: value.im, estimate, requested }
}

/// `int_a^b prod_j Phi(lambda_j omega y) exp(-omega^2 y^2/2) omega dy` by
/// adaptive Gauss-Kronrod quadrature.
pub fn segment_integral(
    lambdas: &[Complex64],
    omega: Complex64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let acc = accuracy();
    let cs: Vec<Complex64> = lambdas.iter().map(|l| l * omega).collect();
    let trap = Trap::new();
    let w2 = omega * omega;
    let r = gauss_kronrod(
        |y: f64| trap.product(&cs, &[], y, &acc) * (-w2 * y * y / 2.0).exp() * omega,
        a,
        b,
        cfg.abs_tol,
        cfg.rel_tol,
        cfg.max_subdivisions,
    );
    trap.check()?;
    if !r.converged {
        return Err(not_met(r.value, r.abs_error, cfg.rel_tol));
    }
    Ok(IntegralResult {
        value: r.value,
        abs_error_estimate: r.abs_error,
        evaluations: r.evaluations,
        path: IntegralPath::DirectRay,
    })
}

/// The head term `int_0^A prod Phi(mu_j sqrt(z) omega y) exp(-omega^2 y^2/2) omega dy`.
pub fn head_integral(p: &RayIntegralProblem, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    p.validate()?;
    if cfg.split_point_a == 0.0 {
        return Ok(IntegralResult {
            value: Complex64::new(0.0, 0.0),
            abs_error_estimate: 0.0,
            evaluations: 0,
            path: IntegralPath::StabilizedIbp,
        });
    }
    let mut r = segment_integral(&p.lambdas(), p.omega, 0.0, cfg.split_point_a, cfg)?;
    r.path = IntegralPath::StabilizedIbp;
    Ok(r)
}

fn check_poles(p: &RayIntegralProblem, lambdas: &[Complex64]) -> Result<()> {
    for (m, l) in p.mus.iter().zip(lambdas) {
        let dist = (Complex64::new(1.0, 0.0) + l * l).norm();
        if dist < POLE_GUARD {
            return Err(Error::NearPole { z: p.z.re, pole: -1.0 / (m * m), distance: dist });
        }
    }
    Ok(())
}

/// Accumulated value and error of a sum of terms.
#[derive(Default)]
struct Acc {
    value: Complex64,
    error: f64,
    evaluations: usize,
}

impl Acc {
    fn add(&mut self, coef: Complex64, v: (Complex64, f64, usize)) {
        self.value += coef * v.0;
        self.error += coef.norm() * v.1;
        self.evaluations += v.2;
    }
}

/// `int_{x0}^{x1} prod_{j not in skip} Phi(c_j sqrt x) x^{-p} exp(-q x) dx`, with
/// `x1 = inf` when `upper` is `None`. The finite part uses Gauss-Kronrod in `x`;
/// the part beyond the cutoff is evaluated in `y = sqrt x` by the split
/// steepest-descent integrator.
fn tail_integral(
    cs: &[Complex64],
    skip: &[usize],
    half_power: i32,
    q: Complex64,
    x0: f64,
    upper: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, f64, usize)> {
    let acc = accuracy();
    let cut = upper.unwrap_or(cfg.tail_cutoff.max(x0));
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut evaluations = 0;
    if cut > x0 {
        let trap = Trap::new();
        let p = f64::from(half_power) / 2.0;
        let r = gauss_kronrod(
            |x: f64| trap.product(cs, skip, x.sqrt(), &acc) * x.powf(-p) * (-q * x).exp(),
            x0,
            cut,
            cfg.abs_tol * 0.1,
            cfg.rel_tol,
            cfg.max_subdivisions,
        );
        trap.check()?;
        if !r.converged {
            return Err(not_met(r.value, r.abs_error, cfg.rel_tol));
        }
        value += r.value;
        error += r.abs_error;
        evaluations += r.evaluations;
    }
    if upper.is_none() {
        let mut factors: Vec<Factor<f64>> = Vec::new();
        for (j, c) in cs.iter().enumerate() {
            if skip.contains(&j) {
                continue;
            }
            match factors.iter_mut().find(|f| f.c == *c) {
                Some(f) => f.multiplicity += 1,
                None => factors.push(Factor { c: *c, multiplicity: 1 }),
            }
        }
        // x^{-p} dx = 2 y^{1-2p} dy
        let r = phi_product_integral(
            &factors,
            1 - half_power,
            cut.sqrt(),
            false,
            default_exponent(&factors, q),
            1e-13,
        )?;
        value += r.value * 2.0;
        error += 2.0 * r.abs_error;
        evaluations += r.evaluations;
    }
    Ok((value, error, evaluations))
}

/// Right-hand side of the integration-by-parts identity on `[x0, x1]` (in
/// `x = y^2`), with `x1 = inf` when `upper` is `None`. Boundary terms at
/// infinity vanish.
fn ibp_terms(
    lambdas: &[Complex64],
    omega: Complex64,
    a: f64,
    b: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<Acc> {
    let acc = accuracy();
    let n = lambdas.len();
    let cs: Vec<Complex64> = lambdas.iter().map(|l| l * omega).collect();
    let w2 = omega * omega;
    let one = Complex64::new(1.0, 0.0);
    let sq2pi = (2.0 * PI).sqrt();
    let x0 = a * a;
    let x1 = b.map(|b| b * b);
    let trap = Trap::new();
    let mut out = Acc::default();

    // Boundary terms: [g(x)]_{x0}^{x1} contributes g(x0) - g(x1) with the sign
    // flip of the identity already applied.
    let mut boundary = |y: f64, sign: f64| {
        let t1 = trap.product(&cs, &[], y, &acc) * (-w2 * y * y / 2.0).exp() / (omega * y);
        out.value += t1 * sign;
        for (l, &lam) in lambdas.iter().enumerate() {
            let coef = lam / (sq2pi * w2 * (one + lam * lam));
            let t3 = coef * trap.product(&cs, &[l], y, &acc) / (y * y)
                * (-w2 * y * y * (one + lam * lam) / 2.0).exp();
            out.value += t3 * sign;
        }
    };
    boundary(a, 1.0);
    if let Some(b) = b {
        boundary(b, -1.0);
    }
    trap.check()?;
    out.error += 1e-15 * out.value.norm();

    let upper = x1;
    out.add(-one / (2.0 * omega), tail_integral(&cs, &[], 3, w2 / 2.0, x0, upper, cfg)?);
    for (l, &lam) in lambdas.iter().enumerate() {
        let e = one + lam * lam;
        let coef = lam / (sq2pi * w2 * e);
        out.add(-coef, tail_integral(&cs, &[l], 4, w2 * e / 2.0, x0, upper, cfg)?);
    }
    for l1 in 0..n {
        for l2 in (l1 + 1)..n {
            let (a1, a2) = (lambdas[l1], lambdas[l2]);
            let e1 = one + a1 * a1;
            let e2 = one + a2 * a2;
            // The ordered pairs (l1, l2) and (l2, l1) share one integral.
            let coef = a1 * a2 / (4.0 * PI * omega) * (one / e1 + one / e2);
            let q = w2 * (e1 + a2 * a2) / 2.0;
            out.add(coef, tail_integral(&cs, &[l1, l2], 3, q, x0, upper, cfg)?);
        }
    }
    Ok(out)
}

/// Right-hand side of the integration-by-parts identity for
/// `int_A^B prod Phi(lambda_j omega y) exp(-omega^2 y^2/2) omega dy`.
pub fn ibp_identity(
    lambdas: &[Complex64],
    omega: Complex64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    if !(0.0 < a && a < b && b.is_finite()) {
        return Err(Error::InvalidParameter("need 0 < A < B < inf".into()));
    }
    for l in lambdas {
        if (Complex64::new(1.0, 0.0) + l * l).norm() < POLE_GUARD {
            return Err(Error::InvalidParameter("lambda_j = +-i is excluded".into()));
        }
    }
    Ok(ibp_terms(lambdas, omega, a, Some(b), cfg)?.value)
}

/// Boundary terms at `x = A^2` plus the three tail integrals over `[A^2, inf)`.
pub fn ibp_tail(p: &RayIntegralProblem, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    p.validate()?;
    cfg.validate()?;
    let want = match p.half_plane {
        HalfPlane::Upper => -FRAC_PI_4,
        HalfPlane::Lower => FRAC_PI_4,
    };
    if (p.omega.arg() - want).abs() > ANGLE_SLACK {
        return Err(Error::InvalidContour(format!(
            "the stabilized tail needs arg omega = {want} for the {:?} half plane, got {}",
            p.half_plane,
            p.omega.arg()
        )));
    }
    let lambdas = p.lambdas();
    check_poles(p, &lambdas)?;
    let r = ibp_terms(&lambdas, p.omega, cfg.split_point_a, None, cfg)?;
    Ok(IntegralResult {
        value: r.value,
        abs_error_estimate: r.error,
        evaluations: r.evaluations,
        path: IntegralPath::StabilizedIbp,
    })
}

/// The ray integral, stabilized on `|arg omega| = pi/4` and direct inside.
pub fn ray_integral(p: &RayIntegralProblem, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    p.validate()?;
    cfg.validate()?;
    if (p.omega.arg().abs() - FRAC_PI_4).abs() <= ANGLE_SLACK {
        let h = head_integral(p, cfg)?;
        let t = ibp_tail(p, cfg)?;
        return Ok(IntegralResult {
            value: h.value + t.value,
            abs_error_estimate: h.abs_error_estimate + t.abs_error_estimate,
            evaluations: h.evaluations + t.evaluations,
            path: IntegralPath::StabilizedIbp,
        });
    }
    let lambdas = p.lambdas();
    for (m, l) in p.mus.iter().zip(&lambdas) {
        let w = l * p.omega * m.signum();
        if w.arg().abs() > FRAC_PI_4 + ANGLE_SLACK {
            return Err(Error::InvalidContour(format!(
                "direct ray leaves the sector where Phi is bounded (arg = {}); use arg omega = -+pi/4",
                w.arg()
            )));
        }
    }
    let a = (p.omega * p.omega).re / 2.0;
    let y_end = truncation_point(p.mus.len(), p.omega.norm(), a, cfg.abs_tol / 10.0).max(cfg.split_point_a);
    let mut r = segment_integral(&lambdas, p.omega, 0.0, y_end, cfg)?;
    r.abs_error_estimate += cfg.abs_tol / 10.0;
    r.path = IntegralPath::DirectRay;
    Ok(r)
}

/// Smallest `Y` with `C^n |omega| exp(-a Y^2) / (2 a Y) <= eps`.
fn truncation_point(n: usize, omega_norm: f64, a: f64, eps: f64) -> f64 {
    let lnc = n as f64 * SECTOR_BOUND.ln() + omega_norm.ln() - eps.ln();
    let mut y = (lnc.max(1.0) / a).sqrt();
    for _ in 0..50 {
        let next = ((lnc - (2.0 * a * y).ln()).max(0.0) / a).sqrt();
        if (next - y).abs() < 1e-12 * y {
            break;
        }
        y = next.max(1e-3);
    }
    y * 1.0001
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn problem(mus: &[f64], z: Complex64, omega: Complex64, hp: HalfPlane) -> RayIntegralProblem {
        RayIntegralProblem::new(mus.to_vec(), z, omega, hp).unwrap()
    }

    const ORACLE_D0: f64 = 0.939_985_602_986_625_1;

    #[test]
    fn single_factor_oracle_value() {
        assert!(((2.0 * PI).sqrt() * 0.375 - ORACLE_D0).abs() < 1e-15);
        let one = Complex64::new(1.0, 0.0);
        for (omega, hp) in [(one, HalfPlane::Upper), (Complex64::new(1.0, -1.0), HalfPlane::Upper)] {
            let r = ray_integral(&problem(&[1.0], one, omega, hp), &cfg()).unwrap();
            assert!((r.value - ORACLE_D0).norm() < 1e-11, "{omega}: {}", r.value);
        }
    }

    #[test]
    fn empty_head_is_zero() {
        let one = Complex64::new(1.0, 0.0);
        let c = QuadratureConfig { split_point_a: 0.0, ..cfg() };
        let r = head_integral(&problem(&[1.0, 1.0, 1.0], one, one, HalfPlane::Upper), &c).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn rotated_rays_agree_for_positive_z() {
        let z = Complex64::new(4.0, 0.0);
        let mus = [1.0, 1.0, 1.0];
        let rays = [
            (Complex64::new(1.0, 0.0), HalfPlane::Upper),
            (Complex64::new(1.0, -1.0), HalfPlane::Upper),
            (Complex64::new(1.0, 1.0), HalfPlane::Lower),
            (Complex64::from_polar(1.0, PI / 8.0), HalfPlane::Upper),
        ];
        let vals: Vec<Complex64> =
            rays.iter().map(|(w, hp)| ray_integral(&problem(&mus, z, *w, *hp), &cfg()).unwrap().value).collect();
        for v in &vals {
            assert!((v - vals[0]).norm() < 1e-10, "{v} vs {}", vals[0]);
            assert!(v.im.abs() < 1e-10);
        }
    }

    #[test]
    fn boundary_term_respects_modulus_bound() {
        let z = Complex64::new(-0.3, 0.2);
        let omega = Complex64::new(1.0, -1.0);
        let p = problem(&[0.5, 0.7, 0.9], z, omega, HalfPlane::Upper);
        let a = 6.0;
        let acc = accuracy();
        let trap = Trap::new();
        let cs: Vec<Complex64> = p.lambdas().iter().map(|l| l * omega).collect();
        let t1 = trap.product(&cs, &[], a, &acc) * (-omega * omega * a * a / 2.0).exp() / (omega * a);
        trap.check().unwrap();
        assert!(t1.norm() <= SECTOR_BOUND.powi(3) / (a * omega.norm()));
    }

    #[test]
    fn conjugation_between_half_planes() {
        let z = Complex64::new(-2.0, 0.7);
        let up = problem(&[0.3, 0.4, 0.5], z, Complex64::new(1.0, -1.0), HalfPlane::Upper);
        let lo = problem(&[0.3, 0.4, 0.5], z.conj(), Complex64::new(1.0, 1.0), HalfPlane::Lower);
        let a = ray_integral(&up, &cfg()).unwrap().value;
        let b = ray_integral(&lo, &cfg()).unwrap().value;
        assert!((a - b.conj()).norm() < 1e-10);
    }

    #[test]
    fn ibp_identity_at_finite_b() {
        let omega = Complex64::new(1.0, -1.0);
        let lambdas = [Complex64::new(0.3, 0.1), Complex64::new(0.5, 0.4), Complex64::new(0.2, 0.6)];
        let lhs = segment_integral(&lambdas, omega, 1.5, 7.0, &cfg()).unwrap().value;
        let rhs = ibp_identity(&lambdas, omega, 1.5, 7.0, &cfg()).unwrap();
        assert!((lhs - rhs).norm() < 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn halving_tail_cutoff_is_within_error() {
        let z = Complex64::new(-1.5, 0.0);
        let p = problem(&[0.4, 0.5, 0.6], z, Complex64::new(1.0, -1.0), HalfPlane::Upper);
        let a = ibp_tail(&p, &cfg()).unwrap();
        let b = ibp_tail(&p, &QuadratureConfig { tail_cutoff: 72.0, ..cfg() }).unwrap();
        assert!((a.value - b.value).norm() <= a.abs_error_estimate.max(b.abs_error_estimate) + 1e-13);
    }

    #[test]
    fn rejects_bad_inputs() {
        let one = Complex64::new(1.0, 0.0);
        assert!(RayIntegralProblem::new(vec![1.0], Complex64::new(0.0, 0.0), one, HalfPlane::Upper).is_err());
        assert!(RayIntegralProblem::new(vec![1.0], Complex64::new(1.0, -1.0), one, HalfPlane::Upper).is_err());
        assert!(RayIntegralProblem::new(vec![0.0], one, one, HalfPlane::Upper).is_err());
        assert!(RayIntegralProblem::new(vec![1.0], one, Complex64::new(0.0, 1.0), HalfPlane::Upper).is_err());
        let near = problem(&[1.0, 2.0], Complex64::new(-1.0 + 1e-10, 0.0), Complex64::new(1.0, -1.0), HalfPlane::Upper);
        assert!(matches!(ibp_tail(&near, &cfg()), Err(Error::NearPole { .. })));
        let wrong = problem(&[1.0], one, Complex64::new(1.0, 1.0), HalfPlane::Upper);
        assert!(matches!(ibp_tail(&wrong, &cfg()), Err(Error::InvalidContour(_))));
        assert!(QuadratureConfig { rel_tol: 1e-16, ..cfg() }.validate().is_err());
    }

    #[test]
    fn branch_sqrt_conventions() {
        let m = Complex64::new(-4.0, 0.0);
        assert_eq!(branch_sqrt(m, HalfPlane::Upper), Complex64::new(0.0, 2.0));
        assert_eq!(branch_sqrt(m, HalfPlane::Lower), Complex64::new(0.0, -2.0));
    }
}
