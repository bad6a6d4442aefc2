//! Volumes from the contour representation
//! `Vol = omega_{d+1} / sqrt(kappa)^d * F_+(kappa - s)`, where
//! `F_+(z) = (2 pi)^{-1/2} int_0^{(1-i) inf} (prod Phi(mu_j sqrt(z) x) + prod Phi(-mu_j sqrt(z) x)) e^{-x^2/2} dx`
//! and `mu_j = tau_j / s`.
//!
//! `F` is evaluated by splitting the `Phi` product into exponentially
//! weighted terms whose rays are rotated individually (see [`crate::steepest`]).
//! Those terms cancel heavily when the volume is small compared with the
//! individual terms; the ratio is measured and the evaluation is repeated in
//! double-double arithmetic when `f64` cannot deliver the requested accuracy.

use num_complex::{Complex, Complex64};

use crate::contour_quadrature::{ray_integral, HalfPlane, QuadratureConfig, RayIntegralProblem};
use crate::double_double::DoubleDouble;
use crate::error::{Error, Result};
use crate::real::{csqrt, lift, lower, Real};
use crate::simplex_geometry::{kappa_min, OrthocentricParams, RegularSimplexSpec};
use crate::steepest::{phi_product_integral, Factor, SplitIntegral};

/// Default relative tolerance on volumes.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Largest number of split terms attempted for one `F` evaluation.
const MAX_COMPONENTS: u64 = 1 << 18;

/// Relative distance to a pole `z = -mu_j^{-2}` treated as singular.
const POLE_GUARD: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum Geometry {
    Orthocentric(OrthocentricParams),
    RegularHyperbolic(RegularSimplexSpec),
    IdealRegular(usize),
}

/// Which representation of `F` the engine uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FMethod {
    /// Split terms on rotated rays, with double-double fallback.
    #[default]
    Split,
    /// Head quadrature plus integration-by-parts tail, `f64` only.
    RayQuadrature,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeRequest {
    pub geometry: Geometry,
    pub kappa: f64,
    /// Relative tolerance on the volume.
    pub tolerance: f64,
    /// Evaluate hyperbolic cases through `F_-` and the `(1+i)` ray.
    pub use_lower_branch: bool,
    pub method: FMethod,
}

impl VolumeRequest {
    pub fn orthocentric(params: OrthocentricParams, kappa: f64) -> Self {
        Self::with_geometry(Geometry::Orthocentric(params), kappa)
    }

    pub fn regular(spec: RegularSimplexSpec) -> Self {
        let kappa = spec.kappa();
        Self::with_geometry(Geometry::RegularHyperbolic(spec), kappa)
    }

    pub fn ideal(d: usize, kappa: f64) -> Self {
        Self::with_geometry(Geometry::IdealRegular(d), kappa)
    }

    fn with_geometry(geometry: Geometry, kappa: f64) -> Self {
        Self { geometry, kappa, tolerance: DEFAULT_TOLERANCE, use_lower_branch: false, method: FMethod::Split }
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn lower_branch(mut self, on: bool) -> Self {
        self.use_lower_branch = on;
        self
    }

    pub fn method(mut self, m: FMethod) -> Self {
        self.method = m;
        self
    }

    pub fn dim(&self) -> usize {
        match &self.geometry {
            Geometry::Orthocentric(p) => p.dim(),
            Geometry::RegularHyperbolic(s) => s.d(),
            Geometry::IdealRegular(d) => *d,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    UpperRay,
    LowerRay,
    RealAxis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    DoubleDouble,
    /// No quadrature needed.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeResult {
    pub volume: f64,
    pub abs_error: f64,
    pub residual_imag: f64,
    pub branch: Branch,
    pub precision: Precision,
    /// Sum of term magnitudes over `|F|`.
    pub condition: f64,
}

/// `F` together with its error bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FValue {
    pub value: Complex64,
    pub abs_error: f64,
    pub magnitude: f64,
    pub precision: Precision,
}

/// Surface area `omega_n` of the unit sphere in `R^n`, `2 pi^{n/2} / Gamma(n/2)`.
pub fn sphere_area(n: usize) -> f64 {
    assert!(n >= 1, "sphere_area needs n >= 1");
    let two_pi = 2.0 * std::f64::consts::PI;
    let (mut w, mut m) = if n % 2 == 1 { (2.0, 1usize) } else { (two_pi, 2usize) };
    while m < n {
        w *= two_pi / m as f64;
        m += 2;
    }
    w
}

/// The source of the multipliers and of the term exponents.
#[derive(Clone, Debug)]
enum FKind {
    Mus { mus: Vec<f64>, z: Complex64 },
    Ortho { taus: Vec<f64>, kappa: f64 },
    /// `x = l sqrt(-kappa)`; `None` marks the ideal simplex.
    Regular { d: usize, x: Option<f64> },
}

fn sinh_t<T: Real>(x: f64) -> T {
    if x.abs() < 1.0 {
        let xt = T::from_f64(x);
        let x2 = xt * xt;
        let mut term = xt;
        let mut sum = xt;
        let mut k = 1.0;
        loop {
            term = term * x2 / T::from_f64((k + 1.0) * (k + 2.0));
            sum += term;
            k += 2.0;
            if term.abs().to_f64() <= T::EPSILON * 1e-2 * sum.abs().to_f64() {
                return sum;
            }
        }
    }
    let e = T::from_f64(x).exp();
    (e - T::one() / e) * T::from_f64(0.5)
}

struct Setup<T: Real> {
    factors: Vec<Factor<T>>,
    /// `mu_j^2 z` per factor group, for the exponents `1 + z sum k_j mu_j^2`.
    weights: Vec<Complex<T>>,
    /// Closed-form `1 - k lambda` for regular simplices.
    regular_beta: Option<Box<dyn Fn(u32) -> T>>,
    half_omega_sq: Complex<T>,
    prefactor: Complex<T>,
}

fn setup<T: Real>(kind: &FKind, branch: Branch) -> Result<Setup<T>> {
    let one = T::one();
    let (omega, hp): (Complex<T>, HalfPlane) = match branch {
        Branch::UpperRay => (Complex::new(one, -one), HalfPlane::Upper),
        Branch::LowerRay => (Complex::new(one, one), HalfPlane::Lower),
        Branch::RealAxis => (Complex::new(one, T::zero()), HalfPlane::Upper),
    };
    let inv_sqrt_2pi = T::one() / (T::from_f64(2.0) * T::pi()).sqrt();
    let prefactor = omega * inv_sqrt_2pi;
    let half_omega_sq = omega * omega * T::from_f64(0.5);

    if let FKind::Regular { d, x } = kind {
        let d = *d;
        let dt = T::from_usize(d);
        let (lambda, beta): (T, Box<dyn Fn(u32) -> T>) = match x {
            None => (one / dt, Box::new(move |k| (dt - T::from_usize(k as usize)) / dt)),
            Some(x) => {
                let sh = sinh_t::<T>(0.5 * x);
                let ch = one + T::from_f64(2.0) * sh * sh;
                let den = one + dt * ch;
                let beta = move |k: u32| {
                    let k = k as usize;
                    if k <= d {
                        (one + T::from_usize(d - k) * ch) / den
                    } else {
                        -T::from_f64(2.0) * sh * sh / den * T::from_usize(k - d)
                            - (T::from_usize(k - d) - one) / den
                    }
                };
                (ch / den, Box::new(beta))
            }
        };
        // mu sqrt(z) = +-i sqrt(lambda) on the two branches.
        let r = lambda.sqrt();
        let musqrtz = match branch {
            Branch::LowerRay => Complex::new(T::zero(), -r),
            _ => Complex::new(T::zero(), r),
        };
        let c = musqrtz * omega;
        return Ok(Setup {
            factors: vec![Factor { c, multiplicity: d as u32 + 1 }],
            weights: vec![Complex::new(-lambda, T::zero())],
            regular_beta: Some(beta),
            half_omega_sq,
            prefactor,
        });
    }

    let (mus, z): (Vec<(T, u32)>, Complex<T>) = match kind {
        FKind::Mus { mus, z } => (group(mus, |m| T::from_f64(m)), lift(*z)),
        FKind::Ortho { taus, kappa } => {
            let mut s = T::zero();
            for t in taus {
                let tt = T::from_f64(*t);
                s += tt * tt;
            }
            let z = Complex::new(T::from_f64(*kappa) - s, T::zero());
            (group(taus, |t| T::from_f64(t) / s), z)
        }
        FKind::Regular { .. } => unreachable!(),
    };
    let root = if z.im == T::zero() && z.re < T::zero() {
        let r = (-z.re).sqrt();
        match hp {
            HalfPlane::Upper => Complex::new(T::zero(), r),
            HalfPlane::Lower => Complex::new(T::zero(), -r),
        }
    } else {
        csqrt(z)
    };
    let mut factors = Vec::with_capacity(mus.len());
    let mut weights = Vec::with_capacity(mus.len());
    for (mu, m) in mus {
        factors.push(Factor { c: root * omega * mu, multiplicity: m });
        weights.push(z * mu * mu);
    }
    Ok(Setup { factors, weights, regular_beta: None, half_omega_sq, prefactor })
}

/// Groups equal values, keeping first-appearance order.
fn group<T: Real>(values: &[f64], map: impl Fn(f64) -> T) -> Vec<(T, u32)> {
    let mut out: Vec<(f64, u32)> = Vec::new();
    for v in values {
        match out.iter_mut().find(|(w, _)| w == v) {
            Some(e) => e.1 += 1,
            None => out.push((*v, 1)),
        }
    }
    out.into_iter().map(|(v, m)| (map(v), m)).collect()
}

fn eval_split<T: Real>(kind: &FKind, branch: Branch) -> Result<FValue> {
    let st = setup::<T>(kind, branch)?;
    let count: u64 = st.factors.iter().map(|f| u64::from(f.multiplicity) + 1).product();
    if count > MAX_COMPONENTS {
        return Err(Error::CostLimit(format!(
            "{count} split terms (distinct multipliers with these multiplicities)"
        )));
    }
    let one = Complex::new(T::one(), T::zero());
    let exponent = |k: &[u32]| -> Complex<T> {
        let beta = match &st.regular_beta {
            Some(b) => Complex::new(b(k.iter().sum()), T::zero()),
            None => {
                let mut b = one;
                for (w, kj) in st.weights.iter().zip(k) {
                    if *kj > 0 {
                        b = b + *w * T::from_usize(*kj as usize);
                    }
                }
                b
            }
        };
        st.half_omega_sq * beta
    };
    let SplitIntegral { value, abs_error, magnitude, .. } =
        phi_product_integral(&st.factors, 0, T::zero(), true, exponent, 4.0 * T::EPSILON)?;
    let pn = crate::real::cnorm(st.prefactor);
    Ok(FValue {
        value: lower(value * st.prefactor),
        abs_error: abs_error * pn,
        magnitude: magnitude * pn,
        precision: if T::EPSILON < 1e-20 { Precision::DoubleDouble } else { Precision::Double },
    })
}

fn check_pole(mus: &[f64], z: Complex64) -> Result<()> {
    for m in mus {
        let dist = (Complex64::new(1.0, 0.0) + z * m * m).norm();
        if dist < POLE_GUARD {
            return Err(Error::NearPole { z: z.re, pole: -1.0 / (m * m), distance: dist });
        }
    }
    Ok(())
}

fn map_divergence(e: Error, z: Complex64) -> Error {
    match e {
        Error::Divergent(_) => Error::NearPole { z: z.re, pole: z.re, distance: 0.0 },
        other => other,
    }
}

/// `F` in `f64`, repeated in double-double if the relative error exceeds `rel_tol`.
fn eval_adaptive(kind: &FKind, branch: Branch, rel_tol: f64) -> Result<FValue> {
    let first = eval_split::<f64>(kind, branch);
    if let Ok(f) = &first {
        if f.abs_error <= rel_tol * f.value.norm() {
            return Ok(*f);
        }
    }
    match eval_split::<DoubleDouble>(kind, branch) {
        Ok(f) => Ok(f),
        Err(e @ (Error::ToleranceNotMet { .. } | Error::CostLimit(_))) => first.or(Err(e)),
        Err(e) => Err(e),
    }
}

fn branch_for(z: Complex64, lower: bool) -> Branch {
    if lower {
        Branch::LowerRay
    } else {
        Branch::UpperRay
    }
    .pick_real_axis(z)
}

impl Branch {
    fn pick_real_axis(self, z: Complex64) -> Branch {
        if z.im == 0.0 && z.re > 0.0 {
            Branch::RealAxis
        } else {
            self
        }
    }
}

/// `F_+(z)` for `Im z >= 0`, upper square-root branch.
pub fn f_plus(mus: &[f64], z: Complex64) -> Result<Complex64> {
    f_value(mus, z, false, FMethod::Split).map(|f| f.value)
}

/// `F_-(z)` for `Im z <= 0`, lower square-root branch.
pub fn f_minus(mus: &[f64], z: Complex64) -> Result<Complex64> {
    f_value(mus, z, true, FMethod::Split).map(|f| f.value)
}

/// `F_+` or `F_-` with error bookkeeping, by either evaluation method.
pub fn f_value(mus: &[f64], z: Complex64, lower_branch: bool, method: FMethod) -> Result<FValue> {
    if mus.is_empty() || mus.iter().any(|m| *m == 0.0 || !m.is_finite()) {
        return Err(Error::InvalidParameter("multipliers mu_j must be finite and nonzero".into()));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidParameter("z must be finite".into()));
    }
    if (!lower_branch && z.im < 0.0) || (lower_branch && z.im > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "z = {z} is outside the closed {} half plane",
            if lower_branch { "lower" } else { "upper" }
        )));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(FValue {
            value: Complex64::new(0.5f64.powi(mus.len() as i32), 0.0),
            abs_error: 0.0,
            magnitude: 0.0,
            precision: Precision::Exact,
        });
    }
    check_pole(mus, z)?;
    match method {
        FMethod::Split => {
            let kind = FKind::Mus { mus: mus.to_vec(), z };
            eval_adaptive(&kind, branch_for(z, lower_branch), 1e-10).map_err(|e| map_divergence(e, z))
        }
        FMethod::RayQuadrature => f_by_rays(mus, z, lower_branch),
    }
}

fn f_by_rays(mus: &[f64], z: Complex64, lower_branch: bool) -> Result<FValue> {
    let (omega, hp) = if lower_branch {
        (Complex64::new(1.0, 1.0), HalfPlane::Lower)
    } else {
        (Complex64::new(1.0, -1.0), HalfPlane::Upper)
    };
    let cfg = QuadratureConfig::default();
    let neg: Vec<f64> = mus.iter().map(|m| -m).collect();
    let a = ray_integral(&RayIntegralProblem::new(mus.to_vec(), z, omega, hp)?, &cfg)?;
    let b = ray_integral(&RayIntegralProblem::new(neg, z, omega, hp)?, &cfg)?;
    let k = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    Ok(FValue {
        value: (a.value + b.value) * k,
        abs_error: (a.abs_error_estimate + b.abs_error_estimate) * k,
        magnitude: (a.value.norm() + b.value.norm()) * k,
        precision: Precision::Double,
    })
}

/// Volume of the simplex described by `req`.
pub fn volume(req: &VolumeRequest) -> Result<VolumeResult> {
    let kappa = req.kappa;
    if !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!("curvature must be finite, got {kappa}")));
    }
    if kappa == 0.0 {
        return Err(Error::ZeroCurvature);
    }
    if !(req.tolerance > 0.0 && req.tolerance < 1.0) {
        return Err(Error::InvalidParameter(format!("tolerance must lie in (0, 1), got {}", req.tolerance)));
    }
    let d = req.dim();
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {d}")));
    }
    let kind = match &req.geometry {
        Geometry::Orthocentric(p) => {
            let k0 = kappa_min(p);
            if kappa < k0 {
                return Err(Error::CurvatureBelowBound { kappa, kappa_min: k0 });
            }
            if kappa == p.s() {
                // Every factor is Phi(0) = 1/2.
                let v = sphere_area(d + 1) * kappa.powf(-(d as f64) / 2.0) * 0.5f64.powi(d as i32 + 1);
                return Ok(VolumeResult {
                    volume: v,
                    abs_error: 4.0 * f64::EPSILON * v,
                    residual_imag: 0.0,
                    branch: Branch::RealAxis,
                    precision: Precision::Exact,
                    condition: 1.0,
                });
            }
            FKind::Ortho { taus: p.taus().to_vec(), kappa }
        }
        Geometry::RegularHyperbolic(spec) => {
            if spec.kappa() != kappa {
                return Err(Error::InvalidParameter(format!(
                    "request curvature {kappa} differs from the simplex curvature {}",
                    spec.kappa()
                )));
            }
            FKind::Regular { d, x: spec.scaled_length() }
        }
        Geometry::IdealRegular(_) => {
            if kappa > 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "ideal simplices need kappa < 0, got {kappa}"
                )));
            }
            FKind::Regular { d, x: None }
        }
    };

    let (z, mus_for_rays) = match &kind {
        FKind::Ortho { taus, kappa } => {
            let s: f64 = taus.iter().map(|t| t * t).sum();
            let mus: Vec<f64> = taus.iter().map(|t| t / s).collect();
            let z = Complex64::new(kappa - s, 0.0);
            check_pole(&mus, z)?;
            (z, mus)
        }
        FKind::Regular { d, x } => {
            let lambda = match x {
                None => 1.0 / *d as f64,
                Some(x) => 1.0 / (*d as f64 + 1.0 / x.cosh()),
            };
            (Complex64::new(-1.0, 0.0), vec![lambda.sqrt(); d + 1])
        }
        FKind::Mus { .. } => unreachable!(),
    };
    let branch = branch_for(z, req.use_lower_branch);

    // Convert a relative volume tolerance into one on F; the constant
    // prefactor does not change relative errors.
    let f = match req.method {
        FMethod::Split => eval_adaptive(&kind, branch, req.tolerance).map_err(|e| map_divergence(e, z))?,
        FMethod::RayQuadrature => {
            if branch == Branch::RealAxis {
                eval_split::<f64>(&kind, branch)?
            } else {
                f_by_rays(&mus_for_rays, z, req.use_lower_branch)?
            }
        }
    };

    let dd = d as f64;
    let area = sphere_area(d + 1);
    let (v, scale) = if kappa < 0.0 {
        // sqrt(kappa)^d = (+-i)^d |kappa|^{d/2}
        let unit = if req.use_lower_branch { Complex64::new(0.0, -1.0) } else { Complex64::new(0.0, 1.0) };
        let mag = (-kappa).powf(dd / 2.0);
        (f.value * area / (unit.powu(d as u32) * mag), area / mag)
    } else {
        let mag = kappa.powf(dd / 2.0);
        (f.value * area / mag, area / mag)
    };
    let abs_error = f.abs_error * scale;
    let volume = v.re;
    if abs_error > req.tolerance * volume.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::ToleranceNotMet {
            best_re: v.re,
            best_im: v.im,
            estimate: abs_error,
            requested: req.tolerance,
        });
    }
    Ok(VolumeResult {
        volume,
        abs_error,
        residual_imag: v.im.abs(),
        branch,
        precision: f.precision,
        condition: if f.value.norm() > 0.0 { f.magnitude / f.value.norm() } else { f64::INFINITY },
    })
}

/// `|Vol_{d,kappa}(l) - |kappa|^{-d/2} Vol_{d,-1}(l sqrt|kappa|)|` for a finite side length.
pub fn kappa_scaling_check(spec: &RegularSimplexSpec) -> Result<f64> {
    let l = match spec.side_length() {
        crate::simplex_geometry::SideLength::Finite(l) => l,
        crate::simplex_geometry::SideLength::Ideal => {
            return Err(Error::InvalidParameter("kappa scaling check needs a finite side length".into()))
        }
    };
    let kappa = spec.kappa();
    let here = volume(&VolumeRequest::regular(*spec))?;
    if kappa == -1.0 {
        return Ok(0.0);
    }
    let unit = RegularSimplexSpec::new(
        spec.d(),
        crate::simplex_geometry::SideLength::Finite(l * (-kappa).sqrt()),
        -1.0,
    )?;
    let there = volume(&VolumeRequest::regular(unit))?;
    Ok((here.volume - (-kappa).powf(-(spec.d() as f64) / 2.0) * there.volume).abs())
}
