//! Orthocentric simplices: parameters, admissible curvature, side lengths,
//! the regular-simplex parameterization and an explicit vertex realization.
//!
//! A simplex in orthocentric position with parameters `tau_0..tau_d` has
//! Klein-model vertices `v_j` with Gram matrix `<v_j, v_k> = -1/s + delta_jk/tau_j^2`,
//! `s = sum tau_j^2`. Its orthocenter sits at the origin.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// `cosh` overflows past this; larger `l sqrt(-kappa)` is treated as ideal.
pub const IDEAL_SWITCH: f64 = 710.0;

#[derive(Clone, Debug, PartialEq)]
pub struct OrthocentricParams {
    taus: Vec<f64>,
    s: f64,
}

impl OrthocentricParams {
    pub fn new(taus: Vec<f64>) -> Result<Self> {
        if taus.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "need at least 3 parameters (d >= 2), got {}",
                taus.len()
            )));
        }
        if let Some(t) = taus.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(Error::InvalidParameter(format!("parameters must be positive and finite, got {t}")));
        }
        let s = taus.iter().map(|t| t * t).sum();
        Ok(Self { taus, s })
    }

    pub fn equal(d: usize, tau: f64) -> Result<Self> {
        Self::new(vec![tau; d + 1])
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    /// `s = sum tau_j^2`.
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.taus.len() - 1
    }

    pub fn is_equal(&self) -> bool {
        self.taus.iter().all(|t| *t == self.taus[0])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurvatureKind {
    Hyperbolic,
    Spherical,
}

/// A nonzero sectional curvature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Curvature(f64);

impl Curvature {
    pub fn new(kappa: f64) -> Result<Self> {
        if kappa == 0.0 {
            return Err(Error::ZeroCurvature);
        }
        if !kappa.is_finite() {
            return Err(Error::InvalidParameter(format!("curvature must be finite, got {kappa}")));
        }
        Ok(Self(kappa))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn kind(self) -> CurvatureKind {
        if self.0 < 0.0 {
            CurvatureKind::Hyperbolic
        } else {
            CurvatureKind::Spherical
        }
    }

    /// Whether the simplex with parameters `p` fits in the closed Klein ball.
    pub fn admits(self, p: &OrthocentricParams) -> bool {
        self.0 >= kappa_min(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SideLength {
    Finite(f64),
    Ideal,
}

impl SideLength {
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Self::Ideal);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse side length '{s}'")))?;
        if v.is_infinite() && v > 0.0 {
            Ok(Self::Ideal)
        } else {
            Ok(Self::Finite(v))
        }
    }
}

impl std::fmt::Display for SideLength {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Finite(l) => write!(f, "{l}"),
            Self::Ideal => write!(f, "inf"),
        }
    }
}

/// A regular hyperbolic simplex of dimension `d` with side length `l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegularSimplexSpec {
    d: usize,
    side_length: SideLength,
    kappa: f64,
}

impl RegularSimplexSpec {
    pub fn new(d: usize, side_length: SideLength, kappa: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {d}")));
        }
        if let SideLength::Finite(l) = side_length {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidParameter(format!("side length must be positive, got {l}")));
            }
        }
        if kappa == 0.0 {
            return Err(Error::ZeroCurvature);
        }
        if !(kappa < 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "regular simplices are parameterized for kappa < 0, got {kappa}"
            )));
        }
        Ok(Self { d, side_length, kappa })
    }

    pub fn ideal(d: usize, kappa: f64) -> Result<Self> {
        Self::new(d, SideLength::Ideal, kappa)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn side_length(&self) -> SideLength {
        self.side_length
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `l sqrt(-kappa)`, or `None` for ideal simplices and those past the cosh range.
    pub fn scaled_length(&self) -> Option<f64> {
        match self.side_length {
            SideLength::Finite(l) => {
                let x = l * (-self.kappa).sqrt();
                (x <= IDEAL_SWITCH).then_some(x)
            }
            SideLength::Ideal => None,
        }
    }
}

/// `kappa_0 = -min_j tau_j^2 s / (s - tau_j^2)`.
pub fn kappa_min(p: &OrthocentricParams) -> f64 {
    let s = p.s();
    -p.taus()
        .iter()
        .map(|t| t * t * s / (s - t * t))
        .fold(f64::INFINITY, f64::min)
}

/// Hyperbolic distance between vertices `j` and `k` at curvature `kappa` in `(kappa_0, 0)`.
pub fn side_length(p: &OrthocentricParams, j: usize, k: usize, kappa: f64) -> Result<f64> {
    let n = p.taus().len();
    if j >= n || k >= n || j == k {
        return Err(Error::InvalidParameter(format!("vertex indices ({j}, {k}) invalid for {n} vertices")));
    }
    if !(kappa < 0.0) {
        return Err(Error::InvalidParameter(format!("side lengths require kappa < 0, got {kappa}")));
    }
    let k0 = kappa_min(p);
    if kappa <= k0 {
        return Err(Error::CurvatureBelowBound { kappa, kappa_min: k0 });
    }
    let s = p.s();
    let b = s - kappa;
    let cj = kappa * s / (p.taus()[j] * p.taus()[j]);
    let ck = kappa * s / (p.taus()[k] * p.taus()[k]);
    let aj = b + cj;
    let ak = b + ck;
    let root = (aj * ak).sqrt();
    // cosh(l sqrt(-kappa)) - 1 without cancellation: every product below is
    // >= 0, and the grouping is symmetric in (j, k).
    let num = 0.5 * ((-cj * ak - ck * aj) - (cj + ck) * b);
    let t = num / ((b + root) * root);
    if !(t >= 0.0) {
        return Err(Error::SideLengthDomain { argument: 1.0 + t });
    }
    let acosh = (t + (t * (t + 2.0)).sqrt()).ln_1p();
    Ok(acosh / (-kappa).sqrt())
}

/// Equal parameters realizing the regular simplex of `spec`.
pub fn regular_taus(spec: &RegularSimplexSpec) -> Result<OrthocentricParams> {
    let d = spec.d() as f64;
    let mk = -spec.kappa();
    let tau2 = match spec.scaled_length() {
        None => mk * d / (d + 1.0),
        Some(x) => {
            let ch = x.cosh();
            let half = (0.5 * x).sinh();
            mk * (1.0 + d * ch) / ((d + 1.0) * 2.0 * half * half)
        }
    };
    OrthocentricParams::equal(spec.d(), tau2.sqrt())
}

/// `lambda = cosh(l sqrt(-kappa)) / (1 + d cosh(l sqrt(-kappa)))`, equal to `1/d` when ideal.
pub fn lambda_of(spec: &RegularSimplexSpec) -> f64 {
    let d = spec.d() as f64;
    match spec.scaled_length() {
        None => 1.0 / d,
        Some(x) => 1.0 / (d + 1.0 / x.cosh()),
    }
}

/// Vertices in `d`-dimensional Klein coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexRealization {
    vertices: Vec<Vec<f64>>,
}

impl VertexRealization {
    /// `d + 1` points in `R^d`.
    pub fn from_points(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.len();
        if n < 2 || vertices.iter().any(|v| v.len() + 1 != n) {
            return Err(Error::InvalidParameter("expected d + 1 points in R^d".into()));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Largest squared norm, which fixes the admissible curvature `-1/max |v|^2`.
    pub fn max_norm_sqr(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.iter().map(|x| x * x).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn edge_matrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        let v0 = &self.vertices[0];
        DMatrix::from_fn(d, d, |r, c| self.vertices[c + 1][r] - v0[r])
    }
}

/// Places `e_j/tau_j - H`, `H = tau/s`, in the hyperplane orthogonal to `tau`
/// and maps that hyperplane isometrically onto `R^d` with a Householder reflection.
pub fn realize_vertices(p: &OrthocentricParams) -> Result<VertexRealization> {
    let n = p.taus().len();
    let d = n - 1;
    let s = p.s();
    let tau = DVector::from_column_slice(p.taus());
    let u = &tau / s.sqrt();
    // Reflection sending u to -sign(u_d) e_d.
    let mut w = u.clone();
    let sign = if u[d] >= 0.0 { 1.0 } else { -1.0 };
    w[d] += sign;
    let wn = w.norm_squared();
    let mut vertices = Vec::with_capacity(n);
    let mut off_plane: f64 = 0.0;
    for j in 0..n {
        let mut x = -&tau / s;
        x[j] += 1.0 / p.taus()[j];
        let y = &x - &w * (2.0 * w.dot(&x) / wn);
        off_plane = off_plane.max(y[d].abs() / y.norm().max(f64::MIN_POSITIVE));
        vertices.push(y.as_slice()[..d].to_vec());
    }
    if off_plane > 1e-10 {
        return Err(Error::RankDeficient);
    }
    let v = VertexRealization { vertices };
    let sv = v.edge_matrix().singular_values();
    let (lo, hi) = sv.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    if !(lo > 1e-13 * hi) {
        return Err(Error::RankDeficient);
    }
    Ok(v)
}

/// Largest deviation from `<v_j, v_k> = -1/s + delta_jk/tau_j^2`.
pub fn gram_residual(p: &OrthocentricParams, v: &VertexRealization) -> f64 {
    let s = p.s();
    let mut worst: f64 = 0.0;
    for (j, a) in v.vertices().iter().enumerate() {
        for (k, b) in v.vertices().iter().enumerate() {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            let mut want = -1.0 / s;
            if j == k {
                want += 1.0 / (p.taus()[j] * p.taus()[j]);
            }
            worst = worst.max((dot - want).abs());
        }
    }
    worst
}

/// `|det(v_1 - v_0, ..., v_d - v_0)| / d!`.
pub fn euclidean_volume(v: &VertexRealization) -> f64 {
    let d = v.dim();
    let det = v.edge_matrix().determinant().abs();
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    det / fact
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kappa_min_examples() {
        let p = OrthocentricParams::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert!((kappa_min(&p) + 1.5).abs() < 1e-15);
        let p = OrthocentricParams::new(vec![1.0, 2.0, 2.0]).unwrap();
        assert!((kappa_min(&p) + 9.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn side_length_examples() {
        let p = OrthocentricParams::new(vec![1.0, 1.0, 1.0]).unwrap();
        let l = side_length(&p, 0, 1, -1.0).unwrap();
        // Klein distance: cosh l = (1 - <u,v>)/sqrt((1-|u|^2)(1-|v|^2)) = (4/3)/(1/3).
        assert!((l - 4f64.acosh()).abs() < 1e-14);
        assert!((l - 2.0634370688955608).abs() < 1e-14);
        assert!(side_length(&p, 0, 0, -1.0).is_err());
        assert!(matches!(side_length(&p, 0, 1, -2.0), Err(Error::CurvatureBelowBound { .. })));
    }

    #[test]
    fn side_length_equal_taus_closed_form() {
        let p = OrthocentricParams::equal(4, 0.7).unwrap();
        let kappa = -0.3;
        let s = p.s();
        let want = ((s - kappa) / (s + kappa * 4.0)).acosh() / (-kappa).sqrt();
        let first = side_length(&p, 0, 1, kappa).unwrap();
        assert!((first - want).abs() < 1e-12 * want);
        for j in 0..5 {
            for k in 0..5 {
                if j != k {
                    assert_eq!(side_length(&p, j, k, kappa).unwrap(), first);
                }
            }
        }
    }

    #[test]
    fn side_length_diverges_at_bound() {
        let p = OrthocentricParams::new(vec![0.5, 1.0, 1.3, 2.0]).unwrap();
        let k0 = kappa_min(&p);
        let near = side_length(&p, 0, 2, k0 * (1.0 - 1e-12)).unwrap();
        let mid = side_length(&p, 0, 2, k0 * 0.5).unwrap();
        assert!(near > 5.0 * mid);
        let other = side_length(&p, 1, 2, k0 * (1.0 - 1e-12)).unwrap();
        assert!(other < near / 3.0);
    }

    #[test]
    fn regular_lambda_examples() {
        let spec = RegularSimplexSpec::ideal(4, -1.0).unwrap();
        assert_eq!(lambda_of(&spec), 0.25);
        let spec = RegularSimplexSpec::new(2, SideLength::Finite(2f64.acosh()), -1.0).unwrap();
        assert!((lambda_of(&spec) - 0.4).abs() < 1e-15);
        let spec = RegularSimplexSpec::new(5, SideLength::Finite(1e-6), -1.0).unwrap();
        assert!((lambda_of(&spec) - 1.0 / 6.0).abs() < 1e-12);
        let far = RegularSimplexSpec::new(3, SideLength::Finite(800.0), -1.0).unwrap();
        assert_eq!(lambda_of(&far), 1.0 / 3.0);
        assert!(RegularSimplexSpec::new(3, SideLength::Finite(0.0), -1.0).is_err());
        assert!(RegularSimplexSpec::new(1, SideLength::Ideal, -1.0).is_err());
        assert!(RegularSimplexSpec::new(3, SideLength::Ideal, 1.0).is_err());
    }

    #[test]
    fn regular_taus_limits() {
        let ideal = regular_taus(&RegularSimplexSpec::ideal(3, -2.0).unwrap()).unwrap();
        assert!((ideal.taus()[0].powi(2) - 2.0 * 3.0 / 4.0).abs() < 1e-15);
        let long = regular_taus(&RegularSimplexSpec::new(3, SideLength::Finite(40.0), -2.0).unwrap()).unwrap();
        assert!((long.taus()[0] / ideal.taus()[0] - 1.0).abs() < 1e-15);
        let short = regular_taus(&RegularSimplexSpec::new(3, SideLength::Finite(1e-4), -2.0).unwrap()).unwrap();
        assert!(short.taus()[0] > 1e3);
    }

    #[test]
    fn regular_round_trip_grid() {
        for d in 2..=10 {
            for &kappa in &[-0.5, -1.0, -2.0] {
                for i in 0..=40 {
                    let l = 1e-3 * (2e4f64).powf(i as f64 / 40.0);
                    let spec = RegularSimplexSpec::new(d, SideLength::Finite(l), kappa).unwrap();
                    let p = regular_taus(&spec).unwrap();
                    let back = side_length(&p, 0, d, kappa).unwrap();
                    // tau(l) flattens like exp(-x), x = l sqrt(-kappa), so a rounded tau
                    // only fixes l to about eps * exp(x).
                    let x = l * (-kappa).sqrt();
                    let tol = 1e-10f64.max(1e-15 * x.exp() / x);
                    assert!((back - l).abs() <= tol * l, "d={d} kappa={kappa} l={l}: {back}");
                }
            }
        }
        let spec = RegularSimplexSpec::new(3, SideLength::Finite(2f64.acosh()), -1.0).unwrap();
        let p = regular_taus(&spec).unwrap();
        assert!((side_length(&p, 1, 2, -1.0).unwrap() - 2f64.acosh()).abs() < 1e-12);
    }

    #[test]
    fn equilateral_triangle() {
        let p = OrthocentricParams::new(vec![1.0, 1.0, 1.0]).unwrap();
        let v = realize_vertices(&p).unwrap();
        assert!(gram_residual(&p, &v) < 1e-15);
        for x in v.vertices() {
            let n2: f64 = x.iter().map(|a| a * a).sum();
            assert!((n2 - 2.0 / 3.0).abs() < 1e-15);
        }
        // Edge sqrt(2) gives area sqrt(3)/2.
        assert!((euclidean_volume(&v) - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn equal_tau_distances() {
        let p = OrthocentricParams::equal(5, 1.7).unwrap();
        let v = realize_vertices(&p).unwrap();
        for a in 0..6 {
            for b in 0..a {
                let d2: f64 = v.vertices()[a].iter().zip(&v.vertices()[b]).map(|(x, y)| (x - y).powi(2)).sum();
                assert!((d2 - 2.0 / (1.7f64 * 1.7)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn euclidean_volume_examples() {
        let v = VertexRealization::from_points(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((euclidean_volume(&v) - 0.5).abs() < 1e-16);
        let v = VertexRealization::from_points(vec![vec![1.0, 2.0], vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(euclidean_volume(&v), 0.0);
        assert!(VertexRealization::from_points(vec![vec![0.0], vec![1.0], vec![2.0]]).is_err());
    }

    #[test]
    fn klein_ball_bound_matches_kappa_min() {
        let p = OrthocentricParams::new(vec![0.4, 0.9, 1.1, 2.5]).unwrap();
        let v = realize_vertices(&p).unwrap();
        assert!((-1.0 / v.max_norm_sqr() / kappa_min(&p) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn curvature_type() {
        assert!(matches!(Curvature::new(0.0), Err(Error::ZeroCurvature)));
        let c = Curvature::new(-1.0).unwrap();
        assert_eq!(c.kind(), CurvatureKind::Hyperbolic);
        let p = OrthocentricParams::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert!(c.admits(&p));
        assert!(!Curvature::new(-1.6).unwrap().admits(&p));
        assert_eq!(SideLength::parse("inf").unwrap(), SideLength::Ideal);
        assert_eq!(SideLength::parse("2.5").unwrap(), SideLength::Finite(2.5));
    }

    fn taus_strategy() -> impl Strategy<Value = Vec<f64>> {
        (2usize..=8).prop_flat_map(|d| prop::collection::vec(0.05f64..5.0, d + 1))
    }

    proptest! {
        #[test]
        fn kappa_min_scales_quadratically(taus in taus_strategy(), c in 0.1f64..10.0) {
            let p = OrthocentricParams::new(taus.clone()).unwrap();
            let q = OrthocentricParams::new(taus.iter().map(|t| t * c).collect()).unwrap();
            prop_assert!((kappa_min(&q) / (c * c * kappa_min(&p)) - 1.0).abs() < 1e-13);
        }

        #[test]
        fn gram_identities_hold(taus in taus_strategy()) {
            let p = OrthocentricParams::new(taus).unwrap();
            let v = realize_vertices(&p).unwrap();
            let scale = p.taus().iter().map(|t| 1.0 / (t * t)).fold(0.0, f64::max);
            prop_assert!(gram_residual(&p, &v) <= 1e-12 * scale.max(1.0));
        }

        #[test]
        fn side_lengths_are_symmetric(taus in taus_strategy(), frac in 0.01f64..0.99) {
            let p = OrthocentricParams::new(taus).unwrap();
            let kappa = kappa_min(&p) * frac;
            let a = side_length(&p, 0, 1, kappa).unwrap();
            let b = side_length(&p, 1, 0, kappa).unwrap();
            prop_assert!(a > 0.0);
            prop_assert_eq!(a, b);
        }
    }
}
