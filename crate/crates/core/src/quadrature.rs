//! One-dimensional quadrature: globally adaptive Gauss-Kronrod (G10/K21) on
//! finite intervals and the exp-sinh double-exponential rule on half lines.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};

use num_complex::{Complex, Complex64};

use crate::real::{cnorm, CompensatedSum, Real};

/// Values that can be integrated by [`gauss_kronrod`].
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadOutcome<V> {
    pub value: V,
    pub abs_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525627218,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

fn kronrod21<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> (V, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[10];
    let mut g = V::zero();
    for i in 0..10 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k = k + s * WGK[i];
        if i % 2 == 1 {
            g = g + s * WG[i / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).magnitude())
}

struct Piece<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

impl<V> PartialEq for Piece<V> {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl<V> Eq for Piece<V> {}
impl<V> PartialOrd for Piece<V> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<V> Ord for Piece<V> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive Gauss-Kronrod quadrature of `f` over `[a, b]`.
///
/// The interval with the largest error estimate is bisected until the total
/// estimate falls below `max(abs_tol, rel_tol * |I|)` or `max_subdivisions`
/// bisections have been made. The error estimate is `|K21 - G10|` per piece.
pub fn gauss_kronrod<V, F>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> QuadOutcome<V>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    if a == b {
        return QuadOutcome { value: V::zero(), abs_error: 0.0, evaluations: 0, converged: true };
    }
    let (v, e) = kronrod21(&mut f, a, b);
    let mut evals = 21;
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    let mut splits = 0;
    loop {
        if err <= abs_tol.max(rel_tol * total.magnitude()) {
            break;
        }
        if splits >= max_subdivisions {
            break;
        }
        let p = heap.pop().expect("heap is never empty");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a.min(p.b) || m >= p.a.max(p.b) {
            heap.push(p);
            break;
        }
        let (v1, e1) = kronrod21(&mut f, p.a, m);
        let (v2, e2) = kronrod21(&mut f, m, p.b);
        evals += 42;
        splits += 1;
        total = total - p.value + v1 + v2;
        err = err - p.error + e1 + e2;
        heap.push(Piece { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, error: e2 });
    }
    // Re-sum to shed drift from the running updates.
    let mut value = V::zero();
    let mut error = 0.0;
    let mut pieces: Vec<_> = heap.into_vec();
    pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
    for p in &pieces {
        value = value + p.value;
        error += p.error;
    }
    let converged = error <= abs_tol.max(rel_tol * value.magnitude());
    QuadOutcome { value, abs_error: error, evaluations: evals, converged }
}

#[derive(Clone, Copy, Debug)]
pub struct DeOutcome<T: Real> {
    pub value: Complex<T>,
    pub abs_error: f64,
    /// Sum of `|w_k f(t_k)|` at the finest level, for conditioning estimates.
    pub magnitude: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const S_MAX: f64 = 6.0;

/// Exp-sinh quadrature of `f` over `[0, inf)` with `t = scale * exp(pi/2 sinh s)`.
///
/// Handles integrands with algebraic or exponential decay and integrable
/// endpoint singularities at 0. The step is halved until two successive
/// levels agree to `max(abs_tol, rel_tol * |I|)`; the returned error is that
/// difference, which overestimates the error of the finer level.
pub fn exp_sinh<T, F>(mut f: F, scale: T, abs_tol: f64, rel_tol: f64, max_level: u32) -> DeOutcome<T>
where
    T: Real,
    F: FnMut(T) -> Complex<T>,
{
    let half_pi = T::pi() * T::from_f64(0.5);
    let mut evals = 0usize;
    let mut node = |s: f64, evals: &mut usize| -> Option<Complex<T>> {
        let st = T::from_f64(s);
        let es = st.exp();
        let sinh = (es - T::one() / es) * T::from_f64(0.5);
        let cosh = (es + T::one() / es) * T::from_f64(0.5);
        let e = (half_pi * sinh).exp();
        let t = scale * e;
        if !(t.to_f64() > 0.0) || !t.to_f64().is_finite() {
            return None;
        }
        let w = scale * half_pi * cosh * e;
        *evals += 1;
        let v = f(t) * w;
        if v.re.to_f64().is_finite() && v.im.to_f64().is_finite() {
            Some(v)
        } else {
            None
        }
    };

    // Level 0 fixes the truncation window [lo, hi].
    let h0 = 0.5;
    let mut sum = CompensatedSum::<T>::default();
    let mut mag = 0.0;
    let first = node(0.0, &mut evals).unwrap_or(Complex::new(T::zero(), T::zero()));
    sum.add(first);
    mag += cnorm(first);
    let tiny = T::EPSILON * 1e-3;
    let mut bounds = [0.0f64; 2];
    for (side, dir) in [(0usize, -1.0f64), (1, 1.0)] {
        let mut k = 1;
        let mut quiet = 0;
        loop {
            let s = dir * h0 * k as f64;
            if s.abs() > S_MAX {
                break;
            }
            match node(s, &mut evals) {
                Some(v) => {
                    sum.add(v);
                    let m = cnorm(v);
                    mag += m;
                    bounds[side] = s;
                    if m <= tiny * mag {
                        quiet += 1;
                        if quiet >= 2 {
                            break;
                        }
                    } else {
                        quiet = 0;
                    }
                }
                None => break,
            }
            k += 1;
        }
    }
    let (lo, hi) = (bounds[0], bounds[1]);
    let mut prev = sum.value() * T::from_f64(h0);
    let mut h = h0;
    let mut abs_error = f64::INFINITY;
    let mut converged = false;
    let mut value = prev;
    for level in 1..=max_level {
        h *= 0.5;
        let mut k = 1i64;
        loop {
            let s = lo + h * k as f64;
            if s > hi {
                break;
            }
            if let Some(v) = node(s, &mut evals) {
                sum.add(v);
                mag += cnorm(v);
            }
            k += 2;
        }
        value = sum.value() * T::from_f64(h);
        abs_error = cnorm(value - prev);
        if level >= 2 && abs_error <= abs_tol.max(rel_tol * cnorm(value)) {
            converged = true;
            break;
        }
        prev = value;
    }
    DeOutcome { value, abs_error, magnitude: mag * h, evaluations: evals, converged }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double_double::DoubleDouble;
    use crate::real::lower;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let s: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        assert!((s - 2.0).abs() < 1e-15);
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn kronrod_is_exact_for_degree_31() {
        for deg in 0..=31u32 {
            let mut f = |x: f64| x.powi(deg as i32);
            let (v, _) = kronrod21(&mut f, -1.0, 1.0);
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((v - want).abs() < 1e-14, "degree {deg}: {v}");
        }
        for deg in 0..=19i32 {
            let (_, e) = kronrod21(&mut |x: f64| x.powi(deg), -1.0, 1.0);
            assert!(e < 1e-14, "gauss part inexact at degree {deg}");
        }
    }

    #[test]
    fn adaptive_handles_peaks() {
        let r = gauss_kronrod(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 1e-12, 500);
        let want = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!(r.converged);
        assert!((r.value - want).abs() < 1e-9 * want);
    }

    #[test]
    fn complex_oscillatory() {
        let r = gauss_kronrod(|x: f64| Complex64::new(0.0, x).exp(), 0.0, 50.0, 1e-13, 1e-13, 500);
        let want = (Complex64::new(0.0, 50.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((r.value - want).norm() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let r = gauss_kronrod(|x: f64| x.sqrt().recip(), 0.0, 1.0, 1e-14, 1e-14, 3);
        assert!(!r.converged);
    }

    #[test]
    fn exp_sinh_gaussian_double_double() {
        let r = exp_sinh(
            |t: DoubleDouble| Complex::new((-(t * t)).exp(), DoubleDouble::new(0.0)),
            DoubleDouble::new(1.0),
            1e-31,
            1e-31,
            9,
        );
        let want = DoubleDouble::pi().sqrt() / DoubleDouble::new(2.0);
        assert!(r.converged);
        assert!((r.value.re - want).to_f64().abs() < 1e-30);
    }

    #[test]
    fn exp_sinh_algebraic_and_singular() {
        let r = exp_sinh(|t: f64| Complex64::new(1.0 / ((1.0 + t) * (1.0 + t)), 0.0), 1.0, 1e-15, 1e-15, 8);
        assert!((r.value.re - 1.0).abs() < 1e-14);
        let r = exp_sinh(|t: f64| Complex64::new((-t).exp() / t.sqrt(), 0.0), 1.0, 1e-15, 1e-15, 8);
        assert!((r.value.re - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        let r = exp_sinh(
            |t: DoubleDouble| {
                let d = DoubleDouble::new(1.0) + t;
                Complex::new(DoubleDouble::new(1.0) / (d * d * d), DoubleDouble::new(0.0))
            },
            DoubleDouble::new(1.0),
            1e-31,
            1e-31,
            9,
        );
        assert!((lower(r.value).re - 0.5).abs() < 1e-16);
        assert!((r.value.re - DoubleDouble::new(0.5)).to_f64().abs() < 1e-29);
    }
}
