//! Scalar abstraction shared by the `f64` and double-double code paths.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, MulAssign, Neg, SubAssign};

use num_complex::Complex;
use num_traits::Num;

use crate::double_double::DoubleDouble;

pub trait Real:
    Num
    + Copy
    + PartialOrd
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Unit roundoff.
    const EPSILON: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn abs(self) -> Self;
    fn pi() -> Self;

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    fn powi(self, n: u32) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }
}

impl Real for f64 {
    const EPSILON: f64 = f64::EPSILON / 2.0;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
}

impl Real for DoubleDouble {
    const EPSILON: f64 = DoubleDouble::EPSILON;

    fn from_f64(x: f64) -> Self {
        DoubleDouble::new(x)
    }
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
    fn exp(self) -> Self {
        DoubleDouble::exp(self)
    }
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        DoubleDouble::sin_cos(self)
    }
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
    fn pi() -> Self {
        DoubleDouble::pi()
    }
}

pub fn cabs<T: Real>(z: Complex<T>) -> T {
    let a = z.re.abs();
    let b = z.im.abs();
    let (big, small) = if a > b { (a, b) } else { (b, a) };
    if big == T::zero() {
        return T::zero();
    }
    let r = small / big;
    big * (T::one() + r * r).sqrt()
}

/// Approximate modulus in `f64`, used for convergence tests and error bounds.
pub fn cnorm<T: Real>(z: Complex<T>) -> f64 {
    z.re.to_f64().hypot(z.im.to_f64())
}

pub fn cexp<T: Real>(z: Complex<T>) -> Complex<T> {
    let m = z.re.exp();
    if z.im == T::zero() {
        return Complex::new(m, T::zero());
    }
    let (s, c) = z.im.sin_cos();
    Complex::new(m * c, m * s)
}

/// Principal square root, branch cut on the negative real axis.
pub fn csqrt<T: Real>(z: Complex<T>) -> Complex<T> {
    let two = T::from_f64(2.0);
    if z.im == T::zero() {
        return if z.re >= T::zero() {
            Complex::new(z.re.sqrt(), T::zero())
        } else {
            Complex::new(T::zero(), (-z.re).sqrt())
        };
    }
    let r = cabs(z);
    if z.re >= T::zero() {
        let a = ((r + z.re) / two).sqrt();
        Complex::new(a, z.im / (two * a))
    } else {
        let b = ((r - z.re) / two).sqrt();
        let b = if z.im < T::zero() { -b } else { b };
        Complex::new(z.im / (two * b), b)
    }
}

pub fn cpowi<T: Real>(z: Complex<T>, n: u32) -> Complex<T> {
    let mut base = z;
    let mut acc = Complex::new(T::one(), T::zero());
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        k >>= 1;
    }
    acc
}

pub fn lift<T: Real>(z: num_complex::Complex64) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

pub fn lower<T: Real>(z: Complex<T>) -> num_complex::Complex64 {
    num_complex::Complex64::new(z.re.to_f64(), z.im.to_f64())
}

/// Kahan-Babuska compensated sum of complex terms.
#[derive(Clone, Copy, Debug)]
pub struct CompensatedSum<T: Real> {
    sum: Complex<T>,
    comp: Complex<T>,
}

impl<T: Real> Default for CompensatedSum<T> {
    fn default() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { sum: z, comp: z }
    }
}

impl<T: Real> CompensatedSum<T> {
    pub fn add(&mut self, x: Complex<T>) {
        self.sum.re = neumaier(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = neumaier(self.sum.im, x.im, &mut self.comp.im);
    }

    pub fn value(&self) -> Complex<T> {
        self.sum + self.comp
    }
}

fn neumaier<T: Real>(s: T, x: T, c: &mut T) -> T {
    let t = s + x;
    if s.abs() >= x.abs() {
        *c += (s - t) + x;
    } else {
        *c += (x - t) + s;
    }
    t
}
