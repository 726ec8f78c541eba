//! Scalar abstraction that lets the split real-valued right-hand sides be
//! evaluated both on `f64` and on complexified inputs.
//!
//! The Jacobian-free complex-step Newton method forms products `J(x)·v` as
//! `Im[F(x + i s v)] / s`. That requires every arithmetic step of the
//! residual to be defined for complex scalars, so the right-hand sides are
//! written once, generically over [`Scalar`], and instantiated at `f64`
//! (plain evaluation) and at `Complex64` (complex-step evaluation).

use crate::fmath::FloatExt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use num_complex::Complex64;

pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_re(x: f64) -> Self;
    fn zero() -> Self;
    fn one() -> Self;
    /// Principal-branch power with the `0^e := 0` convention for `e > 0`.
    fn powf(self, e: f64) -> Self;
    /// Integer power by binary exponentiation (holomorphic, exact for the
    /// complex-step path).
    fn powu(self, e: u32) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn from_re(x: f64) -> Self {
        x
    }
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn powf(self, e: f64) -> Self {
        FloatExt::powf(self, e)
    }
    #[inline]
    fn powu(self, e: u32) -> Self {
        pow_by_squaring(self, e)
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn powf(self, e: f64) -> Self {
        if self.re == 0.0 && self.im == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::powf(self, e)
        }
    }
    #[inline]
    fn powu(self, e: u32) -> Self {
        pow_by_squaring(self, e)
    }
}

#[inline]
fn pow_by_squaring<S: Scalar>(base: S, mut e: u32) -> S {
    let mut acc = S::one();
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b;
        }
        b = b * b;
        e >>= 1;
    }
    acc
}

/// `x^p` for real exponent `p >= 1`, dispatching to the exact integer-power
/// chain when `p` is a small integer.
#[inline]
pub fn pow_p<S: Scalar>(x: S, p: f64) -> S {
    let r = FloatExt::round(p);
    if (p - r).abs() < 1e-12 && (1.0..=16.0).contains(&r) {
        x.powu(r as u32)
    } else {
        x.powf(p)
    }
}

/// Complex pair with components of generic scalar type; mirrors complex
/// arithmetic so the split systems can be written from the complex form of
/// each equation.
#[derive(Clone, Copy, Debug)]
pub struct CPair<S> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> CPair<S> {
    #[inline]
    pub fn new(re: S, im: S) -> Self {
        Self { re, im }
    }

    #[inline]
    pub fn from_complex(z: Complex64) -> Self {
        Self::new(S::from_re(z.re), S::from_re(z.im))
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero())
    }

    #[inline]
    pub fn modulus_sq(self) -> S {
        self.re * self.re + self.im * self.im
    }

    /// Multiplication by `i`.
    #[inline]
    pub fn mul_i(self) -> Self {
        Self::new(-self.im, self.re)
    }

    #[inline]
    pub fn scale(self, a: S) -> Self {
        Self::new(self.re * a, self.im * a)
    }
}

impl<S: Scalar> Add for CPair<S> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl<S: Scalar> Sub for CPair<S> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl<S: Scalar> Mul for CPair<S> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}
