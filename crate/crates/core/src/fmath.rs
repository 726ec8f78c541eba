//! `f64` transcendentals routed through `libm` so the crate stays `no_std`.
//!
//! In test builds std is linked and the inherent methods shadow these, which
//! is harmless: both evaluate the same functions.

pub(crate) trait FloatExt {
    fn sqrt(self) -> f64;
    fn exp(self) -> f64;
    fn sin(self) -> f64;
    fn cos(self) -> f64;
    fn sinh(self) -> f64;
    fn cosh(self) -> f64;
    fn tanh(self) -> f64;
    fn powf(self, e: f64) -> f64;
    fn hypot(self, other: f64) -> f64;
    fn round(self) -> f64;
}

impl FloatExt for f64 {
    #[inline]
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    #[inline]
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    #[inline]
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    #[inline]
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    #[inline]
    fn sinh(self) -> f64 {
        libm::sinh(self)
    }
    #[inline]
    fn cosh(self) -> f64 {
        libm::cosh(self)
    }
    #[inline]
    fn tanh(self) -> f64 {
        libm::tanh(self)
    }
    #[inline]
    fn powf(self, e: f64) -> f64 {
        libm::pow(self, e)
    }
    #[inline]
    fn hypot(self, other: f64) -> f64 {
        libm::hypot(self, other)
    }
    #[inline]
    fn round(self) -> f64 {
        libm::round(self)
    }
}

/// `sech(x) = 2 e^{-|x|} / (1 + e^{-2|x|})`, guarded against overflow of
/// `cosh` at the lattice edges.
#[inline]
pub(crate) fn sech(x: f64) -> f64 {
    let e = FloatExt::exp(-x.abs());
    2.0 * e / (1.0 + e * e)
}
