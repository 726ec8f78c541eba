//! Exact solutions of the Ablowitz-Ladik lattice and the initial-condition
//! families used by the experiments.

use crate::fmath::{sech, FloatExt};
use crate::lattice::{ComplexField, LatticeGrid};
use crate::{Error, Result};
use num_complex::Complex64;

/// Parameters of the AL one-soliton
/// `u_n(t) = (√2 sinh(βh) / (h√μ)) sech[β(hn - ct)] e^{i(αhn - ωt)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolitonParams {
    pub alpha: f64,
    pub beta: f64,
    pub h: f64,
    pub mu: f64,
    /// Phase frequency `ω = -2[cos(αh)cosh(βh) - 1] / h²`.
    pub omega: f64,
    /// Envelope velocity `c = 2 sin(αh) sinh(βh) / (βh²)`, with the
    /// removable singularity at `β = 0` resolved by its limit
    /// `c = 2 sin(αh) / h`.
    pub c: f64,
}

impl SolitonParams {
    pub fn new(alpha: f64, beta: f64, h: f64, mu: f64) -> Result<Self> {
        if !(-core::f64::consts::PI..=core::f64::consts::PI).contains(&alpha) {
            return Err(Error::InvalidModel("soliton alpha must lie in [-pi, pi]"));
        }
        if !(beta >= 0.0) {
            return Err(Error::InvalidModel("soliton beta must be non-negative"));
        }
        if !(h > 0.0) || !(mu > 0.0) {
            return Err(Error::InvalidModel("soliton h and mu must be positive"));
        }
        let omega = -2.0 * (FloatExt::cos(alpha * h) * FloatExt::cosh(beta * h) - 1.0) / (h * h);
        let c = if beta == 0.0 {
            2.0 * FloatExt::sin(alpha * h) / h
        } else {
            2.0 * FloatExt::sin(alpha * h) * FloatExt::sinh(beta * h) / (beta * h * h)
        };
        Ok(Self {
            alpha,
            beta,
            h,
            mu,
            omega,
            c,
        })
    }

    /// Peak amplitude `√2 sinh(βh) / (h√μ)`.
    pub fn amplitude(&self) -> f64 {
        FloatExt::sqrt(2.0) * FloatExt::sinh(self.beta * self.h) / (self.h * FloatExt::sqrt(self.mu))
    }
}

fn check_spacing(grid: &LatticeGrid, h: f64) -> Result<()> {
    if (grid.spacing() - h).abs() > 1e-12 * h.max(1.0) {
        return Err(Error::InvalidGrid("grid spacing does not match parameters"));
    }
    Ok(())
}

/// One-soliton sampled on a grid at time `t`.
pub fn one_soliton(grid: &LatticeGrid, t: f64, params: &SolitonParams) -> Result<ComplexField> {
    check_spacing(grid, params.h)?;
    let a = params.amplitude();
    Ok(ComplexField::from_fn(*grid, |n| {
        let x = grid.node_coord(n);
        let theta = params.beta * (x - params.c * t);
        let phase = params.alpha * x - params.omega * t;
        a * sech(theta) * Complex64::from_polar(1.0, phase)
    }))
}

/// Analytic time derivative of [`one_soliton`].
pub fn one_soliton_dt(grid: &LatticeGrid, t: f64, params: &SolitonParams) -> Result<ComplexField> {
    check_spacing(grid, params.h)?;
    let a = params.amplitude();
    Ok(ComplexField::from_fn(*grid, |n| {
        let x = grid.node_coord(n);
        let theta = params.beta * (x - params.c * t);
        let phase = params.alpha * x - params.omega * t;
        let s = sech(theta);
        let envelope_dt = params.beta * params.c * s * FloatExt::tanh(theta);
        a * (Complex64::new(envelope_dt, 0.0) + Complex64::new(0.0, -params.omega) * s)
            * Complex64::from_polar(1.0, phase)
    }))
}

/// Parameters of the discrete Peregrine soliton over a background of
/// modulus `√2 q / (h√μ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeregrineParams {
    pub q: f64,
    pub h: f64,
    pub mu: f64,
}

impl PeregrineParams {
    pub fn new(q: f64, h: f64, mu: f64) -> Result<Self> {
        if !(q > 0.0) || !(h > 0.0) || !(mu > 0.0) {
            return Err(Error::InvalidModel("Peregrine q, h, mu must be positive"));
        }
        Ok(Self { q, h, mu })
    }

    /// Background amplitude `√2 q / (h√μ)`.
    pub fn background_amplitude(&self) -> f64 {
        FloatExt::sqrt(2.0) * self.q / (self.h * FloatExt::sqrt(self.mu))
    }
}

/// Pointwise Peregrine value at centred index `eta = x/h` and time `t`
/// (the infinite-lattice profile, independent of any grid).
pub fn peregrine_value(params: &PeregrineParams, eta: f64, t: f64) -> Complex64 {
    peregrine_at(params, eta, t)
}

/// Pointwise analytic time derivative of [`peregrine_value`].
pub fn peregrine_value_dt(params: &PeregrineParams, eta: f64, t: f64) -> Complex64 {
    let q2 = params.q * params.q;
    let h2 = params.h * params.h;
    let omega = 2.0 * q2 / h2;
    let tau = t / h2;
    let den = 1.0 + 4.0 * q2 * eta * eta + 16.0 * q2 * q2 * (1.0 + q2) * tau * tau;
    let den_dt = 32.0 * q2 * q2 * (1.0 + q2) * tau / h2;
    let num = 4.0 * (1.0 + q2) * Complex64::new(1.0, 4.0 * q2 * tau);
    let num_dt = 4.0 * (1.0 + q2) * Complex64::new(0.0, 4.0 * q2 / h2);
    let f = Complex64::new(1.0, 0.0) - num / den;
    let f_dt = -(num_dt * den - num * den_dt) / (den * den);
    params.background_amplitude()
        * (Complex64::new(0.0, omega) * f + f_dt)
        * Complex64::from_polar(1.0, omega * t)
}

fn peregrine_at(params: &PeregrineParams, eta: f64, t: f64) -> Complex64 {
    let q = params.q;
    let q2 = q * q;
    let tau = t / (params.h * params.h);
    let den = 1.0 + 4.0 * q2 * eta * eta + 16.0 * q2 * q2 * (1.0 + q2) * tau * tau;
    let num = 4.0 * (1.0 + q2) * Complex64::new(1.0, 4.0 * q2 * tau);
    let amp = params.background_amplitude();
    amp * (Complex64::new(1.0, 0.0) - num / den) * Complex64::from_polar(1.0, 2.0 * q2 * tau)
}

/// Discrete Peregrine soliton sampled on a grid at time `t`.
///
/// The amplitude prefactor is `√2 q / (h√μ)`, matching the `√2` of the
/// one-soliton; with it the profile solves the AL lattice exactly (the
/// asymptotic plane wave `√2 q/(h√μ) e^{2iq²t/h²}` satisfies the constant
/// dispersion relation).
pub fn peregrine(grid: &LatticeGrid, t: f64, params: &PeregrineParams) -> Result<ComplexField> {
    check_spacing(grid, params.h)?;
    Ok(ComplexField::from_fn(*grid, |n| {
        peregrine_at(params, grid.centered_index(n), t)
    }))
}

/// Analytic time derivative of [`peregrine`].
pub fn peregrine_dt(grid: &LatticeGrid, t: f64, params: &PeregrineParams) -> Result<ComplexField> {
    check_spacing(grid, params.h)?;
    let q2 = params.q * params.q;
    let h2 = params.h * params.h;
    let omega = 2.0 * q2 / h2;
    let amp = params.background_amplitude();
    Ok(ComplexField::from_fn(*grid, |n| {
        let eta = grid.centered_index(n);
        let tau = t / h2;
        let den = 1.0 + 4.0 * q2 * eta * eta + 16.0 * q2 * q2 * (1.0 + q2) * tau * tau;
        let den_dt = 32.0 * q2 * q2 * (1.0 + q2) * tau / h2;
        let num = 4.0 * (1.0 + q2) * Complex64::new(1.0, 4.0 * q2 * tau);
        let num_dt = 4.0 * (1.0 + q2) * Complex64::new(0.0, 4.0 * q2 / h2);
        let f = Complex64::new(1.0, 0.0) - num / den;
        let f_dt = -(num_dt * den - num * den_dt) / (den * den);
        amp * (Complex64::new(0.0, omega) * f + f_dt) * Complex64::from_polar(1.0, omega * t)
    }))
}

/// `u_n(0) = q₀ (1 + i sech(x_n/h))`: a localized perturbation of a constant
/// background of amplitude `q₀`. The sech argument is the integer-valued
/// centred index, matching the usual `h = 1` convention.
pub fn ic_sech_background(grid: &LatticeGrid, q0: f64) -> ComplexField {
    ComplexField::from_fn(*grid, |n| {
        let eta = grid.centered_index(n);
        q0 * Complex64::new(1.0, sech(eta))
    })
}

/// `u(x_n, 0) = 1 + i a sech(x_n)`: the continuum initial profile sampled at
/// the physical node coordinates.
pub fn ic_continuum_sech(grid: &LatticeGrid, a: f64) -> ComplexField {
    ComplexField::from_fn(*grid, |n| {
        let x = grid.node_coord(n);
        Complex64::new(1.0, a * sech(x))
    })
}

/// `u_n(0) = i A sech(x_n/h)`: localized data over a zero background.
pub fn ic_zero_background_sech(grid: &LatticeGrid, a: f64) -> ComplexField {
    ComplexField::from_fn(*grid, |n| {
        let eta = grid.centered_index(n);
        Complex64::new(0.0, a * sech(eta))
    })
}
