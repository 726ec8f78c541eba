//! Generalized Ablowitz-Ladik (gAL) and generalized discrete nonlinear
//! Schrödinger (gDNLS) lattices over nonzero backgrounds.
//!
//! The crate provides:
//!
//! * complex lattice fields, discrete difference operators and the `ℓʳ`
//!   norm family ([`lattice`]);
//! * right-hand sides of the gAL/gDNLS equations and of their modified
//!   (background-subtracted) variants, together with the nonlinear
//!   operators entering the contraction estimates ([`models`]);
//! * exact solutions (one-soliton, discrete Peregrine) and the initial
//!   condition families used in experiments ([`analytic`]);
//! * time integration by the two-stage Gauss-Legendre collocation method
//!   with a Jacobian-free complex-step Newton solver, an explicit RK4
//!   cross-check, and a relaxation scheme for the continuum NLS limit
//!   ([`integrate`]);
//! * the conserved functionals of both lattices and drift monitors
//!   ([`conserve`]);
//! * evaluation of the analytical well-posedness radii, minimum guaranteed
//!   lifespans and proximity constants ([`theory`]).
//!
//! The crate is `no_std` (with `alloc`); all floating-point transcendentals
//! go through `libm`.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod conserve;
mod error;
mod fmath;
pub mod integrate;
pub mod lattice;
pub mod models;
pub mod scalar;
pub mod theory;

pub use error::{Error, Result};
pub use num_complex::Complex64;
