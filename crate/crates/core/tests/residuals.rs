//! Exact-solution residual checks: the one-soliton and the discrete
//! Peregrine profile substituted into the AL lattice with their analytic
//! time derivatives.

use alnls_core::analytic::{
    one_soliton, one_soliton_dt, peregrine, peregrine_dt, PeregrineParams, SolitonParams,
};
use alnls_core::lattice::{distance, Boundary, LatticeGrid, NormKind};
use alnls_core::models::{rhs, ModelSpec};

/// Sup-norm residual of `i du/dt + kappa Δu + ½ μ |u|² (u₊+u₋) = 0` given
/// the field and its analytic time derivative.
fn al_residual(
    u: &alnls_core::lattice::ComplexField,
    dudt: &alnls_core::lattice::ComplexField,
    mu: f64,
) -> f64 {
    let spec = ModelSpec::gal(mu, 1.0).unwrap();
    // rhs returns du/dt of the lattice equation; the residual is the
    // difference with the analytic derivative.
    let model_dudt = rhs(u, 0.0, &spec).unwrap();
    distance(&model_dudt, dudt, NormKind::sup()).unwrap()
}

#[test]
fn one_soliton_rhs_matches_analytic_derivative() {
    // alpha = 0, beta = 1, h = 1, mu = 1 on a 400-node lattice
    let grid = LatticeGrid::new(400, 1.0, Boundary::Periodic).unwrap();
    let params = SolitonParams::new(0.0, 1.0, 1.0, 1.0).unwrap();
    let u = one_soliton(&grid, 0.0, &params).unwrap();
    let dudt = one_soliton_dt(&grid, 0.0, &params).unwrap();
    let r = al_residual(&u, &dudt, 1.0);
    assert!(r <= 1e-10, "soliton residual {r:e}");
}

#[test]
fn one_soliton_residual_moving_frame() {
    let grid = LatticeGrid::new(400, 1.0, Boundary::Periodic).unwrap();
    let params = SolitonParams::new(0.3, 0.5, 1.0, 1.0).unwrap();
    for &t in &[0.0, 0.7, 2.3] {
        let u = one_soliton(&grid, t, &params).unwrap();
        let dudt = one_soliton_dt(&grid, t, &params).unwrap();
        let r = al_residual(&u, &dudt, 1.0);
        assert!(r <= 1e-10, "t={t}: residual {r:e}");
    }
}

/// Infinite-lattice AL residual of the Peregrine profile by direct
/// substitution: neighbours come from the closed form (the algebraic
/// `1/n²` tails make a periodic wrap of the stencil inexact).
fn peregrine_direct_residual(params: &PeregrineParams, mu: f64, half_span: i64, t: f64) -> f64 {
    let h = params.h;
    let kappa = 1.0 / (h * h);
    let mut worst = 0.0f64;
    for n in -half_span..=half_span {
        let eta = n as f64;
        let u0 = alnls_core::analytic::peregrine_value(params, eta, t);
        let up = alnls_core::analytic::peregrine_value(params, eta + 1.0, t);
        let um = alnls_core::analytic::peregrine_value(params, eta - 1.0, t);
        // centred complex-step-free analytic derivative via the closed form:
        // d/dt of amp (1 - num/den) e^{i omega t}
        let q2 = params.q * params.q;
        let h2 = h * h;
        let omega = 2.0 * q2 / h2;
        let tau = t / h2;
        let den = 1.0 + 4.0 * q2 * eta * eta + 16.0 * q2 * q2 * (1.0 + q2) * tau * tau;
        let den_dt = 32.0 * q2 * q2 * (1.0 + q2) * tau / h2;
        let num = 4.0 * (1.0 + q2) * num_complex::Complex64::new(1.0, 4.0 * q2 * tau);
        let num_dt = 4.0 * (1.0 + q2) * num_complex::Complex64::new(0.0, 4.0 * q2 / h2);
        let f = num_complex::Complex64::new(1.0, 0.0) - num / den;
        let f_dt = -(num_dt * den - num * den_dt) / (den * den);
        let amp = params.background_amplitude();
        let dudt = amp
            * (num_complex::Complex64::new(0.0, omega) * f + f_dt)
            * num_complex::Complex64::from_polar(1.0, omega * t);
        let res = num_complex::Complex64::i() * dudt
            + kappa * (up + um - 2.0 * u0)
            + 0.5 * mu * u0.norm_sqr() * (up + um);
        worst = worst.max(res.norm());
    }
    worst
}

#[test]
fn peregrine_residual() {
    let params = PeregrineParams::new(1.0, 1.0, 1.0).unwrap();
    for &t in &[0.0, 0.5] {
        let r = peregrine_direct_residual(&params, 1.0, 400, t);
        assert!(r <= 1e-9, "t={t}: residual {r:e}");
    }
}

#[test]
fn peregrine_residual_off_unit_parameters() {
    let params = PeregrineParams::new(0.7, 0.5, 2.0).unwrap();
    let r = peregrine_direct_residual(&params, 2.0, 600, 0.25);
    assert!(r <= 1e-9, "residual {r:e}");
}

#[test]
fn peregrine_dt_consistent_with_value() {
    // the exported derivative matches a high-order finite difference of the
    // exported values
    let grid = LatticeGrid::new(64, 1.0, Boundary::Periodic).unwrap();
    let params = PeregrineParams::new(0.8, 1.0, 1.0).unwrap();
    let t = 0.4;
    let eps = 1e-5;
    let up = peregrine(&grid, t + eps, &params).unwrap();
    let um = peregrine(&grid, t - eps, &params).unwrap();
    let dudt = peregrine_dt(&grid, t, &params).unwrap();
    for j in 0..64 {
        let fd = (up.values()[j] - um.values()[j]) / (2.0 * eps);
        assert!((fd - dudt.values()[j]).norm() < 1e-8);
    }
}
