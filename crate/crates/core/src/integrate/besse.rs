//! Relaxation scheme for the focusing continuum NLS
//! `i u_t + u_xx + μ |u|^{2p} u = 0` with periodic boundary conditions.
//!
//! The nonlinearity is carried by a staggered auxiliary field,
//! `ψ^{n+1/2} = 2 |uⁿ|^{2p} - ψ^{n-1/2}` (initialized `ψ^{-1/2} = |u⁰|^{2p}`),
//! followed by the linearly implicit Crank-Nicolson step
//! `i (u^{n+1}-uⁿ)/Δt + ½ ∂ₓₓ(u^{n+1}+uⁿ) + ½ μ ψ^{n+1/2} (u^{n+1}+uⁿ) = 0`
//! with the second-order centred `∂ₓₓ`. Each step solves one periodic
//! tridiagonal system (Thomas elimination plus a Sherman-Morrison corner
//! correction).
//!
//! The scheme conserves the mass `h Σ |u|²` exactly, so a collapsing
//! solution does not overflow; it saturates into grid-scale oscillation.
//! The estimated lifespan is stamped at the last sample before overflow/NaN
//! or before that onset, detected when the rms cell jump becomes comparable
//! to the amplitude: `sqrt(Σ|u_{j+1}-u_j|²/N) / sup|u| >=` the threshold
//! [`GRID_SCALE_ONSET`]. The ratio is sampling-cadence independent; it sits
//! around `1e-3` while the solution stays resolved and jumps past `2e-2`
//! within one or two samples of the collapse epoch. Any threshold in
//! `[0.01, 0.02]` moves the stamp by at most one sample.

use super::{Blowup, BlowupCause, StepDiagnostics, TimeSeries};
use crate::fmath::FloatExt;
use crate::lattice::{Boundary, ComplexField, NormKind};
use crate::scalar::pow_p;
use crate::{Error, Result};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Solves a cyclic tridiagonal system with constant off-diagonal `off`,
/// diagonal `diag`, and wrap entries `A[0][n-1] = A[n-1][0] = off`.
fn cyclic_tridiag_solve(
    diag: &[Complex64],
    off: Complex64,
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = diag.len();
    debug_assert!(n >= 3);
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] = diag[0] - gamma;
    d[n - 1] = diag[n - 1] - off * off / gamma;

    let solve = |d: &[Complex64], r: &[Complex64]| -> Result<Vec<Complex64>> {
        // Thomas elimination with constant off-diagonals
        let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        let mut denom = d[0];
        if denom.norm_sqr() == 0.0 {
            return Err(Error::LinearSolveFailure);
        }
        c_prime[0] = off / denom;
        x[0] = r[0] / denom;
        for i in 1..n {
            denom = d[i] - off * c_prime[i - 1];
            if denom.norm_sqr() == 0.0 {
                return Err(Error::LinearSolveFailure);
            }
            c_prime[i] = off / denom;
            x[i] = (r[i] - off * x[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] -= c_prime[i] * next;
        }
        Ok(x)
    };

    let y = solve(&d, rhs)?;
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    u[0] = gamma;
    u[n - 1] = off;
    let z = solve(&d, &u)?;
    // v = (1, 0, ..., 0, off/gamma)
    let v_dot = |w: &[Complex64]| w[0] + (off / gamma) * w[n - 1];
    let factor = v_dot(&y) / (Complex64::new(1.0, 0.0) + v_dot(&z));
    Ok(y.iter().zip(&z).map(|(yi, zi)| yi - factor * zi).collect())
}

/// Onset threshold for the rms-cell-jump-to-amplitude ratio.
pub const GRID_SCALE_ONSET: f64 = 0.02;

fn h1_seminorm(u: &[Complex64], h: f64) -> f64 {
    let n = u.len();
    let s: f64 = (0..n)
        .map(|j| {
            let d = u[(j + 1) % n] - u[j];
            d.norm_sqr()
        })
        .sum();
    FloatExt::sqrt(s / h)
}

/// `sqrt(Σ|u_{j+1}-u_j|²/N) / sup|u|`: the rms cell jump relative to the
/// amplitude; `O(h)` on resolved profiles, `O(1)` on grid-scale noise.
fn grid_scale_ratio(u: &[Complex64]) -> f64 {
    let n = u.len();
    let s: f64 = (0..n)
        .map(|j| (u[(j + 1) % n] - u[j]).norm_sqr())
        .sum();
    let sup = u.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if sup == 0.0 {
        0.0
    } else {
        FloatExt::sqrt(s / n as f64) / sup
    }
}

/// Evolves the continuum NLS from the periodic samples `u0` until `t_end`
/// or until the lifespan stamp triggers. Records the mass and the
/// H¹-seminorm per sample.
pub fn besse_nls_evolve(
    u0: &ComplexField,
    mu: f64,
    p: f64,
    dt: f64,
    t_end: f64,
    sample_every: usize,
) -> Result<TimeSeries> {
    if u0.grid().boundary() != Boundary::Periodic {
        return Err(Error::PeriodicOnly("the relaxation scheme"));
    }
    if !(dt > 0.0) || sample_every == 0 {
        return Err(Error::InvalidConfig("dt and sample_every must be positive"));
    }
    let grid = *u0.grid();
    let n = grid.n_nodes();
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let off = Complex64::new(0.5 * inv_h2, 0.0);
    let i_over_dt = Complex64::new(0.0, 1.0 / dt);
    let overflow = 1e8f64;

    let mut series = TimeSeries::new(
        vec![NormKind::l2_weighted(), NormKind::sup()],
        vec![String::from("mass"), String::from("h1_seminorm")],
    );
    let mass = |u: &[Complex64]| h * u.iter().map(|z| z.norm_sqr()).sum::<f64>();

    let mut u: Vec<Complex64> = u0.values().to_vec();
    let mut psi_half: Vec<f64> = u.iter().map(|z| pow_p(z.norm_sqr(), p)).collect();
    let mass0 = mass(&u);

    let h1_0 = h1_seminorm(u0.values(), h);
    let record = |series: &mut TimeSeries, t: f64, u: &[Complex64]| {
        let f = ComplexField::from_values_unchecked(grid, u.to_vec());
        series.times.push(t);
        series.norms[0].push(crate::lattice::norm(&f, NormKind::l2_weighted()));
        series.norms[1].push(crate::lattice::norm(&f, NormKind::sup()));
        let m = mass(u);
        series.conserved[0].push(m);
        series.max_rel_drift[0] = series.max_rel_drift[0]
            .max((m - mass0).abs() / mass0.abs().max(1e-300));
        let h1 = h1_seminorm(u, h);
        series.conserved[1].push(h1);
        series.max_rel_drift[1] = series.max_rel_drift[1]
            .max((h1 - h1_0).abs() / h1_0.abs().max(1e-300));
        series.diagnostics.push(StepDiagnostics::default());
    };

    record(&mut series, 0.0, &u);
    let mut prev_sample_t = 0.0f64;

    let steps = FloatExt::round(t_end / dt) as u64;
    for step in 1..=steps {
        // staggered nonlinearity update
        for (ps, z) in psi_half.iter_mut().zip(&u) {
            *ps = 2.0 * pow_p(z.norm_sqr(), p) - *ps;
        }
        // assemble A u^{n+1} = b with A = (i/dt) I + (1/2) M,
        // M = Dxx + mu diag(psi)
        let mut diag = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for j in 0..n {
            let m_diag = -2.0 * inv_h2 + mu * psi_half[j];
            diag.push(i_over_dt + 0.5 * m_diag);
            let lap = (u[(j + 1) % n] + u[(j + n - 1) % n]) * inv_h2 + u[j] * m_diag;
            rhs.push(i_over_dt * u[j] - 0.5 * lap);
        }
        let next = cyclic_tridiag_solve(&diag, off, &rhs)?;

        let bad = next
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite() || z.norm_sqr() > overflow * overflow);
        if bad {
            let cause = if next.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                BlowupCause::Nan
            } else {
                BlowupCause::Overflow
            };
            let t_last = (step - 1) as f64 * dt;
            if series.times.last() != Some(&t_last) {
                record(&mut series, t_last, &u);
            }
            series.blowup = Some(Blowup { time: t_last, cause });
            return Ok(series);
        }

        u = next;
        series.steps_total += 1;
        let t = step as f64 * dt;

        if step % sample_every as u64 == 0 || step == steps {
            if grid_scale_ratio(&u) >= GRID_SCALE_ONSET {
                // oscillation onset: the lifespan is the previous sample
                record(&mut series, t, &u);
                series.blowup = Some(Blowup {
                    time: prev_sample_t,
                    cause: BlowupCause::OscillationOnset,
                });
                return Ok(series);
            }
            record(&mut series, t, &u);
            prev_sample_t = t;
        }
    }
    Ok(series)
}
