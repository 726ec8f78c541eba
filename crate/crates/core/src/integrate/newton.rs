//! Jacobian-free complex-step Newton with a matrix-free restarted GMRES
//! inner solve.
//!
//! Jacobian-vector products are formed as `J(x)·v ≈ Im[F(x + i s v)] / s`
//! with a tiny step `s`. The residual systems here are real, so the
//! complexification is exact up to machine precision: the formula has no
//! subtractive cancellation and any `s ≪ 1` yields the full-precision
//! directional derivative.

use super::{IntegratorConfig, StepDiagnostics};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// A real residual map `R^m -> R^m` that is also evaluable on complexified
/// inputs (every arithmetic step defined for complex scalars).
pub trait SplitResidual {
    fn dim(&self) -> usize;
    fn eval_f64(&self, z: &[f64], out: &mut [f64]);
    fn eval_complex(&self, z: &[Complex64], out: &mut [Complex64]);
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0f64, f64::max)
}

fn two_norm(v: &[f64]) -> f64 {
    crate::fmath::FloatExt::sqrt(v.iter().map(|x| x * x).sum::<f64>())
}

/// Complex-step Jacobian-vector product at the linearization point `x`.
fn jacobian_vec<R: SplitResidual>(
    residual: &R,
    x: &[f64],
    v: &[f64],
    s: f64,
    zc: &mut Vec<Complex64>,
    outc: &mut Vec<Complex64>,
) -> Vec<f64> {
    zc.clear();
    zc.extend(x.iter().zip(v).map(|(&xi, &vi)| Complex64::new(xi, s * vi)));
    outc.clear();
    outc.resize(x.len(), Complex64::new(0.0, 0.0));
    residual.eval_complex(zc, outc);
    outc.iter().map(|w| w.im / s).collect()
}

const GMRES_RESTART: usize = 30;

/// Restarted GMRES for `A d = b` with a matrix-free operator. Returns the
/// best iterate; `true` when the relative residual target was met.
fn gmres(
    mut matvec: impl FnMut(&[f64]) -> Vec<f64>,
    b: &[f64],
    tol_rel: f64,
    max_iter: usize,
) -> (Vec<f64>, bool) {
    let n = b.len();
    let mut x = vec![0.0; n];
    let b_norm = two_norm(b);
    if b_norm == 0.0 {
        return (x, true);
    }
    let target = tol_rel * b_norm;
    let mut total = 0usize;

    loop {
        // residual of the current iterate (x = 0 on the first cycle)
        let mut r = if total == 0 {
            b.to_vec()
        } else {
            let ax = matvec(&x);
            b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect()
        };
        let beta = two_norm(&r);
        if !beta.is_finite() {
            return (x, false);
        }
        if beta <= target {
            return (x, true);
        }

        let m = GMRES_RESTART.min(n);
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        for ri in r.iter_mut() {
            *ri /= beta;
        }
        basis.push(r);
        let mut h = vec![vec![0.0f64; m]; m + 1];
        let mut cs = vec![0.0f64; m];
        let mut sn = vec![0.0f64; m];
        let mut g = vec![0.0f64; m + 1];
        g[0] = beta;
        let mut cols = 0usize;
        let mut converged = false;

        for j in 0..m {
            let mut w = matvec(&basis[j]);
            total += 1;
            // modified Gram-Schmidt
            for i in 0..=j {
                let hij: f64 = w.iter().zip(&basis[i]).map(|(a, b)| a * b).sum();
                h[i][j] = hij;
                for (wk, vk) in w.iter_mut().zip(&basis[i]) {
                    *wk -= hij * vk;
                }
            }
            let hnext = two_norm(&w);
            h[j + 1][j] = hnext;
            if !hnext.is_finite() {
                return (x, false);
            }

            // apply accumulated Givens rotations to the new column
            for i in 0..j {
                let t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            let denom = crate::fmath::FloatExt::hypot(h[j][j], h[j + 1][j]);
            if denom == 0.0 {
                cs[j] = 1.0;
                sn[j] = 0.0;
            } else {
                cs[j] = h[j][j] / denom;
                sn[j] = h[j + 1][j] / denom;
            }
            h[j][j] = cs[j] * h[j][j] + sn[j] * h[j + 1][j];
            h[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];
            cols = j + 1;

            let res_est = g[j + 1].abs();
            let breakdown = hnext <= 1e-300;
            if !breakdown {
                for wk in w.iter_mut() {
                    *wk /= hnext;
                }
                basis.push(w);
            }
            if res_est <= target || breakdown || total >= max_iter {
                converged = res_est <= target || breakdown;
                break;
            }
        }

        // back-substitute R y = g and accumulate x += V y
        let mut y = vec![0.0f64; cols];
        for i in (0..cols).rev() {
            let mut s = g[i];
            for k in (i + 1)..cols {
                s -= h[i][k] * y[k];
            }
            y[i] = s / h[i][i];
        }
        for (i, yi) in y.iter().enumerate() {
            for (xk, vk) in x.iter_mut().zip(&basis[i]) {
                *xk += yi * vk;
            }
        }
        if !x.iter().all(|v| v.is_finite()) {
            return (x, false);
        }
        if converged || total >= max_iter {
            return (x, converged);
        }
    }
}

/// Newton iteration with complex-step Jacobian-vector products.
///
/// Returns the final iterate and diagnostics; `accepted` is true when the
/// sup-norm residual reached `cfg.newton_tol` within `cfg.newton_max_iter`
/// updates. `newton_iterations` counts the linear solves performed.
pub fn newton_jfnk<R: SplitResidual>(
    residual: &R,
    guess: &[f64],
    cfg: &IntegratorConfig,
) -> (Vec<f64>, StepDiagnostics) {
    let n = residual.dim();
    debug_assert_eq!(guess.len(), n);
    let mut x = guess.to_vec();
    let mut r = vec![0.0f64; n];
    let mut zc: Vec<Complex64> = Vec::with_capacity(n);
    let mut outc: Vec<Complex64> = Vec::with_capacity(n);

    let mut iterations = 0u32;
    loop {
        residual.eval_f64(&x, &mut r);
        let res = sup_norm(&r);
        if !res.is_finite() {
            return (
                x,
                StepDiagnostics {
                    newton_iterations: iterations,
                    final_residual: res,
                    accepted: false,
                },
            );
        }
        if res <= cfg.newton_tol {
            return (
                x,
                StepDiagnostics {
                    newton_iterations: iterations,
                    final_residual: res,
                    accepted: true,
                },
            );
        }
        if iterations as usize >= cfg.newton_max_iter {
            return (
                x,
                StepDiagnostics {
                    newton_iterations: iterations,
                    final_residual: res,
                    accepted: false,
                },
            );
        }

        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let (d, _ok) = gmres(
            |v| jacobian_vec(residual, &x, v, cfg.complex_step, &mut zc, &mut outc),
            &rhs,
            cfg.krylov_tol,
            cfg.krylov_max_iter,
        );
        if !d.iter().all(|v| v.is_finite()) {
            return (
                x,
                StepDiagnostics {
                    newton_iterations: iterations,
                    final_residual: res,
                    accepted: false,
                },
            );
        }
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += di;
        }
        iterations += 1;
    }
}
