//! Right-hand sides of the four lattice equations, nonlinearity families,
//! backgrounds, and the nonlinear operators `G` and `𝒢` entering the
//! contraction estimates.
//!
//! Equations (solved for the time derivative, `κ = h⁻²`):
//!
//! * gAL:    `du_n/dt = i [κ(Δu)_n + ½ μ |u_n|^{2p} (u_{n+1}+u_{n-1})]`
//! * gDNLS:  `dU_n/dt = i [κ(ΔU)_n + γ F(|U_n|²) U_n]`
//! * modified gAL (perturbation `φ` of a rotating background `ζ`, `w = φ+ζ`):
//!   `dφ_n/dt = i [κ(Δw)_n - μ q₀^{2p} w_n + ½ μ |w_n|^{2p} (w_{n+1}+w_{n-1})]`
//! * modified gDNLS: `dΦ_n/dt = i [κ(Δw)_n + γ (F(|w_n|²) - F(q₀²)) w_n]`

use crate::fmath::FloatExt;
use crate::lattice::{neighbor, Boundary, ComplexField, LatticeGrid, NormKind};
use crate::scalar::{pow_p, CPair, Scalar};
use crate::{Error, Result};
use alloc::vec::Vec;
use num_complex::Complex64;

/// Background norm bundle used by the analytical bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BackgroundNorms {
    /// Asymptotic modulus `q₀`.
    pub q0: f64,
    /// `‖ζ‖_{ℓ∞}`.
    pub zeta_inf: f64,
    /// `‖ζ'‖_{ℓ²}`.
    pub zeta_prime_l2: f64,
    /// `‖ |ζ| - q₀ ‖_{ℓ²}`.
    pub zeta_dev_l2: f64,
    /// `‖ζ''‖_{ℓ²}`.
    pub zeta_second_l2: f64,
}

impl BackgroundNorms {
    /// Zero background (vanishing boundary conditions).
    pub fn zero() -> Self {
        Self {
            q0: 0.0,
            zeta_inf: 0.0,
            zeta_prime_l2: 0.0,
            zeta_dev_l2: 0.0,
            zeta_second_l2: 0.0,
        }
    }

    /// Constant background of modulus `q0` (all difference norms vanish).
    pub fn constant(q0: f64) -> Self {
        Self {
            q0,
            zeta_inf: q0,
            zeta_prime_l2: 0.0,
            zeta_dev_l2: 0.0,
            zeta_second_l2: 0.0,
        }
    }
}

/// Background sequence `ζ` with its discrete derivatives and cached norms.
///
/// Unlike evolution states, `ζ` is not clamped at Dirichlet boundary nodes;
/// off-lattice neighbours of `ζ` read as the boundary value.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Background {
    grid: LatticeGrid,
    zeta: Vec<Complex64>,
    zeta_prime: Vec<Complex64>,
    zeta_second: Vec<Complex64>,
    norms: BackgroundNorms,
}

impl Background {
    pub fn new(grid: LatticeGrid, zeta: Vec<Complex64>, q0: f64) -> Result<Self> {
        if zeta.len() != grid.n_nodes() {
            return Err(Error::InvalidField("background length does not match grid"));
        }
        if !(q0 >= 0.0) {
            return Err(Error::InvalidModel("q0 must be non-negative"));
        }
        let zeta_prime = clamped_backward_diff(&grid, &zeta);
        let zeta_second = clamped_backward_diff(&grid, &zeta_prime);
        let l2 = |v: &[Complex64]| FloatExt::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        let norms = BackgroundNorms {
            q0,
            zeta_inf: zeta.iter().map(|z| z.norm()).fold(0.0f64, f64::max),
            zeta_prime_l2: l2(&zeta_prime),
            zeta_dev_l2: FloatExt::sqrt(
                zeta.iter()
                    .map(|z| (z.norm() - q0) * (z.norm() - q0))
                    .sum::<f64>(),
            ),
            zeta_second_l2: l2(&zeta_second),
        };
        Ok(Self {
            grid,
            zeta,
            zeta_prime,
            zeta_second,
            norms,
        })
    }

    /// Constant background `ζ_n ≡ z0` with `q₀ = |z0|`.
    pub fn constant(grid: LatticeGrid, z0: Complex64) -> Self {
        let zeta = alloc::vec![z0; grid.n_nodes()];
        Self::new(grid, zeta, z0.norm()).expect("constant background is always valid")
    }

    #[inline]
    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    #[inline]
    pub fn zeta(&self) -> &[Complex64] {
        &self.zeta
    }

    #[inline]
    pub fn zeta_prime(&self) -> &[Complex64] {
        &self.zeta_prime
    }

    #[inline]
    pub fn zeta_second(&self) -> &[Complex64] {
        &self.zeta_second
    }

    #[inline]
    pub fn q0(&self) -> f64 {
        self.norms.q0
    }

    #[inline]
    pub fn norms(&self) -> &BackgroundNorms {
        &self.norms
    }

    /// `ζ` at a stencil neighbour; off-lattice Dirichlet neighbours read as
    /// the boundary value.
    #[inline]
    pub(crate) fn zeta_at(&self, n: usize, step: isize) -> Complex64 {
        match neighbor(&self.grid, n, step) {
            Some(j) => self.zeta[j],
            None => {
                if step < 0 {
                    self.zeta[0]
                } else {
                    self.zeta[self.grid.n_nodes() - 1]
                }
            }
        }
    }
}

/// Backward difference with the background convention: periodic wrap, or
/// boundary-value clamping at Dirichlet edges (so constant backgrounds have
/// `ζ' = 0` everywhere).
fn clamped_backward_diff(grid: &LatticeGrid, v: &[Complex64]) -> Vec<Complex64> {
    (0..v.len())
        .map(|n| match neighbor(grid, n, -1) {
            Some(j) => v[n] - v[j],
            None => Complex64::new(0.0, 0.0),
        })
        .collect()
}

/// Nonlinearity `F` of the gDNLS family, with Lipschitz data
/// `|F'(x)| <= K |x|^{p-1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum NonlinearityKind {
    /// `F(x) = x^p`, `K = p`.
    Power { p: f64 },
    /// `F(x) = x / (Λ (1 + x))`, effectively cubic (`p = 1`), `K = 1/Λ`.
    Saturable { p: f64, lambda: f64 },
}

impl NonlinearityKind {
    pub fn power(p: f64) -> Self {
        NonlinearityKind::Power { p }
    }

    #[inline]
    pub fn exponent(&self) -> f64 {
        match self {
            NonlinearityKind::Power { p } => *p,
            NonlinearityKind::Saturable { p, .. } => *p,
        }
    }

    /// Lipschitz constant used by the analytical bounds: `p` for power
    /// nonlinearities (mean-value bound), `1/Λ` for saturable ones.
    #[inline]
    pub fn lipschitz_k(&self) -> f64 {
        match self {
            NonlinearityKind::Power { p } => *p,
            NonlinearityKind::Saturable { lambda, .. } => 1.0 / lambda,
        }
    }

    #[inline]
    pub(crate) fn eval_generic<S: Scalar>(&self, x: S) -> S {
        match self {
            NonlinearityKind::Power { p } => pow_p(x, *p),
            NonlinearityKind::Saturable { lambda, .. } => {
                x / (S::from_re(*lambda) * (S::one() + x))
            }
        }
    }
}

/// `F(x)` at a non-negative real argument.
pub fn eval_f(x: f64, kind: &NonlinearityKind) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::NegativeArgument);
    }
    Ok(kind.eval_generic(x))
}

/// Which lattice equation a [`ModelSpec`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Equation {
    Gal,
    Gdnls,
    ModifiedGal,
    ModifiedGdnls,
}

/// A fully specified lattice model.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelSpec {
    pub equation: Equation,
    pub mu: f64,
    pub gamma: f64,
    pub p: f64,
    pub nonlinearity: NonlinearityKind,
    pub background: Option<Background>,
}

impl ModelSpec {
    pub fn gal(mu: f64, p: f64) -> Result<Self> {
        Self::build(Equation::Gal, mu, 0.0, NonlinearityKind::power(p), None)
    }

    pub fn gdnls(gamma: f64, nonlinearity: NonlinearityKind) -> Result<Self> {
        Self::build(Equation::Gdnls, 0.0, gamma, nonlinearity, None)
    }

    pub fn modified_gal(mu: f64, p: f64, background: Background) -> Result<Self> {
        Self::build(
            Equation::ModifiedGal,
            mu,
            0.0,
            NonlinearityKind::power(p),
            Some(background),
        )
    }

    pub fn modified_gdnls(
        gamma: f64,
        nonlinearity: NonlinearityKind,
        background: Background,
    ) -> Result<Self> {
        Self::build(Equation::ModifiedGdnls, 0.0, gamma, nonlinearity, Some(background))
    }

    fn build(
        equation: Equation,
        mu: f64,
        gamma: f64,
        nonlinearity: NonlinearityKind,
        background: Option<Background>,
    ) -> Result<Self> {
        let p = nonlinearity.exponent();
        if !(p >= 1.0) {
            return Err(Error::InvalidModel("nonlinearity exponent p must be >= 1"));
        }
        let modified = matches!(equation, Equation::ModifiedGal | Equation::ModifiedGdnls);
        if modified && background.is_none() {
            return Err(Error::InvalidModel("modified variants require a background"));
        }
        if !modified && background.is_some() {
            return Err(Error::InvalidModel("original variants forbid a background"));
        }
        Ok(Self {
            equation,
            mu,
            gamma,
            p,
            nonlinearity,
            background,
        })
    }

    /// Frequency of the asymptotic background rotation: `μ q₀^{2p}` for the
    /// gAL family, `γ F(q₀²)` for the gDNLS family.
    pub fn rotation_frequency(&self, q0: f64) -> f64 {
        match self.equation {
            Equation::Gal | Equation::ModifiedGal => self.mu * FloatExt::powf(q0, 2.0 * self.p),
            Equation::Gdnls | Equation::ModifiedGdnls => {
                self.gamma * self.nonlinearity.eval_generic(q0 * q0)
            }
        }
    }

    fn check_grid(&self, grid: &LatticeGrid) -> Result<()> {
        if let Some(bg) = &self.background {
            if bg.grid() != grid {
                return Err(Error::GridMismatch);
            }
        }
        Ok(())
    }
}

/// `du/dt` of the model at the given state, in complex arithmetic.
///
/// All four equations are autonomous; `_t` is kept for interface symmetry
/// with the integrators. On Dirichlet grids the clamped boundary nodes get a
/// zero derivative so the clamp is preserved exactly.
pub fn rhs(state: &ComplexField, _t: f64, spec: &ModelSpec) -> Result<ComplexField> {
    let grid = *state.grid();
    spec.check_grid(&grid)?;
    let n = grid.n_nodes();
    let kappa = grid.kappa();
    let u = state.values();
    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::i();

    let mut out = alloc::vec![zero; n];
    match spec.equation {
        Equation::Gal => {
            for j in 0..n {
                let up = neighbor(&grid, j, 1).map_or(zero, |k| u[k]);
                let dn = neighbor(&grid, j, -1).map_or(zero, |k| u[k]);
                let m = pow_p(u[j].norm_sqr(), spec.p);
                let x = kappa * (up + dn - 2.0 * u[j]) + 0.5 * spec.mu * m * (up + dn);
                out[j] = i * x;
            }
        }
        Equation::Gdnls => {
            for j in 0..n {
                let up = neighbor(&grid, j, 1).map_or(zero, |k| u[k]);
                let dn = neighbor(&grid, j, -1).map_or(zero, |k| u[k]);
                let f = spec.nonlinearity.eval_generic(u[j].norm_sqr());
                let x = kappa * (up + dn - 2.0 * u[j]) + spec.gamma * f * u[j];
                out[j] = i * x;
            }
        }
        Equation::ModifiedGal => {
            let bg = spec.background.as_ref().expect("validated at construction");
            let q2p = FloatExt::powf(bg.q0(), 2.0 * spec.p);
            for j in 0..n {
                let w = u[j] + bg.zeta()[j];
                let wp = neighbor(&grid, j, 1).map_or(zero, |k| u[k]) + bg.zeta_at(j, 1);
                let wm = neighbor(&grid, j, -1).map_or(zero, |k| u[k]) + bg.zeta_at(j, -1);
                let m = pow_p(w.norm_sqr(), spec.p);
                let x = kappa * (wp + wm - 2.0 * w) - spec.mu * q2p * w
                    + 0.5 * spec.mu * m * (wp + wm);
                out[j] = i * x;
            }
        }
        Equation::ModifiedGdnls => {
            let bg = spec.background.as_ref().expect("validated at construction");
            let f_q0 = spec.nonlinearity.eval_generic(bg.q0() * bg.q0());
            for j in 0..n {
                let w = u[j] + bg.zeta()[j];
                let wp = neighbor(&grid, j, 1).map_or(zero, |k| u[k]) + bg.zeta_at(j, 1);
                let wm = neighbor(&grid, j, -1).map_or(zero, |k| u[k]) + bg.zeta_at(j, -1);
                let f = spec.nonlinearity.eval_generic(w.norm_sqr());
                let x = kappa * (wp + wm - 2.0 * w) + spec.gamma * (f - f_q0) * w;
                out[j] = i * x;
            }
        }
    }
    if grid.boundary() == Boundary::Dirichlet {
        out[0] = zero;
        out[n - 1] = zero;
    }
    Ok(ComplexField::from_values_unchecked(grid, out))
}

/// The split real system: state `[r_0..r_{N-1}, s_0..s_{N-1}]` with
/// `u_n = r_n + i s_n`, evaluated generically so it accepts complexified
/// inputs for Jacobian-vector products.
///
/// Written independently of [`rhs`]; the two paths are cross-checked in
/// tests.
pub fn rhs_split<S: Scalar>(spec: &ModelSpec, grid: &LatticeGrid, z: &[S], out: &mut [S]) {
    let n = grid.n_nodes();
    debug_assert_eq!(z.len(), 2 * n);
    debug_assert_eq!(out.len(), 2 * n);
    let (re, im) = z.split_at(n);
    let kappa = S::from_re(grid.kappa());

    let state_at = |j: usize, step: isize| -> CPair<S> {
        match neighbor(grid, j, step) {
            Some(k) => CPair::new(re[k], im[k]),
            None => CPair::zero(),
        }
    };

    let mut write = |j: usize, dudt: CPair<S>| {
        out[j] = dudt.re;
        out[n + j] = dudt.im;
    };

    match spec.equation {
        Equation::Gal => {
            let half_mu = S::from_re(0.5 * spec.mu);
            for j in 0..n {
                let u = CPair::new(re[j], im[j]);
                let nb = state_at(j, 1) + state_at(j, -1);
                let lap = nb - u.scale(S::from_re(2.0));
                let m = pow_p(u.modulus_sq(), spec.p);
                let x = lap.scale(kappa) + nb.scale(half_mu * m);
                write(j, x.mul_i());
            }
        }
        Equation::Gdnls => {
            let gamma = S::from_re(spec.gamma);
            for j in 0..n {
                let u = CPair::new(re[j], im[j]);
                let nb = state_at(j, 1) + state_at(j, -1);
                let lap = nb - u.scale(S::from_re(2.0));
                let f = spec.nonlinearity.eval_generic(u.modulus_sq());
                let x = lap.scale(kappa) + u.scale(gamma * f);
                write(j, x.mul_i());
            }
        }
        Equation::ModifiedGal => {
            let bg = spec.background.as_ref().expect("validated at construction");
            let half_mu = S::from_re(0.5 * spec.mu);
            let mu_q2p = S::from_re(spec.mu * FloatExt::powf(bg.q0(), 2.0 * spec.p));
            for j in 0..n {
                let w = CPair::new(re[j], im[j]) + CPair::from_complex(bg.zeta()[j]);
                let wp = state_at(j, 1) + CPair::from_complex(bg.zeta_at(j, 1));
                let wm = state_at(j, -1) + CPair::from_complex(bg.zeta_at(j, -1));
                let nb = wp + wm;
                let lap = nb - w.scale(S::from_re(2.0));
                let m = pow_p(w.modulus_sq(), spec.p);
                let x = lap.scale(kappa) - w.scale(mu_q2p) + nb.scale(half_mu * m);
                write(j, x.mul_i());
            }
        }
        Equation::ModifiedGdnls => {
            let bg = spec.background.as_ref().expect("validated at construction");
            let gamma = S::from_re(spec.gamma);
            let f_q0 = S::from_re(
                spec.nonlinearity
                    .eval_generic(bg.q0() * bg.q0()),
            );
            for j in 0..n {
                let w = CPair::new(re[j], im[j]) + CPair::from_complex(bg.zeta()[j]);
                let wp = state_at(j, 1) + CPair::from_complex(bg.zeta_at(j, 1));
                let wm = state_at(j, -1) + CPair::from_complex(bg.zeta_at(j, -1));
                let lap = wp + wm - w.scale(S::from_re(2.0));
                let f = spec.nonlinearity.eval_generic(w.modulus_sq());
                let x = lap.scale(kappa) + w.scale(gamma * (f - f_q0));
                write(j, x.mul_i());
            }
        }
    }
    if grid.boundary() == Boundary::Dirichlet {
        out[0] = S::zero();
        out[n - 1] = S::zero();
        out[n] = S::zero();
        out[2 * n - 1] = S::zero();
    }
}

/// `G(Φ) = [F(|Φ+ζ|²) - F(q₀²)] (Φ+ζ)`, the gDNLS perturbation operator.
pub fn operator_g(
    phi: &ComplexField,
    bg: &Background,
    kind: &NonlinearityKind,
) -> Result<ComplexField> {
    if phi.grid() != bg.grid() {
        return Err(Error::GridMismatch);
    }
    let f_q0 = kind.eval_generic(bg.q0() * bg.q0());
    let values = phi
        .values()
        .iter()
        .zip(bg.zeta())
        .map(|(p, z)| {
            let w = p + z;
            (kind.eval_generic(w.norm_sqr()) - f_q0) * w
        })
        .collect();
    Ok(ComplexField::from_values_unchecked(*phi.grid(), values))
}

/// `𝒢(φ)_n = |φ_n+ζ_n|^{2p} (φ_{n+1}+φ_{n-1}+ζ_{n+1}+ζ_{n-1}) - 2 q₀^{2p} (φ_n+ζ_n)`,
/// the gAL perturbation operator.
pub fn operator_cal_g(phi: &ComplexField, bg: &Background, p: f64) -> Result<ComplexField> {
    if phi.grid() != bg.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *phi.grid();
    let n = grid.n_nodes();
    let u = phi.values();
    let zero = Complex64::new(0.0, 0.0);
    let two_q2p = 2.0 * FloatExt::powf(bg.q0(), 2.0 * p);
    let values = (0..n)
        .map(|j| {
            let w = u[j] + bg.zeta()[j];
            let nb = neighbor(&grid, j, 1).map_or(zero, |k| u[k])
                + neighbor(&grid, j, -1).map_or(zero, |k| u[k])
                + bg.zeta_at(j, 1)
                + bg.zeta_at(j, -1);
            pow_p(w.norm_sqr(), p) * nb - two_q2p * w
        })
        .collect();
    Ok(ComplexField::from_values_unchecked(grid, values))
}

/// Splits a field into the blocked real vector `[Re | Im]` of length `2N`.
pub fn split_real_imag(f: &ComplexField) -> Vec<f64> {
    let n = f.len();
    let mut out = Vec::with_capacity(2 * n);
    out.extend(f.values().iter().map(|z| z.re));
    out.extend(f.values().iter().map(|z| z.im));
    out
}

/// Inverse of [`split_real_imag`].
pub fn recombine(grid: LatticeGrid, v: &[f64]) -> Result<ComplexField> {
    if v.len() % 2 != 0 || v.len() != 2 * grid.n_nodes() {
        return Err(Error::BadSplitLength {
            expected: 2 * grid.n_nodes(),
            got: v.len(),
        });
    }
    let n = grid.n_nodes();
    let values = (0..n).map(|j| Complex64::new(v[j], v[n + j])).collect();
    Ok(ComplexField::from_values_unchecked(grid, values))
}

/// Lemma bounds for `‖G(Φ)‖_{ℓ²}` and `‖G(Φ)-G(Ψ)‖_{ℓ²}` (used by the
/// property suites and the proximity constants).
pub mod bounds {
    use super::*;

    /// Right side of the `G` mapping estimate:
    /// `2√2 K (‖Φ‖_∞+‖ζ‖_∞+q₀)^{2p} (‖Φ‖₂+‖|ζ|-q₀‖₂)`.
    pub fn g_image(phi: &ComplexField, bg: &BackgroundNorms, k: f64, p: f64) -> f64 {
        let sup = crate::lattice::norm(phi, NormKind::sup());
        let l2 = crate::lattice::norm(phi, NormKind::l2());
        2.0 * FloatExt::sqrt(2.0)
            * k
            * FloatExt::powf(sup + bg.zeta_inf + bg.q0, 2.0 * p)
            * (l2 + bg.zeta_dev_l2)
    }

    /// Right side of the `G` Lipschitz estimate:
    /// `K (‖Φ‖_∞+‖Ψ‖_∞+2‖ζ‖_∞+q₀)^{2p} ‖Φ-Ψ‖₂`.
    pub fn g_lipschitz(
        phi: &ComplexField,
        psi: &ComplexField,
        bg: &BackgroundNorms,
        k: f64,
        p: f64,
    ) -> Result<f64> {
        let sup_phi = crate::lattice::norm(phi, NormKind::sup());
        let sup_psi = crate::lattice::norm(psi, NormKind::sup());
        let diff = crate::lattice::distance(phi, psi, NormKind::l2())?;
        Ok(k * FloatExt::powf(sup_phi + sup_psi + 2.0 * bg.zeta_inf + bg.q0, 2.0 * p) * diff)
    }

    /// Right side of the `𝒢` mapping estimate:
    /// `16 p (‖φ‖_∞+‖ζ‖_∞+q₀)^{2p} (‖φ‖₂+‖|ζ|-q₀‖₂) + 8 q₀^{2p} ‖φ‖₂ + 4 q₀^{2p} ‖ζ'‖₂`.
    pub fn cal_g_image(phi: &ComplexField, bg: &BackgroundNorms, p: f64) -> f64 {
        let sup = crate::lattice::norm(phi, NormKind::sup());
        let l2 = crate::lattice::norm(phi, NormKind::l2());
        let q2p = FloatExt::powf(bg.q0, 2.0 * p);
        16.0 * p * FloatExt::powf(sup + bg.zeta_inf + bg.q0, 2.0 * p) * (l2 + bg.zeta_dev_l2)
            + 8.0 * q2p * l2
            + 4.0 * q2p * bg.zeta_prime_l2
    }

    /// Right side of the `𝒢` Lipschitz estimate:
    /// `2 [√2 q₀^{2p} + 2 (2p+1) (‖φ‖_∞+‖ψ‖_∞+2‖ζ‖_∞)^{2p}] ‖φ-ψ‖₂`.
    pub fn cal_g_lipschitz(
        phi: &ComplexField,
        psi: &ComplexField,
        bg: &BackgroundNorms,
        p: f64,
    ) -> Result<f64> {
        let sup_phi = crate::lattice::norm(phi, NormKind::sup());
        let sup_psi = crate::lattice::norm(psi, NormKind::sup());
        let diff = crate::lattice::distance(phi, psi, NormKind::l2())?;
        Ok(2.0
            * (FloatExt::sqrt(2.0) * FloatExt::powf(bg.q0, 2.0 * p)
                + 2.0
                    * (2.0 * p + 1.0)
                    * FloatExt::powf(sup_phi + sup_psi + 2.0 * bg.zeta_inf, 2.0 * p))
            * diff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::distance;
    use alloc::vec;
    use alloc::vec::Vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid(n: usize) -> LatticeGrid {
        LatticeGrid::new(n, 1.0, Boundary::Periodic).unwrap()
    }

    #[test]
    fn f_examples() {
        let power1 = NonlinearityKind::power(1.0);
        assert_eq!(eval_f(4.0, &power1).unwrap(), 4.0);
        let sat = NonlinearityKind::Saturable { p: 1.0, lambda: 1.0 };
        assert_eq!(eval_f(1.0, &sat).unwrap(), 0.5);
        for kind in [power1, NonlinearityKind::power(2.5), sat] {
            assert_eq!(eval_f(0.0, &kind).unwrap(), 0.0);
            assert_eq!(eval_f(-1.0, &kind), Err(Error::NegativeArgument));
        }
    }

    #[test]
    fn model_validation() {
        assert!(ModelSpec::gal(1.0, 0.5).is_err());
        let g = grid(8);
        let bg = Background::constant(g, c(0.3, 0.0));
        assert!(ModelSpec::modified_gal(1.0, 2.0, bg.clone()).is_ok());
        assert!(ModelSpec::gal(1.0, 2.0).unwrap().background.is_none());
        // Original variants forbid a background by construction (no API
        // accepts one), and modified variants require it.
        assert!(ModelSpec::build(Equation::Gal, 1.0, 0.0, NonlinearityKind::power(1.0), Some(bg))
            .is_err());
    }

    #[test]
    fn constant_state_gal_rotates() {
        // For u ≡ c the Laplacian vanishes and du/dt = i μ |c|^{2p} c.
        let g = grid(16);
        let p = 2.0;
        let mu = 0.7;
        let c0 = c(0.4, -0.2);
        let spec = ModelSpec::gal(mu, p).unwrap();
        let f = ComplexField::constant(g, c0);
        let d = rhs(&f, 0.0, &spec).unwrap();
        let want = Complex64::i() * mu * c0.norm_sqr().powf(p) * c0;
        for z in d.values() {
            assert!((z - want).norm() < 1e-14);
        }
    }

    #[test]
    fn modified_gdnls_stationary_constant_background() {
        // Φ = 0 over a constant-modulus background is stationary.
        let g = grid(12);
        let bg = Background::constant(g, c(0.0, 0.25));
        let spec =
            ModelSpec::modified_gdnls(1.3, NonlinearityKind::power(2.0), bg).unwrap();
        let zero = ComplexField::zeroed(g);
        let d = rhs(&zero, 0.0, &spec).unwrap();
        assert!(d.sup_mod() < 1e-15);
    }

    #[test]
    fn modified_gal_stationary_constant_background() {
        // a constant background solves the stationary gAL equation, so the
        // zero perturbation is admissible
        let g = grid(12);
        let bg = Background::constant(g, Complex64::from_polar(0.4, 0.9));
        let spec = ModelSpec::modified_gal(0.8, 2.0, bg).unwrap();
        let zero = ComplexField::zeroed(g);
        let d = rhs(&zero, 0.0, &spec).unwrap();
        assert!(d.sup_mod() < 1e-15);
    }

    #[test]
    fn operator_g_vanishes_on_constant_modulus() {
        let g = grid(10);
        let bg = Background::constant(g, c(0.5, 0.0));
        let kind = NonlinearityKind::power(2.0);
        let phi = ComplexField::zeroed(g);
        let out = operator_g(&phi, &bg, &kind).unwrap();
        assert!(out.sup_mod() < 1e-15);
    }

    #[test]
    fn operator_cal_g_vanishes_on_constant_modulus() {
        let g = grid(10);
        let bg = Background::constant(g, c(0.3, 0.4)); // q0 = 0.5
        let phi = ComplexField::zeroed(g);
        let out = operator_cal_g(&phi, &bg, 1.5).unwrap();
        assert!(out.sup_mod() < 1e-13);
    }

    #[test]
    fn split_roundtrip_and_zero_imag() {
        let g = grid(7);
        let f = ComplexField::from_fn(g, |n| c(n as f64, 2.0 * n as f64));
        let v = split_real_imag(&f);
        let back = recombine(g, &v).unwrap();
        assert_eq!(back.values(), f.values());

        let real = ComplexField::from_fn(g, |n| c(n as f64, 0.0));
        let v = split_real_imag(&real);
        assert!(v[7..].iter().all(|&x| x == 0.0));

        assert!(recombine(g, &v[..13]).is_err());
    }

    #[test]
    fn split_rhs_matches_complex_rhs() {
        // Both code paths evaluate the same derivative.
        let g = grid(24);
        let bg = Background::constant(g, c(0.2, 0.1));
        let specs = [
            ModelSpec::gal(0.9, 2.0).unwrap(),
            ModelSpec::gdnls(1.1, NonlinearityKind::power(3.0)).unwrap(),
            ModelSpec::gdnls(1.1, NonlinearityKind::Saturable { p: 1.0, lambda: 2.0 }).unwrap(),
            ModelSpec::modified_gal(0.8, 2.0, bg.clone()).unwrap(),
            ModelSpec::modified_gdnls(1.2, NonlinearityKind::power(2.0), bg).unwrap(),
        ];
        let f = ComplexField::from_fn(g, |n| {
            let x = n as f64;
            c((0.1 * x).sin() * 0.3, (0.2 * x).cos() * 0.2)
        });
        for spec in specs {
            let direct = rhs(&f, 0.0, &spec).unwrap();
            let z = split_real_imag(&f);
            let mut out = vec![0.0; z.len()];
            rhs_split::<f64>(&spec, &g, &z, &mut out);
            let via_split = recombine(g, &out).unwrap();
            let d = distance(&direct, &via_split, NormKind::sup()).unwrap();
            assert!(d <= 1e-14, "paths disagree by {d:e} for {:?}", spec.equation);
        }
    }

    #[test]
    fn gauge_covariance() {
        let g = grid(20);
        let f = ComplexField::from_fn(g, |n| {
            let x = n as f64;
            c((0.3 * x).cos() * 0.4, (0.15 * x).sin() * 0.5)
        });
        let phase = Complex64::from_polar(1.0, 0.77);
        for spec in [
            ModelSpec::gal(1.0, 2.0).unwrap(),
            ModelSpec::gdnls(1.0, NonlinearityKind::power(2.0)).unwrap(),
        ] {
            let a = rhs(&f.scaled(phase), 0.0, &spec).unwrap();
            let b = rhs(&f, 0.0, &spec).unwrap().scaled(phase);
            assert!(distance(&a, &b, NormKind::sup()).unwrap() < 1e-14);
        }
    }

    #[test]
    fn modified_reduces_to_original_at_zero_background() {
        let g = grid(18);
        let zero_bg = Background::new(g, vec![c(0.0, 0.0); 18], 0.0).unwrap();
        let f = ComplexField::from_fn(g, |n| c((n as f64 * 0.2).sin(), 0.1));
        let pairs: [(ModelSpec, ModelSpec); 2] = [
            (
                ModelSpec::modified_gal(1.0, 2.0, zero_bg.clone()).unwrap(),
                ModelSpec::gal(1.0, 2.0).unwrap(),
            ),
            (
                ModelSpec::modified_gdnls(1.0, NonlinearityKind::power(2.0), zero_bg).unwrap(),
                ModelSpec::gdnls(1.0, NonlinearityKind::power(2.0)).unwrap(),
            ),
        ];
        for (modified, original) in pairs {
            let a = rhs(&f, 0.0, &modified).unwrap();
            let b = rhs(&f, 0.0, &original).unwrap();
            assert!(distance(&a, &b, NormKind::sup()).unwrap() < 1e-15);
        }
    }

    #[test]
    fn f_derivative_obeys_lipschitz_data() {
        // |F'(x)| <= K |x|^{p-1} on a log-spaced grid, by central difference
        let kinds = [
            NonlinearityKind::power(1.0),
            NonlinearityKind::power(2.0),
            NonlinearityKind::power(3.5),
            NonlinearityKind::Saturable { p: 1.0, lambda: 0.7 },
        ];
        for kind in kinds {
            let k = kind.lipschitz_k();
            let p = kind.exponent();
            for i in 0..40 {
                let x = 1e-3 * (1e6f64).powf(i as f64 / 39.0); // 1e-3 ..= 1e3
                let dx = 1e-6 * x;
                let fp = (eval_f(x + dx, &kind).unwrap() - eval_f(x - dx, &kind).unwrap())
                    / (2.0 * dx);
                let bound = k * x.powf(p - 1.0);
                assert!(
                    fp.abs() <= bound * (1.0 + 1e-6),
                    "{kind:?} at x={x}: |F'|={fp} > {bound}"
                );
            }
        }
    }

    #[test]
    fn background_cached_norms_match_recomputation() {
        let g = grid(32);
        let zeta: Vec<Complex64> = (0..32)
            .map(|n| {
                let x = n as f64 - 16.0;
                Complex64::from_polar(0.5 + 0.05 * (-x * x / 40.0).exp(), 0.1 * x)
            })
            .collect();
        let bg = Background::new(g, zeta.clone(), 0.5).unwrap();
        let inf = zeta.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        assert!((bg.norms().zeta_inf - inf).abs() <= 1e-14 * inf.max(1.0));
        let dev: f64 = zeta
            .iter()
            .map(|z| (z.norm() - 0.5) * (z.norm() - 0.5))
            .sum::<f64>()
            .sqrt();
        assert!((bg.norms().zeta_dev_l2 - dev).abs() <= 1e-14 * dev.max(1.0));

        let constant = Background::constant(g, c(0.5, 0.0));
        assert_eq!(constant.norms().zeta_prime_l2, 0.0);
        assert_eq!(constant.norms().zeta_dev_l2, 0.0);
    }
}
