//! Analytical well-posedness radii, minimum guaranteed lifespans, and the
//! proximity constants bounding the distance between gAL and gDNLS
//! trajectories.
//!
//! The local existence theory produces, for each model, a solution-ball
//! radius `ρ(T)` growing with the horizon `T` and a contraction condition of
//! the form `lhs(T) <= 1` whose left side is strictly increasing in `T`.
//! The minimum guaranteed lifespan is the largest admissible `T`; it is
//! computed here by bracketed bisection, justified by that monotonicity.
//!
//! With data and background scaled as `‖φ(0)‖ = A₀ε`, `q₀ = Bε`,
//! `‖ζ‖_∞ = B₀ε`, `‖ζ'‖ = B₁ε^{p+1}`, `‖|ζ|-q₀‖ = B₂ε`, `‖ζ''‖ = B₃ε`,
//! the lifespan scales exactly as `T = C ε^{-2p}`.

use crate::fmath::FloatExt;
use crate::models::BackgroundNorms;
use crate::{Error, Result};

/// Result of a lifespan solve. `Unbounded` is reported for the degenerate
/// cases (`γ = 0` or `μ = 0`, or entirely zero data) where the contraction
/// condition never saturates.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Lifespan {
    Finite(f64),
    Unbounded,
}

impl Lifespan {
    pub fn finite(&self) -> Option<f64> {
        match self {
            Lifespan::Finite(t) => Some(*t),
            Lifespan::Unbounded => None,
        }
    }
}

/// gDNLS solution-ball radius
/// `ρ(T) = 2[‖Φ(0)‖ + √(2κ)‖ζ'‖√T + 2^{2p+3/2}|γ|K(‖ζ‖_∞+‖|ζ|-q₀‖+q₀)^{2p+1} T]`.
pub fn radius_rho_dnls(
    t: f64,
    phi0_l2: f64,
    bg: &BackgroundNorms,
    gamma: f64,
    k: f64,
    p: f64,
    kappa: f64,
) -> f64 {
    2.0 * (phi0_l2
        + FloatExt::sqrt(2.0 * kappa) * bg.zeta_prime_l2 * FloatExt::sqrt(t)
        + FloatExt::powf(2.0, 2.0 * p + 1.5)
            * gamma.abs()
            * k
            * FloatExt::powf(bg.zeta_inf + bg.zeta_dev_l2 + bg.q0, 2.0 * p + 1.0)
            * t)
}

/// gAL radius with background regularity `X¹`:
/// `ρ(T) = 2[‖φ(0)‖ + √(2κ)‖ζ'‖√T + |μ|(2^{2(p+2)} p (‖ζ‖_∞+q₀+‖|ζ|-q₀‖)^{2p+1} + 2q₀^{2p}‖ζ'‖) T]`.
pub fn radius_rho_gal(
    t: f64,
    phi0_l2: f64,
    bg: &BackgroundNorms,
    mu: f64,
    p: f64,
    kappa: f64,
) -> f64 {
    2.0 * (phi0_l2
        + FloatExt::sqrt(2.0 * kappa) * bg.zeta_prime_l2 * FloatExt::sqrt(t)
        + mu.abs()
            * (FloatExt::powf(2.0, 2.0 * (p + 2.0))
                * p
                * FloatExt::powf(bg.zeta_inf + bg.q0 + bg.zeta_dev_l2, 2.0 * p + 1.0)
                + 2.0 * FloatExt::powf(bg.q0, 2.0 * p) * bg.zeta_prime_l2)
            * t)
}

/// gAL radius with the smoother background regularity `X²`: the
/// `2 q₀^{2p} ‖ζ'‖` term of the `X¹` radius is replaced by `q₀^{2p} ‖ζ''‖`.
pub fn radius_varrho_gal(
    t: f64,
    phi0_l2: f64,
    bg: &BackgroundNorms,
    mu: f64,
    p: f64,
    kappa: f64,
) -> f64 {
    2.0 * (phi0_l2
        + FloatExt::sqrt(2.0 * kappa) * bg.zeta_prime_l2 * FloatExt::sqrt(t)
        + mu.abs()
            * (FloatExt::powf(2.0, 2.0 * (p + 2.0))
                * p
                * FloatExt::powf(bg.zeta_inf + bg.q0 + bg.zeta_dev_l2, 2.0 * p + 1.0)
                + FloatExt::powf(bg.q0, 2.0 * p) * bg.zeta_second_l2)
            * t)
}

/// Which gAL radius a lifespan solve uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GalVariant {
    X1,
    X2,
}

/// Left side minus one of the gDNLS contraction condition
/// `2^{2p+5/2} |γ| K (ρ(T)+‖ζ‖_∞+q₀)^{2p} T <= 1`.
fn dnls_condition(
    t: f64,
    phi0_l2: f64,
    bg: &BackgroundNorms,
    gamma: f64,
    k: f64,
    p: f64,
    kappa: f64,
) -> f64 {
    let rho = radius_rho_dnls(t, phi0_l2, bg, gamma, k, p, kappa);
    FloatExt::powf(2.0, 2.0 * p + 2.5)
        * gamma.abs()
        * k
        * FloatExt::powf(rho + bg.zeta_inf + bg.q0, 2.0 * p)
        * t
        - 1.0
}

/// Left side minus one of the gAL contraction condition
/// `2^{7/2} |μ| [q₀^{2p} + 2^{2p+1/2}(2p+1)(ρ(T)+‖ζ‖_∞)^{2p}] T <= 1`.
fn gal_condition(
    t: f64,
    phi0_l2: f64,
    bg: &BackgroundNorms,
    mu: f64,
    p: f64,
    kappa: f64,
    variant: GalVariant,
) -> f64 {
    let rho = match variant {
        GalVariant::X1 => radius_rho_gal(t, phi0_l2, bg, mu, p, kappa),
        GalVariant::X2 => radius_varrho_gal(t, phi0_l2, bg, mu, p, kappa),
    };
    FloatExt::powf(2.0, 3.5)
        * mu.abs()
        * (FloatExt::powf(bg.q0, 2.0 * p)
            + FloatExt::powf(2.0, 2.0 * p + 0.5)
                * (2.0 * p + 1.0)
                * FloatExt::powf(rho + bg.zeta_inf, 2.0 * p))
        * t
        - 1.0
}

/// Largest `T` with `cond(T) <= 0` for a strictly increasing `cond` with
/// `cond(0) = -1`. Brackets by doubling from `1e-12`, then bisects to a
/// relative width of `1e-13`; the returned value is the feasible (lower)
/// end of the final bracket.
fn largest_admissible(cond: impl Fn(f64) -> f64) -> Lifespan {
    let mut hi = 1e-12;
    let mut lo = 0.0;
    if cond(hi) <= 0.0 {
        loop {
            lo = hi;
            hi *= 2.0;
            if hi > 1e290 {
                return Lifespan::Unbounded;
            }
            if cond(hi) > 0.0 {
                break;
            }
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if cond(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Lifespan::Finite(lo)
}

/// Minimum guaranteed lifespan of the modified gDNLS solution.
pub fn lifespan_dnls(
    phi0_l2: f64,
    bg: &BackgroundNorms,
    gamma: f64,
    k: f64,
    p: f64,
    kappa: f64,
) -> Lifespan {
    largest_admissible(|t| dnls_condition(t, phi0_l2, bg, gamma, k, p, kappa))
}

/// Minimum guaranteed lifespan of the modified gAL solution.
pub fn lifespan_gal(
    phi0_l2: f64,
    bg: &BackgroundNorms,
    mu: f64,
    p: f64,
    kappa: f64,
    variant: GalVariant,
) -> Lifespan {
    largest_admissible(|t| gal_condition(t, phi0_l2, bg, mu, p, kappa, variant))
}

/// Data constants of the `ε`-parameterized families:
/// `A₀ = ‖φ(0)‖/ε`, `B = q₀/ε`, `B₀ = ‖ζ‖_∞/ε`, `B₁ = ‖ζ'‖/ε^{p+1}`,
/// `B₂ = ‖|ζ|-q₀‖/ε`, `B₃ = ‖ζ''‖/ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DataConstants {
    pub eps: f64,
    pub a0: f64,
    pub b: f64,
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl DataConstants {
    pub fn from_data(eps: f64, phi0_l2: f64, bg: &BackgroundNorms, p: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidModel("eps must be positive"));
        }
        Ok(Self {
            eps,
            a0: phi0_l2 / eps,
            b: bg.q0 / eps,
            b0: bg.zeta_inf / eps,
            b1: bg.zeta_prime_l2 / FloatExt::powf(eps, p + 1.0),
            b2: bg.zeta_dev_l2 / eps,
            b3: bg.zeta_second_l2 / eps,
        })
    }

    /// Realizes the family at a given `ε`: data norm and background norms.
    pub fn to_data(&self, eps: f64, p: f64) -> (f64, BackgroundNorms) {
        (
            self.a0 * eps,
            BackgroundNorms {
                q0: self.b * eps,
                zeta_inf: self.b0 * eps,
                zeta_prime_l2: self.b1 * FloatExt::powf(eps, p + 1.0),
                zeta_dev_l2: self.b2 * eps,
                zeta_second_l2: self.b3 * eps,
            },
        )
    }

    /// Norm bundle at `ε = 1` (the normalized data the lifespan constants
    /// are computed from).
    fn unit_data(&self) -> (f64, BackgroundNorms) {
        (
            self.a0,
            BackgroundNorms {
                q0: self.b,
                zeta_inf: self.b0,
                zeta_prime_l2: self.b1,
                zeta_dev_l2: self.b2,
                zeta_second_l2: self.b3,
            },
        )
    }
}

/// Constants of the gAL/gDNLS proximity bound: lifespan coefficients
/// `M₁, M₂` (each maximal for its contraction condition), the solution-size
/// constants `A₁, A₂`, and the ingredients of the distance constant `C`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProximityConstants {
    pub p1: f64,
    pub p2: f64,
    pub mu: f64,
    pub gamma: f64,
    pub k: f64,
    pub kappa: f64,
    pub c0: f64,
    pub data: DataConstants,
    pub m1: Lifespan,
    pub m2: Lifespan,
    pub a1: f64,
    pub a2: f64,
}

impl ProximityConstants {
    /// Picks the maximal `(M₁, M₂)` admissible for the two contraction
    /// conditions (each condition is the corresponding lifespan condition
    /// evaluated on the `ε`-normalized data, so the lifespan solvers apply
    /// verbatim), then evaluates `A₁ = ϱ(M₁)`, `A₂ = ρ(M₂)`.
    #[allow(clippy::too_many_arguments)]
    pub fn solve(
        data: DataConstants,
        p1: f64,
        p2: f64,
        mu: f64,
        gamma: f64,
        k: f64,
        kappa: f64,
        c0: f64,
    ) -> Self {
        let (a0, unit_bg) = data.unit_data();
        let m1 = lifespan_gal(a0, &unit_bg, mu, p1, kappa, GalVariant::X2);
        let m2 = lifespan_dnls(a0, &unit_bg, gamma, k, p2, kappa);
        let a1 = match m1 {
            Lifespan::Finite(t) => radius_varrho_gal(t, a0, &unit_bg, mu, p1, kappa),
            Lifespan::Unbounded => radius_varrho_gal(0.0, a0, &unit_bg, mu, p1, kappa),
        };
        let a2 = match m2 {
            Lifespan::Finite(t) => radius_rho_dnls(t, a0, &unit_bg, gamma, k, p2, kappa),
            Lifespan::Unbounded => radius_rho_dnls(0.0, a0, &unit_bg, gamma, k, p2, kappa),
        };
        Self {
            p1,
            p2,
            mu,
            gamma,
            k,
            kappa,
            c0,
            data,
            m1,
            m2,
            a1,
            a2,
        }
    }

    /// Common guaranteed window `T_c = min{M₁ ε^{-2p₁}, M₂ ε^{-2p₂}}`.
    pub fn common_lifespan(&self, eps: f64) -> Lifespan {
        let t1 = self
            .m1
            .finite()
            .map(|m| m * FloatExt::powf(eps, -2.0 * self.p1));
        let t2 = self
            .m2
            .finite()
            .map(|m| m * FloatExt::powf(eps, -2.0 * self.p2));
        match (t1, t2) {
            (None, None) => Lifespan::Unbounded,
            (Some(t), None) | (None, Some(t)) => Lifespan::Finite(t),
            (Some(a), Some(b)) => Lifespan::Finite(a.min(b)),
        }
    }

    /// Distance constant
    /// `C = C₀ + T {|μ|[8p₁(A₁+B₀+B)^{2p₁}(A₁+B₂) + 4B^{2p₁}A₁ + B^{2p₁}B₃]
    ///            + 2√2 |γ| K (A₂+B₀+B)^{2p₂} (A₂+B₂)}`.
    pub fn constant_c(&self, t: f64) -> f64 {
        let d = &self.data;
        let b2p1 = FloatExt::powf(d.b, 2.0 * self.p1);
        let gal_part = self.mu.abs()
            * (8.0
                * self.p1
                * FloatExt::powf(self.a1 + d.b0 + d.b, 2.0 * self.p1)
                * (self.a1 + d.b2)
                + 4.0 * b2p1 * self.a1
                + b2p1 * d.b3);
        let dnls_part = 2.0
            * FloatExt::sqrt(2.0)
            * self.gamma.abs()
            * self.k
            * FloatExt::powf(self.a2 + d.b0 + d.b, 2.0 * self.p2)
            * (self.a2 + d.b2);
        self.c0 + t * (gal_part + dnls_part)
    }
}

/// The proximity bound `C(T) · max{ε^{2p₁+1}, ε^{2p₂+1}}`, valid for
/// `T <= T_c`.
pub fn proximity_bound(pc: &ProximityConstants, t: f64, eps: f64) -> Result<f64> {
    if let Lifespan::Finite(tc) = pc.common_lifespan(eps) {
        if t > tc {
            return Err(Error::BoundInapplicable(
                "requested horizon exceeds the common guaranteed lifespan",
            ));
        }
    }
    let powmax = FloatExt::powf(eps, 2.0 * pc.p1 + 1.0).max(FloatExt::powf(eps, 2.0 * pc.p2 + 1.0));
    Ok(pc.constant_c(t) * powmax)
}
