//! Lifespan and proximity machinery: scaling exponents, monotonicity, and
//! regression anchors pinned by an independent fine-grid scan of the
//! contraction conditions.

use alnls_core::models::BackgroundNorms;
use alnls_core::theory::{
    lifespan_dnls, lifespan_gal, proximity_bound, radius_rho_dnls, radius_rho_gal,
    radius_varrho_gal, DataConstants, GalVariant, Lifespan, ProximityConstants,
};

/// Independent oracle: largest admissible horizon by scanning the gDNLS
/// contraction condition on a fine multiplicative grid, then refining.
/// Uses only the radius evaluator, not the production bisection.
fn scan_lifespan_dnls(
    phi0: f64,
    bg: &BackgroundNorms,
    gamma: f64,
    k: f64,
    p: f64,
    kappa: f64,
) -> f64 {
    let lhs = |t: f64| {
        let rho = radius_rho_dnls(t, phi0, bg, gamma, k, p, kappa);
        2f64.powf(2.0 * p + 2.5) * gamma.abs() * k * (rho + bg.zeta_inf + bg.q0).powf(2.0 * p) * t
    };
    let mut lo = 1e-15f64;
    assert!(lhs(lo) < 1.0, "oracle bracket must start feasible");
    // multiplicative coarse scan
    let mut hi = lo;
    while lhs(hi) <= 1.0 {
        lo = hi;
        hi *= 1.01;
        assert!(hi < 1e280, "oracle never crossed the condition");
    }
    // linear refks inside [lo, hi]
    for _ in 0..4 {
        let step = (hi - lo) / 1000.0;
        let mut t = lo;
        while t + step < hi && lhs(t + step) <= 1.0 {
            t += step;
        }
        lo = t;
        hi = t + step;
    }
    0.5 * (lo + hi)
}

#[test]
fn bisection_matches_grid_scan_oracle() {
    let bg = BackgroundNorms {
        q0: 0.3,
        zeta_inf: 0.35,
        zeta_prime_l2: 0.1,
        zeta_dev_l2: 0.05,
        zeta_second_l2: 0.07,
    };
    let t_scan = scan_lifespan_dnls(0.7, &bg, 1.0, 2.0, 2.0, 1.0);
    let t_bisect = lifespan_dnls(0.7, &bg, 1.0, 2.0, 2.0, 1.0).finite().unwrap();
    assert!(
        (t_scan - t_bisect).abs() <= 1e-6 * t_bisect,
        "scan {t_scan:e} vs bisection {t_bisect:e}"
    );
    // frozen regression anchor computed with the scan oracle
    assert!(
        (t_bisect - 3.0428133081236274e-4).abs() <= 1e-9 * t_bisect,
        "lifespan anchor moved: {t_bisect:e}"
    );
}

#[test]
fn lifespan_scaling_slope_is_minus_two_p() {
    // log T vs log eps has slope -2p for both models (criterion oracle)
    let data = DataConstants {
        eps: 1.0,
        a0: 1.0,
        b: 1.0,
        b0: 1.0,
        b1: 0.5,
        b2: 0.1,
        b3: 0.2,
    };
    for &p in &[1.0, 2.0, 3.0] {
        let eps_grid: Vec<f64> = (0..25)
            .map(|i| 0.05 * (2.0f64 / 0.05).powf(i as f64 / 24.0))
            .collect();
        for model in ["dnls", "gal"] {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for &eps in &eps_grid {
                let (phi0, bg) = data.to_data(eps, p);
                let t = match model {
                    "dnls" => lifespan_dnls(phi0, &bg, 1.0, p, p, 1.0),
                    _ => lifespan_gal(phi0, &bg, 1.0, p, 1.0, GalVariant::X2),
                };
                xs.push(eps.ln());
                ys.push(t.finite().unwrap().ln());
            }
            let n = xs.len() as f64;
            let xm = xs.iter().sum::<f64>() / n;
            let ym = ys.iter().sum::<f64>() / n;
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
            let slope = sxy / sxx;
            assert!(
                (slope + 2.0 * p).abs() <= 1e-3,
                "{model} p={p}: slope {slope}"
            );
        }
    }
}

#[test]
fn radii_monotone_in_every_argument() {
    let base = BackgroundNorms {
        q0: 0.4,
        zeta_inf: 0.45,
        zeta_prime_l2: 0.2,
        zeta_dev_l2: 0.1,
        zeta_second_l2: 0.15,
    };
    let evals: [&dyn Fn(f64, f64, &BackgroundNorms) -> f64; 3] = [
        &|t, phi0, bg| radius_rho_dnls(t, phi0, bg, 1.0, 2.0, 2.0, 1.0),
        &|t, phi0, bg| radius_rho_gal(t, phi0, bg, 1.0, 2.0, 1.0),
        &|t, phi0, bg| radius_varrho_gal(t, phi0, bg, 1.0, 2.0, 1.0),
    ];
    for f in evals {
        for &(t, tp) in &[(0.1, 0.2), (1.0, 1.5)] {
            assert!(f(tp, 0.7, &base) >= f(t, 0.7, &base));
        }
        assert!(f(1.0, 0.9, &base) >= f(1.0, 0.7, &base));
        for bump in 0..5 {
            let mut b = base;
            match bump {
                0 => b.q0 += 0.1,
                1 => b.zeta_inf += 0.1,
                2 => b.zeta_prime_l2 += 0.1,
                3 => b.zeta_dev_l2 += 0.1,
                _ => b.zeta_second_l2 += 0.1,
            }
            assert!(f(1.0, 0.7, &b) >= f(1.0, 0.7, &base), "bump {bump}");
        }
    }
}

#[test]
fn lifespan_decreases_with_background_amplitude() {
    // consistent with the observed trend of blow-up times versus q0
    let mut last = f64::INFINITY;
    for &q0 in &[0.1, 0.12, 0.14, 0.16, 0.18, 0.2] {
        let bg = BackgroundNorms::constant(q0);
        // data of the localized perturbation i q0 sech(n): l2 = 1.4157 q0
        let t = lifespan_gal(1.4157 * q0, &bg, 1.0, 2.0, 1.0, GalVariant::X2)
            .finite()
            .unwrap();
        assert!(t < last, "lifespan must decrease with q0");
        last = t;
    }
}

#[test]
fn proximity_constants_scaling_window() {
    // T_c scales as eps^{-2 min(p1,p2)} through the common-lifespan rule
    let data = DataConstants {
        eps: 1.0,
        a0: 1.0,
        b: 0.5,
        b0: 0.5,
        b1: 0.0,
        b2: 0.0,
        b3: 0.0,
    };
    let pc = ProximityConstants::solve(data, 1.0, 2.0, 1.0, 1.0, 2.0, 1.0, 0.0);
    let m1 = pc.m1.finite().unwrap();
    let m2 = pc.m2.finite().unwrap();
    for &eps in &[0.5f64, 0.25, 0.05] {
        let tc = pc.common_lifespan(eps).finite().unwrap();
        let want = (m1 * eps.powi(-2)).min(m2 * eps.powi(-4));
        assert!((tc - want).abs() <= 1e-12 * want);
    }
    // at small eps the lower exponent wins: T_c = M1 eps^{-2}, so a
    // halving of eps quadruples the window
    let tc_a = pc.common_lifespan(0.01).finite().unwrap();
    let tc_b = pc.common_lifespan(0.005).finite().unwrap();
    assert!((tc_b / tc_a - 4.0).abs() <= 1e-9);

    // the bound is positive and increasing in T inside the window
    let tc = pc.common_lifespan(0.5).finite().unwrap();
    let b1 = proximity_bound(&pc, 0.1 * tc, 0.5).unwrap();
    let b2 = proximity_bound(&pc, tc, 0.5).unwrap();
    assert!(b2 > b1 && b1 > 0.0);
}

#[test]
fn unbounded_degenerate_lifespans_propagate() {
    let data = DataConstants {
        eps: 1.0,
        a0: 1.0,
        b: 0.5,
        b0: 0.5,
        b1: 0.0,
        b2: 0.0,
        b3: 0.0,
    };
    // mu = 0: the gAL side never saturates, the window comes from gDNLS
    let pc = ProximityConstants::solve(data, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0);
    assert_eq!(pc.m1, Lifespan::Unbounded);
    assert!(pc.m2.finite().is_some());
    assert!(pc.common_lifespan(0.5).finite().is_some());
}
