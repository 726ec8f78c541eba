//! Property suites: norm family axioms, the `ℓʳ` embedding, discrete
//! summation identities, the mapping/Lipschitz bounds of the nonlinear
//! operators `G` and `𝒢`, and the split-system consistency.

use alnls_core::lattice::{
    backward_diff, distance, laplacian, norm, Boundary, ComplexField, LatticeGrid, NormKind,
};
use alnls_core::models::{
    bounds, operator_cal_g, operator_g, recombine, rhs, split_real_imag, Background, ModelSpec,
    NonlinearityKind,
};
use alnls_core::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_field(grid: LatticeGrid, rng: &mut StdRng, scale: f64) -> ComplexField {
    ComplexField::from_fn(grid, |_| {
        Complex64::new(
            scale * (rng.random::<f64>() - 0.5),
            scale * (rng.random::<f64>() - 0.5),
        )
    })
}

fn random_background(grid: LatticeGrid, rng: &mut StdRng, q0: f64) -> Background {
    // modulus-q0 asymptote with a localized modulation, random phase
    let n = grid.n_nodes();
    let zeta: Vec<Complex64> = (0..n)
        .map(|j| {
            let x = grid.centered_index(j);
            let bump = 1.0 + 0.3 * (-x * x / (0.02 * (n * n) as f64)).exp();
            let phase = 0.4 * (rng.random::<f64>() - 0.5);
            Complex64::from_polar(q0 * bump, phase)
        })
        .collect();
    Background::new(grid, zeta, q0).unwrap()
}

#[test]
fn norm_embedding_on_random_fields() {
    // ||f||_q <= ||f||_r for 2 <= r <= q <= inf (unweighted)
    let grid = LatticeGrid::new(48, 1.0, Boundary::Periodic).unwrap();
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let f = random_field(grid, &mut rng, 2.0);
        let l2 = norm(&f, NormKind::lr(2.0));
        let l3 = norm(&f, NormKind::lr(3.0));
        let l4 = norm(&f, NormKind::lr(4.0));
        let linf = norm(&f, NormKind::sup());
        assert!(l3 <= l2 * (1.0 + 1e-12));
        assert!(l4 <= l3 * (1.0 + 1e-12));
        assert!(linf <= l4 * (1.0 + 1e-12));
    }
}

#[test]
fn integration_by_parts_periodic() {
    // sum (Δu)_n conj(u_n) = -sum |u_{n+1} - u_n|^2
    let grid = LatticeGrid::new(64, 1.0, Boundary::Periodic).unwrap();
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..100 {
        let f = random_field(grid, &mut rng, 1.5);
        let lap = laplacian(&f);
        let lhs: Complex64 = lap
            .values()
            .iter()
            .zip(f.values())
            .map(|(l, u)| l * u.conj())
            .sum();
        let rhs_val: f64 = (0..64)
            .map(|j| (f.values()[(j + 1) % 64] - f.values()[j]).norm_sqr())
            .sum();
        let scale = rhs_val.max(1.0);
        assert!((lhs.re + rhs_val).abs() <= 1e-12 * scale);
        assert!(lhs.im.abs() <= 1e-12 * scale);
    }
}

#[test]
fn gradient_controlled_by_l2() {
    // ||∇u||² <= 4 ||u||²
    let grid = LatticeGrid::new(50, 1.0, Boundary::Periodic).unwrap();
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..200 {
        let f = random_field(grid, &mut rng, 3.0);
        let grad_sq: f64 = (0..50)
            .map(|j| (f.values()[(j + 1) % 50] - f.values()[j]).norm_sqr())
            .sum();
        let l2 = norm(&f, NormKind::l2());
        assert!(grad_sq <= 4.0 * l2 * l2 * (1.0 + 1e-12));
    }
}

#[test]
fn second_difference_identity() {
    // applying the backward difference twice equals the Laplacian shifted
    // by one index (periodic)
    let grid = LatticeGrid::new(40, 1.0, Boundary::Periodic).unwrap();
    let mut rng = StdRng::seed_from_u64(23);
    let f = random_field(grid, &mut rng, 1.0);
    let dd = backward_diff(&backward_diff(&f));
    let lap = laplacian(&f);
    for j in 0..40 {
        let expect = lap.values()[(j + 40 - 1) % 40];
        assert!((dd.values()[j] - expect).norm() < 1e-14);
    }
}

#[test]
fn lemma_bounds_hold_on_random_triples() {
    // mapping and Lipschitz estimates for G and 𝒢 on >= 1000 random
    // (phi, psi, zeta) triples, power and saturable nonlinearities
    let grid = LatticeGrid::new(32, 1.0, Boundary::Periodic).unwrap();
    let mut rng = StdRng::seed_from_u64(41);
    let kinds = [
        NonlinearityKind::power(1.0),
        NonlinearityKind::power(2.0),
        NonlinearityKind::power(3.0),
        NonlinearityKind::Saturable { p: 1.0, lambda: 1.5 },
    ];
    let mut checked = 0usize;
    for trial in 0..300 {
        let q0 = 0.05 + rng.random::<f64>();
        let bg = random_background(grid, &mut rng, q0);
        let scale = if trial % 3 == 0 { 2.0 } else { 0.4 };
        let phi = random_field(grid, &mut rng, scale);
        let psi = random_field(grid, &mut rng, scale);
        for kind in &kinds {
            let p = kind.exponent();
            let k = kind.lipschitz_k();

            let g_phi = operator_g(&phi, &bg, kind).unwrap();
            let g_psi = operator_g(&psi, &bg, kind).unwrap();
            let lhs = norm(&g_phi, NormKind::l2());
            let bound = bounds::g_image(&phi, bg.norms(), k, p);
            assert!(lhs <= bound * (1.0 + 1e-12), "G image bound: {lhs} vs {bound}");

            let lhs = distance(&g_phi, &g_psi, NormKind::l2()).unwrap();
            let bound = bounds::g_lipschitz(&phi, &psi, bg.norms(), k, p).unwrap();
            assert!(lhs <= bound * (1.0 + 1e-12), "G Lipschitz bound: {lhs} vs {bound}");

            let cg_phi = operator_cal_g(&phi, &bg, p).unwrap();
            let cg_psi = operator_cal_g(&psi, &bg, p).unwrap();
            let lhs = norm(&cg_phi, NormKind::l2());
            let bound = bounds::cal_g_image(&phi, bg.norms(), p);
            assert!(lhs <= bound * (1.0 + 1e-12), "calG image bound: {lhs} vs {bound}");

            let lhs = distance(&cg_phi, &cg_psi, NormKind::l2()).unwrap();
            let bound = bounds::cal_g_lipschitz(&phi, &psi, bg.norms(), p).unwrap();
            assert!(lhs <= bound * (1.0 + 1e-12), "calG Lipschitz bound: {lhs} vs {bound}");

            checked += 4;
        }
    }
    assert!(checked >= 1000);
}

#[test]
fn split_rhs_matches_complex_rhs_on_random_fields() {
    let grid = LatticeGrid::new(36, 0.5, Boundary::Periodic).unwrap();
    let mut rng = StdRng::seed_from_u64(97);
    let bg = random_background(grid, &mut rng, 0.3);
    let specs = [
        ModelSpec::gal(0.8, 2.5).unwrap(),
        ModelSpec::gdnls(1.2, NonlinearityKind::power(1.5)).unwrap(),
        ModelSpec::modified_gdnls(0.7, NonlinearityKind::power(2.0), bg).unwrap(),
    ];
    for _ in 0..50 {
        let f = random_field(grid, &mut rng, 0.8);
        for spec in &specs {
            let direct = rhs(&f, 0.0, spec).unwrap();
            let v = split_real_imag(&f);
            let via = {
                let mut out = vec![0.0; v.len()];
                alnls_core::models::rhs_split::<f64>(spec, &grid, &v, &mut out);
                recombine(grid, &out).unwrap()
            };
            let d = distance(&direct, &via, NormKind::sup()).unwrap();
            let scale = norm(&direct, NormKind::sup()).max(1.0);
            assert!(d <= 1e-14 * scale, "split mismatch {d:e}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norms_absolutely_homogeneous(scale in 0.0f64..10.0, seed in 0u64..1000) {
        let grid = LatticeGrid::new(24, 1.0, Boundary::Periodic).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_field(grid, &mut rng, 1.0);
        for kind in [NormKind::l2(), NormKind::lr(3.0), NormKind::sup(), NormKind::l2_weighted()] {
            let a = norm(&f.scaled(Complex64::new(scale, 0.0)), kind);
            let b = scale * norm(&f, kind);
            prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0));
        }
    }

    #[test]
    fn norms_satisfy_triangle_inequality(seed in 0u64..1000) {
        let grid = LatticeGrid::new(24, 1.0, Boundary::Periodic).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_field(grid, &mut rng, 1.0);
        let g = random_field(grid, &mut rng, 1.0);
        for kind in [NormKind::l2(), NormKind::lr(3.0), NormKind::lr(4.0), NormKind::sup()] {
            let sum = norm(&f.add(&g).unwrap(), kind);
            let parts = norm(&f, kind) + norm(&g, kind);
            prop_assert!(sum <= parts * (1.0 + 1e-12));
        }
    }
}
