use nalgebra::Complex;
use ogtt_core::model::{ModelParams, HORMONE_CLEARANCE as L};
use ogtt_core::stability::{
    characteristic_poly, characteristic_roots, cubic_discriminant, discriminant_root,
    is_locally_attractive, mode_matrices,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn residual_bound(x: Complex<f64>) -> f64 {
    1e-9 * x.norm().powi(3).max(1.0)
}

#[test]
fn discriminant_vanishes_at_boundary() {
    let root = discriminant_root(L);
    assert!(cubic_discriminant(root, L).abs() <= 1e-12);
    assert!((root - 16.0 / 27.0 * L * L).abs() < 1e-15);
}

#[test]
fn discriminant_sign_sweep() {
    let root = discriminant_root(L);
    for k in 1..=100 {
        let theta1 = k as f64 * 0.05;
        let d = cubic_discriminant(theta1, L);
        if theta1 < root {
            assert!(d > 0.0, "θ1 = {theta1}");
        } else {
            assert!(d < 0.0, "θ1 = {theta1}");
        }
    }
}

#[test]
fn real_roots_bracketed() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let root = discriminant_root(L);
    for _ in 0..50 {
        let theta1 = rng.random_range(1e-6..root);
        let r = characteristic_roots(theta1, L);
        assert!(r.all_real());
        let [x1, x2, x3] = r.roots.map(|z| z.re);
        assert!(-2.0 * L / 3.0 < x1 && x1 < 0.0, "θ1 = {theta1}: {x1}");
        assert!(-2.0 * L < x2 && x2 < -2.0 * L / 3.0, "θ1 = {theta1}: {x2}");
        assert!(-4.0 * L < x3 && x3 < -2.0 * L, "θ1 = {theta1}: {x3}");
        for x in r.roots {
            assert!(characteristic_poly(x, theta1, L).norm() <= residual_bound(x));
        }
    }
}

#[test]
fn attractivity_matches_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..100 {
        let theta = [
            rng.random_range(0.5..3.0),
            rng.random_range(0.01..29.0),
            rng.random_range(0.01..29.0),
            rng.random_range(70.0..110.0),
            rng.random_range(0.1..20.0),
        ];
        let p = ModelParams::from_vector(&theta);
        let attractive = is_locally_attractive(p.theta1, p.theta2, p.lambda5, p.lambda7);
        let (above, below) = mode_matrices(&p);
        let max_re = above
            .complex_eigenvalues()
            .iter()
            .chain(below.complex_eigenvalues().iter())
            .map(|e| e.re)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(attractive, "{theta:?}");
        assert!(max_re < 0.0, "{theta:?}: {max_re}");
    }
}

#[test]
fn large_gain_is_unstable() {
    assert!(!is_locally_attractive(100.0, 10.0, L, L));
    let p = ModelParams::from_vector(&[1.0, 100.0, 10.0, 90.0, 6.0]);
    let (above, _) = mode_matrices(&p);
    assert!(above.complex_eigenvalues().iter().any(|e| e.re > 0.0));
}

proptest! {
    #[test]
    fn roots_solve_the_cubic(theta1 in 0.0f64..200.0, lambda in 0.2f64..5.0) {
        let r = characteristic_roots(theta1, lambda);
        for x in r.roots {
            prop_assert!(characteristic_poly(x, theta1, lambda).norm() <= residual_bound(x));
        }
        if r.discriminant < 0.0 {
            prop_assert_eq!(r.roots[1], r.roots[2].conj());
        }
    }
}
