use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use lil_core::characterize::{ball_equivalence_check, check, mu_of, CandidateDensity};
use lil_core::green::{sobolev_norm, SpectralFunction};
use lil_core::harness::{ball_membership, ellipsoid_from, make_basis};
use lil_core::manifold::{ManifoldSpec, SpectralTruncation, Spectrum};
use lil_core::{Error, SpectralFunction32, Spectrum32};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn circle(n: usize) -> Arc<Spectrum<f64>> {
    Arc::new(Spectrum::new(&ManifoldSpec::circle(TAU).unwrap(), SpectralTruncation::new(n)).unwrap())
}

fn density(s: &Arc<Spectrum<f64>>, coeffs: Vec<f64>) -> CandidateDensity<f64> {
    CandidateDensity::new(SpectralFunction::new(s.clone(), coeffs).unwrap())
}

// Random direction, rescaled so that ‖G_{1/2}^{-1} g‖ is `ratio` times the threshold.
fn random_mean_zero(s: &Arc<Spectrum<f64>>, rng: &mut ChaCha8Rng, ratio: f64) -> CandidateDensity<f64> {
    let mut c: Vec<f64> = (0..s.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    c[0] = 0.0;
    let norm = (1..s.len()).map(|n| s.eigenvalue(n) / 2.0 * c[n] * c[n]).sum::<f64>().sqrt();
    let target = ratio * (2.0 / s.volume()).sqrt();
    density(s, c.iter().map(|x| x * target / norm).collect())
}

#[test]
fn scaled_first_mode_threshold() {
    let s = circle(8);
    let phi1 = |c: f64| {
        let mut v = vec![0.0; 2];
        v[1] = c;
        check(&density(&s, v))
    };
    assert!(phi1(0.5).verdict);
    assert!(phi1(0.79).verdict);
    assert!(!phi1(0.80).verdict);
    // c/√2 against √(1/π)
    let r = phi1(0.5);
    assert!((r.half_inverse_norm - 0.5 / 2f64.sqrt()).abs() < 1e-15);
    assert!((r.threshold - (1.0 / PI).sqrt()).abs() < 1e-15);
    assert!(phi1((2.0 / PI).sqrt()).verdict);
}

#[test]
fn constant_density_fails_mean_condition() {
    let s = circle(4);
    let r = check(&CandidateDensity::new(SpectralFunction::basis(s, 0).unwrap()));
    assert!(!r.cond_b && !r.verdict);
    assert!((r.total_mass - TAU.sqrt()).abs() < 1e-14);
    assert!(r.cond_a && r.cond_c && r.cond_d);
}

#[test]
fn zero_density_is_member() {
    let r = check(&CandidateDensity::new(SpectralFunction::zero(circle(4))));
    assert!(r.cond_a && r.cond_b && r.cond_c && r.cond_d && r.verdict);
    assert_eq!(r.half_inverse_norm, 0.0);
}

#[test]
fn mu_of_extracts_coefficients() {
    let s = circle(6);
    let g = density(&s, vec![0.0, 1.0]);
    assert_eq!(mu_of(&g, &SpectralFunction::basis(s.clone(), 1).unwrap()).unwrap(), 1.0);
    assert_eq!(mu_of(&g, &SpectralFunction::constant(s.clone(), 3.0)).unwrap(), 0.0);
    let g = density(&s, vec![0.0, 0.3, -0.2, 0.7, 0.1, 0.0, 0.4]);
    let basis = make_basis(&s, 6).unwrap();
    for (j, f) in basis.functions.iter().enumerate() {
        let k = j + 1;
        let expect = (s.eigenvalue(k) / 2.0).sqrt() * g.g.coeff(k);
        assert!((mu_of(&g, f).unwrap() - expect).abs() < 1e-15);
    }
    let other = SpectralFunction::basis(Arc::new(Spectrum::new(&ManifoldSpec::sphere(), SpectralTruncation::new(3)).unwrap()), 1).unwrap();
    assert_eq!(mu_of(&g, &other), Err(Error::ManifoldMismatch));
}

#[test]
fn random_densities_agree_with_ball_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for m in [ManifoldSpec::circle(TAU).unwrap(), ManifoldSpec::torus(vec![1.0, 2.5]).unwrap(), ManifoldSpec::sphere()] {
        let s = Arc::new(Spectrum::new(&m, SpectralTruncation::new(32)).unwrap());
        for _ in 0..100 {
            let ratio = rng.gen_range(0.5..1.5);
            let g = random_mean_zero(&s, &mut rng, ratio);
            let r = ball_equivalence_check(&g, 32).unwrap();
            assert!(r.discrepancy <= 1e-14, "{}", r.discrepancy);
            assert!(r.agree);
        }
    }
}

#[test]
fn boundary_and_perturbed_densities_flip_together() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let s = circle(32);
    for _ in 0..20 {
        let g = random_mean_zero(&s, &mut rng, 1.0);
        let r = check(&g);
        let on_boundary = density(&s, g.g.scaled(r.threshold / r.half_inverse_norm).coeffs().to_vec());
        let b = ball_equivalence_check(&on_boundary, 32).unwrap();
        assert!(b.cond_d && b.ball_member, "boundary form {}", b.form);

        let k = rng.gen_range(1..s.len());
        let mut c = on_boundary.g.coeffs().to_vec();
        c[k] += 1e-6 * c[k].signum();
        let over = ball_equivalence_check(&density(&s, c), 32).unwrap();
        assert!(!over.cond_d && !over.ball_member);
    }
}

#[test]
fn equivalence_needs_mean_zero_and_size() {
    let s = circle(8);
    assert!(matches!(ball_equivalence_check(&density(&s, vec![1.0]), 32), Err(Error::NotMeanZero(_))));
    assert_eq!(
        ball_equivalence_check(&density(&s, vec![0.0, 1.0]), 4),
        Err(Error::BasisTooLarge { requested: 8, available: 4 })
    );
}

#[test]
fn accepted_densities_lie_in_every_ball() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let s = circle(32);
    let full = make_basis(&s, 32).unwrap();
    let mut accepted = 0;
    for _ in 0..200 {
        let ratio = rng.gen_range(0.5..1.5);
        let g = random_mean_zero(&s, &mut rng, ratio);
        if !check(&g).verdict {
            continue;
        }
        accepted += 1;
        for n in 1..=32 {
            let fs = &full.functions[..n];
            let v: Vec<f64> = fs.iter().map(|f| mu_of(&g, f).unwrap()).collect();
            assert!(ball_membership(&v, &ellipsoid_from(fs).unwrap()).unwrap().member);
        }
    }
    assert!(accepted > 50, "only {accepted} accepted samples");
}

#[test]
fn single_precision_check() {
    let s: Arc<Spectrum32> = Arc::new(Spectrum::new(&ManifoldSpec::circle(TAU).unwrap(), SpectralTruncation::new(4)).unwrap());
    let g = SpectralFunction32::new(s, vec![0.0, 0.5]).unwrap();
    let r = check(&CandidateDensity::new(g));
    assert!(r.verdict);
    assert!((r.half_inverse_norm - 0.5 / 2f64.sqrt()).abs() < 1e-6);
}

fn coeffs_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.3f64..0.3, 1..=32).prop_map(|mut v| {
        v.insert(0, 0.0);
        v
    })
}

proptest! {
    #[test]
    fn cond_d_is_scaled_sobolev_norm(c in coeffs_strategy()) {
        let s = circle(32);
        let g = density(&s, c);
        let r = check(&g);
        let h1 = sobolev_norm(&g.g, 1.0).unwrap() / 2f64.sqrt();
        prop_assert!((r.half_inverse_norm - h1).abs() <= 1e-15 * h1.max(1.0));
    }

    #[test]
    fn acceptance_is_scale_monotone(c in coeffs_strategy(), t in 0.0f64..=1.0) {
        let s = circle(32);
        let g = density(&s, c);
        if check(&g).verdict {
            prop_assert!(check(&CandidateDensity::new(g.g.scaled(t))).verdict);
        }
    }

    #[test]
    fn acceptance_survives_truncation(c in coeffs_strategy(), keep in 0usize..32) {
        let s = circle(32);
        let g = density(&s, c);
        if check(&g).verdict {
            prop_assert!(check(&CandidateDensity::new(g.g.truncated(keep))).verdict);
        }
    }
}
