use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use lil_core::green::{lil_sigma, sobolev_norm, SpectralFunction};
use lil_core::harness::{
    ball_membership, chase_target, ellipsoid_from, make_basis, running_limsup, uniform_bound_check,
    uniform_bound_observables, ChaseSpec, ClusterCloud,
};
use lil_core::manifold::{ManifoldSpec, SpectralTruncation, Spectrum};
use lil_core::sim::{CheckpointSchedule, SimConfig, Simulator, StartPoint};
use lil_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spectrum(m: &ManifoldSpec, n: usize) -> Arc<Spectrum<f64>> {
    Arc::new(Spectrum::new(m, SpectralTruncation::new(n)).unwrap())
}

fn circle(n: usize) -> Arc<Spectrum<f64>> {
    spectrum(&ManifoldSpec::circle(TAU).unwrap(), n)
}

fn sim(observables: Vec<SpectralFunction<f64>>, step: f64, horizon: f64, seed: u64) -> Simulator {
    Simulator::new(SimConfig {
        manifold: observables[0].manifold().clone(),
        start: StartPoint::Fixed(vec![0.0]),
        step,
        horizon,
        seed,
        observables,
        checkpoints: CheckpointSchedule::default(),
    })
    .unwrap()
}

#[test]
fn gram_matrix_is_identity_up_to_32() {
    for m in [ManifoldSpec::circle(TAU).unwrap(), ManifoldSpec::torus(vec![1.0, 2.0, 0.5]).unwrap(), ManifoldSpec::sphere()] {
        let s = spectrum(&m, 40);
        for n in [1, 2, 7, 32] {
            let gram = make_basis(&s, n).unwrap().gram().unwrap();
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((gram[i * n + j] - expect).abs() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn single_observable_sigma() {
    for m in [ManifoldSpec::circle(3.0).unwrap(), ManifoldSpec::sphere()] {
        let s = spectrum(&m, 4);
        let f1 = &make_basis(&s, 1).unwrap().functions[0];
        assert!((lil_sigma(f1).unwrap() - (2.0 / s.volume()).sqrt()).abs() < 1e-15);
    }
}

#[test]
fn scaled_family_matches_dense_inverse() {
    let s = circle(6);
    let b = make_basis(&s, 2).unwrap();
    let e = ellipsoid_from(&[b.functions[0].scaled(2.0), b.functions[1].clone()]).unwrap();
    assert!((e.a[0] - PI / 4.0).abs() < 1e-15);
    assert!((e.a[3] - PI).abs() < 1e-15);

    // non-orthogonal pair against the closed-form 2×2 inverse
    let f = SpectralFunction::new(s.clone(), vec![0.0, 1.0, 0.5, 0.0, 0.2]).unwrap();
    let g = SpectralFunction::new(s.clone(), vec![0.0, -0.3, 0.8, 0.1]).unwrap();
    let bil = |u: &SpectralFunction<f64>, v: &SpectralFunction<f64>| -> f64 {
        (1..s.len()).map(|n| 2.0 / s.eigenvalue(n) * u.coeff(n) * v.coeff(n)).sum()
    };
    let (b11, b12, b22) = (bil(&f, &f), bil(&f, &g), bil(&g, &g));
    let det = b11 * b22 - b12 * b12;
    let m0 = TAU;
    let expect = [m0 / 2.0 * b22 / det, -m0 / 2.0 * b12 / det, -m0 / 2.0 * b12 / det, m0 / 2.0 * b11 / det];
    let e = ellipsoid_from(&[f, g]).unwrap();
    for (a, x) in e.a.iter().zip(expect) {
        assert!((a - x).abs() <= 1e-13 * x.abs().max(1.0), "{a} vs {x}");
    }
}

proptest! {
    #[test]
    fn ball_predicate_matches_radius(v in prop::collection::vec(-0.8f64..0.8, 1..6)) {
        let s = circle(8);
        let n = v.len();
        let e = ellipsoid_from(&make_basis(&s, n).unwrap().functions).unwrap();
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let radius = (2.0 / TAU).sqrt();
        prop_assume!((r - radius).abs() > 1e-10);
        prop_assert_eq!(ball_membership(&v, &e).unwrap().member, r <= radius);
    }

    #[test]
    fn membership_is_affine_covariant(c1 in 0.2f64..5.0, c2 in -5.0f64..-0.2, v1 in -1.0f64..1.0, v2 in -1.0f64..1.0) {
        let s = circle(8);
        let b = make_basis(&s, 2).unwrap();
        let f = SpectralFunction::new(s.clone(), vec![0.0, 0.4, 0.1, 0.3]).unwrap();
        let g = SpectralFunction::new(s.clone(), vec![0.0, 0.0, 0.7, -0.2, 0.5]).unwrap();
        for (p, q) in [(b.functions[0].clone(), b.functions[1].clone()), (f, g)] {
            let e = ellipsoid_from(&[p.clone(), q.clone()]).unwrap();
            let es = ellipsoid_from(&[p.scaled(c1), q.scaled(c2)]).unwrap();
            let m = ball_membership(&[v1, v2], &e).unwrap();
            let ms = ball_membership(&[c1 * v1, c2 * v2], &es).unwrap();
            prop_assert!((m.form - ms.form).abs() <= 1e-12 * m.form.max(1.0));
            prop_assume!((m.form - 1.0).abs() > 1e-9);
            prop_assert_eq!(m.member, ms.member);
        }
    }
}

#[test]
fn zero_observable_cloud_is_origin() {
    let s = circle(4);
    let zero = SpectralFunction::zero(s.clone());
    let sim = sim(vec![zero.clone(), zero], 0.05, 2000.0, 3);
    let cps: Vec<_> = sim.checkpoints(0).collect();
    let cloud = ClusterCloud::from_checkpoints(&cps, 2).unwrap();
    assert!(cloud.points.iter().all(|p| p.v == [0.0, 0.0]));
    let e = ellipsoid_from(&make_basis(&s, 2).unwrap().functions).unwrap();
    let c = cloud.containment(&e, 0.25, 0.0).unwrap();
    assert!(c.all_inside() && c.considered == cps.len());
    assert_eq!(cloud.angular_coverage(&e, 16, 0.2).unwrap().covered(), 0);
}

#[test]
fn cloud_rejects_unordered_checkpoints() {
    let s = circle(2);
    let sim = sim(make_basis(&s, 1).unwrap().functions, 0.05, 100.0, 3);
    let mut cps: Vec<_> = sim.checkpoints(0).collect();
    cps.swap(3, 4);
    assert!(matches!(ClusterCloud::from_checkpoints(&cps, 1), Err(Error::InvalidConfig(_))));
}

#[test]
fn cloud_csv_columns() {
    let s = circle(2);
    let b = make_basis(&s, 2).unwrap();
    let e = ellipsoid_from(&b.functions).unwrap();
    let sim = sim(b.functions, 0.05, 10.0, 3);
    let cps: Vec<_> = sim.checkpoints(0).collect();
    let cloud = ClusterCloud::from_checkpoints(&cps, 2).unwrap();
    let mut out = Vec::new();
    cloud.write_csv(&e, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,v1,v2,form_value,member"));
    assert_eq!(lines.count(), cps.len());
}

#[test]
fn running_max_is_monotone_and_constant_is_zero() {
    let s = circle(2);
    let f = SpectralFunction::basis(s.clone(), 1).unwrap();
    let sigma = lil_sigma(&f).unwrap();
    assert!((sigma - (2.0 / PI).sqrt()).abs() < 1e-15);
    let c = SpectralFunction::constant(s, 2.0);
    let sim = sim(vec![f, c], 0.05, 1e4, 5);
    let cps: Vec<_> = sim.checkpoints(0).collect();
    let rows = running_limsup(&cps, 0, 100.0, sigma).unwrap();
    assert!(rows.first().unwrap().t >= 100.0);
    assert!(rows.windows(2).all(|w| w[1].running_max >= w[0].running_max && w[1].t > w[0].t));
    assert!(rows.iter().all(|r| r.ratio == Some(r.running_max / sigma)));
    let flat = running_limsup(&cps, 1, 100.0, 0.0).unwrap();
    assert!(flat.iter().all(|r| r.running_max == 0.0 && r.ratio.is_none()));
    assert!(matches!(running_limsup(&cps, 0, 2.0, sigma), Err(Error::NormalizationUndefined(_))));
}

#[test]
fn chase_origin_on_short_runs() {
    let s = circle(2);
    let b = make_basis(&s, 1).unwrap();
    let e = ellipsoid_from(&b.functions).unwrap();
    let spec = ChaseSpec { target: vec![0.0], tolerances: vec![0.05], budget: 1e4 };
    let mut wins = 0;
    for seed in 0..5 {
        let sim = sim(b.functions.clone(), 0.1, 1e4, seed);
        let r = chase_target(sim.checkpoints(0), &e, &spec).unwrap();
        if r.success {
            wins += 1;
            assert!(r.errors[0] < 0.05 && r.times[0] <= 1e4);
            // the reported time really is a checkpoint with that error
            let cp = sim.checkpoints(0).find(|c| c.t == r.times[0]).unwrap();
            assert_eq!(cp.mu[0].abs(), r.errors[0]);
        } else {
            assert!(r.budget_exhausted && r.best_error.unwrap() >= 0.05);
        }
    }
    assert!(wins >= 3, "{wins}/5");
}

#[test]
fn chase_rejects_exterior_targets() {
    let s = circle(2);
    let b = make_basis(&s, 1).unwrap();
    let e = ellipsoid_from(&b.functions).unwrap();
    let sim = sim(b.functions, 0.1, 100.0, 0);
    let spec = ChaseSpec { target: vec![0.6], tolerances: vec![0.05], budget: 100.0 };
    assert!(matches!(chase_target(sim.checkpoints(0), &e, &spec), Err(Error::TargetNotInterior(_))));
}

#[test]
fn uniform_bound_surrogate() {
    let s = circle(50);
    let alpha = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut fs: Vec<SpectralFunction<f64>> = (0..4)
        .map(|_| {
            let mut c: Vec<f64> = (0..s.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            c[0] = 0.0;
            SpectralFunction::new(s.clone(), c).unwrap()
        })
        .collect();
    // unit H₀^α norm: φ₁ scaled by λ₁^{-α/2}
    let unit = SpectralFunction::basis(s.clone(), 1).unwrap().scaled(s.eigenvalue(1).powf(-alpha / 2.0));
    assert!((sobolev_norm(&unit, alpha).unwrap() - 1.0).abs() < 1e-15);
    fs.push(unit);
    let doubled: Vec<_> = fs.iter().map(|f| f.scaled(2.0)).collect();

    let run = |fs: &[SpectralFunction<f64>]| {
        let sim = sim(uniform_bound_observables(&s, fs).unwrap(), 0.05, 2000.0, 13);
        sim.checkpoints(0).collect::<Vec<_>>()
    };
    let cps = run(&fs);
    let report = uniform_bound_check(&cps, &s, alpha, &fs).unwrap();
    assert!(report.holds, "excess {}", report.max_excess);
    assert!(report.c_omega.is_finite() && report.c_omega > 0.0);
    let modes = s.len() - 1;
    for c in &cps {
        assert!(c.mu[modes + 4].abs() <= report.c_omega * (1.0 + 1e-12));
    }

    let cps2 = run(&doubled);
    for (a, b) in cps.iter().zip(&cps2) {
        for k in 0..fs.len() {
            assert_eq!(b.mu[modes + k], 2.0 * a.mu[modes + k]);
        }
    }
    for (f, g) in fs.iter().zip(&doubled) {
        assert_eq!(sobolev_norm(g, alpha).unwrap(), 2.0 * sobolev_norm(f, alpha).unwrap());
    }
    assert!(uniform_bound_check(&cps2, &s, alpha, &doubled).unwrap().holds);
    assert!(matches!(uniform_bound_check(&cps, &s, 0.5, &fs), Err(Error::AlphaNotAdmissible { .. })));
}
