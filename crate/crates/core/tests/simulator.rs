use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use lil_core::green::SpectralFunction;
use lil_core::manifold::{ManifoldSpec, SpectralTruncation, Spectrum};
use lil_core::sim::{run_ensemble, CheckpointSchedule, EnsembleOptions, PathSnapshot, SimConfig, Simulator, StartPoint};
use lil_core::Error;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

fn circle() -> ManifoldSpec {
    ManifoldSpec::circle(TAU).unwrap()
}

fn spectrum(m: &ManifoldSpec, n: usize) -> Arc<Spectrum<f64>> {
    Arc::new(Spectrum::new(m, SpectralTruncation::new(n)).unwrap())
}

fn config(m: ManifoldSpec, observables: Vec<SpectralFunction<f64>>, step: f64, horizon: f64, seed: u64) -> SimConfig {
    let start = match m {
        ManifoldSpec::Sphere2 => StartPoint::Fixed(vec![0.0, 0.0, 1.0]),
        ManifoldSpec::FlatTorus { ref lengths } => StartPoint::Fixed(vec![0.0; lengths.len()]),
        ManifoldSpec::Circle { .. } => StartPoint::Fixed(vec![0.0]),
    };
    SimConfig { manifold: m, start, step, horizon, seed, observables, checkpoints: CheckpointSchedule::default() }
}

fn phi1_config(step: f64, horizon: f64, seed: u64) -> SimConfig {
    let m = circle();
    let s = spectrum(&m, 2);
    config(m, vec![SpectralFunction::basis(s, 1).unwrap()], step, horizon, seed)
}

// Kolmogorov limiting distribution with the Stephens small-sample correction.
fn ks_p_value(mut sample: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    let d = sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    let p: f64 = (1..=100).map(|k| 2.0 * (-1f64).powi(k - 1) * (-2.0 * (k * k) as f64 * lambda * lambda).exp()).sum();
    p.clamp(0.0, 1.0)
}

#[test]
fn circle_increments_are_gaussian_with_variance_h() {
    let h = 0.01;
    let normal = Normal::new(0.0, 1.0).unwrap();
    let passes = (0..10)
        .filter(|&seed| {
            let sim = Simulator::new(phi1_config(h, 1e3, seed)).unwrap();
            let mut st = sim.start(0);
            let mut z = Vec::with_capacity(100_000);
            for _ in 0..100_000 {
                let x0 = st.position().coords()[0];
                sim.step(&mut st).unwrap();
                let dx = st.position().coords()[0] - x0;
                // unwrap: increments are far smaller than half the circumference
                let dx = dx - TAU * (dx / TAU).round();
                z.push(dx / h.sqrt());
            }
            ks_p_value(z, |x| normal.cdf(x)) > 0.01
        })
        .count();
    assert!(passes >= 9, "{passes}/10 seeds passed");
}

#[test]
fn constant_observable_has_zero_mu() {
    let m = circle();
    let s = spectrum(&m, 2);
    let c = 1.7;
    // f = c·φ₀
    let mut coeffs = vec![0.0; s.len()];
    coeffs[0] = c;
    let f = SpectralFunction::new(s.clone(), coeffs).unwrap();
    let sim = Simulator::new(config(m, vec![f, SpectralFunction::zero(s)], 0.01, 100.0, 5)).unwrap();
    let mut st = sim.start(0);
    sim.run_until(&mut st, 100.0).unwrap();
    let t = st.time();
    assert_eq!(sim.mu(&st, 0).unwrap(), 0.0);
    assert_eq!(sim.mu(&st, 1).unwrap(), 0.0);
    assert_eq!(sim.occupation(&st, 1), 0.0);
    let expected = c * TAU.powf(-0.5) * t;
    assert!((sim.occupation(&st, 0) - expected).abs() <= 1e-14 * expected);
}

#[test]
fn mu_is_linear_in_the_observable() {
    let m = ManifoldSpec::torus(vec![TAU, 3.0]).unwrap();
    let s = spectrum(&m, 12);
    let f = SpectralFunction::new(s.clone(), (0..13).map(|n| ((n * 7 % 5) as f64 - 2.0) / 3.0).collect()).unwrap();
    let g = SpectralFunction::new(s.clone(), (0..13).map(|n| (n as f64 * 0.37).sin()).collect()).unwrap();
    let (a, b) = (1.5, -0.75);
    let fg = f.combine(a, &g, b).unwrap();
    let sim = Simulator::new(config(m, vec![f, g, fg], 0.01, 200.0, 9)).unwrap();
    let mut st = sim.start(2);
    sim.run_until(&mut st, 200.0).unwrap();
    let (mf, mg, mfg) = (sim.mu(&st, 0).unwrap(), sim.mu(&st, 1).unwrap(), sim.mu(&st, 2).unwrap());
    assert!((mfg - (a * mf + b * mg)).abs() <= 1e-12, "{mfg} vs {}", a * mf + b * mg);
}

#[test]
fn sphere_paths_stay_on_the_sphere() {
    let m = ManifoldSpec::sphere();
    let s = spectrum(&m, 3);
    let sim = Simulator::new(config(m, vec![SpectralFunction::basis(s, 2).unwrap()], 0.01, 1e4, 3)).unwrap();
    let mut st = sim.start(0);
    sim.advance(&mut st, 1_000_000).unwrap();
    let x = st.position().coords();
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    assert!((r - 1.0).abs() <= 1e-12, "|X| = {r}");
}

#[test]
fn sphere_rejects_coarse_steps() {
    let m = ManifoldSpec::sphere();
    let s = spectrum(&m, 3);
    let cfg = config(m, vec![SpectralFunction::basis(s, 1).unwrap()], 0.05, 10.0, 0);
    assert!(matches!(Simulator::new(cfg), Err(Error::InvalidConfig(_))));
}

#[test]
fn occupation_averages_vanish_for_mean_zero_observables() {
    let t = 1e5;
    let passes = (0..10)
        .filter(|&seed| {
            let sim = Simulator::new(phi1_config(0.05, t, seed)).unwrap();
            let mut st = sim.start(0);
            sim.run_until(&mut st, t).unwrap();
            // ‖φ₁‖_{L²} = 1
            (sim.occupation(&st, 0) / t).abs() <= 0.05
        })
        .count();
    assert!(passes >= 9, "{passes}/10 seeds passed");
}

#[test]
fn circle_occupation_histogram_is_uniform() {
    let bins = 32;
    let chi2 = ChiSquared::new((bins - 1) as f64).unwrap();
    let passes = (0..10)
        .filter(|&seed| {
            let sim = Simulator::new(phi1_config(0.05, 1e5, 100 + seed)).unwrap();
            let mut st = sim.start(0);
            let mut counts = vec![0u64; bins];
            // one sample every 10 time units, well past the mixing time 2/λ₁
            for _ in 0..10_000 {
                sim.advance(&mut st, 200).unwrap();
                let b = (st.position().coords()[0] / TAU * bins as f64) as usize;
                counts[b.min(bins - 1)] += 1;
            }
            let expected = 10_000.0 / bins as f64;
            let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
            1.0 - chi2.cdf(stat) > 0.01
        })
        .count();
    assert!(passes >= 9, "{passes}/10 seeds passed");
}

#[test]
fn accumulators_are_additive_across_resume() {
    let sim = Simulator::new(phi1_config(0.01, 1000.0, 21)).unwrap();
    let mut whole = sim.start(4);
    sim.run_until(&mut whole, 1000.0).unwrap();

    let mut first = sim.start(4);
    sim.run_until(&mut first, 500.0).unwrap();
    let json = serde_json::to_string(&sim.snapshot(&first)).unwrap();
    let snap: PathSnapshot = serde_json::from_str(&json).unwrap();
    let mut second = sim.resume(&snap).unwrap();
    sim.run_until(&mut second, 1000.0).unwrap();

    assert_eq!(sim.occupation(&whole, 0).to_bits(), sim.occupation(&second, 0).to_bits());
    assert_eq!(whole.position().coords(), second.position().coords());
    assert_eq!(sim.snapshot(&whole), sim.snapshot(&second));
}

#[test]
fn resume_rejects_foreign_snapshots() {
    let sim = Simulator::new(phi1_config(0.01, 10.0, 1)).unwrap();
    let snap = sim.snapshot(&sim.start(0));
    let other = Simulator::new(phi1_config(0.01, 10.0, 2)).unwrap();
    assert!(matches!(other.resume(&snap), Err(Error::InvalidConfig(_))));
}

#[test]
fn clt_variance_matches_green_form() {
    let mut cfg = phi1_config(0.05, 500.0, 77);
    cfg.start = StartPoint::Uniform;
    let t = 500.0;
    let summary = run_ensemble(&cfg, 1024, EnsembleOptions::default()).unwrap();
    let last = summary.paths[0].checkpoints.len() - 1;
    assert_eq!(summary.paths[0].checkpoints[last].t, t);
    let z: Vec<f64> = summary.occupation_column(last, 0).iter().map(|l| l / t.sqrt()).collect();
    let n = z.len() as f64;
    let mean = z.iter().sum::<f64>() / n;
    let var = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let sigma2 = 2.0 / PI;
    assert!((var - sigma2).abs() <= 0.1 * sigma2, "variance {var}");
    assert!(mean.abs() <= 3.0 * (var / n).sqrt(), "mean {mean}");
}

#[test]
fn ensembles_are_reproducible() {
    let cfg = phi1_config(0.01, 50.0, 8);
    let csv = |s: &lil_core::sim::EnsembleSummary| {
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        buf
    };
    let a = run_ensemble(&cfg, 6, EnsembleOptions::default()).unwrap();
    let b = run_ensemble(&cfg, 6, EnsembleOptions::default()).unwrap();
    assert_eq!(csv(&a), csv(&b));
    let other = run_ensemble(&phi1_config(0.01, 50.0, 9), 6, EnsembleOptions::default()).unwrap();
    assert_ne!(csv(&a), csv(&other));
    // paths use distinct streams
    assert_ne!(a.paths[0].checkpoints, a.paths[1].checkpoints);
}

#[test]
fn step_budget_flags_partial_results() {
    let cfg = phi1_config(0.01, 100.0, 8);
    let full = run_ensemble(&cfg, 4, EnsembleOptions::default()).unwrap();
    assert!(!full.partial);
    let cut = run_ensemble(&cfg, 4, EnsembleOptions { step_budget: Some(4 * 2_000) }).unwrap();
    assert!(cut.partial);
    assert_eq!(cut.simulated_horizon, 20.0);
    // the truncated run is a prefix of the full one
    let n = cut.paths[0].checkpoints.len();
    assert_eq!(cut.paths[0].checkpoints[..n - 1], full.paths[0].checkpoints[..n - 1]);
}
