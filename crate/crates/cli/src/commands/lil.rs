use std::fmt::Write;

use anyhow::{bail, Result};
use clap::Args;
use lil_core::green::lil_sigma;
use lil_core::harness::running_limsup;
use lil_core::manifold::ManifoldSpec;
use lil_core::sim::{run_ensemble, CheckpointSchedule, EnsembleOptions, SimConfig};
use serde::{Deserialize, Serialize};

use super::Ctx;
use crate::config::{default_manifold, default_schedule, load, parse_manifold, spectrum_for, Observable, Start};
use crate::output::{json_bytes, write_atomic, Artifact, Meta};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LilConfig {
    pub manifold: ManifoldSpec,
    pub f: Observable,
    pub horizon: f64,
    pub step: f64,
    /// Independent paths, one stream each.
    pub seeds: usize,
    /// Start of the running-maximum window.
    pub t0: f64,
    pub start: Start,
    pub checkpoints: CheckpointSchedule,
    /// Band for the final ratio `max μ_t(f) / σ_f`.
    pub band: (f64, f64),
    /// Fail unless at least this fraction of paths ends inside the band.
    pub require: Option<f64>,
    pub seed: u64,
}

impl Default for LilConfig {
    fn default() -> Self {
        LilConfig {
            manifold: default_manifold(),
            f: Observable::Label("phi1".into()),
            horizon: 1e6,
            step: 0.05,
            seeds: 8,
            t0: 100.0,
            start: Start::default(),
            checkpoints: default_schedule(),
            band: (0.4, 1.4),
            require: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Args)]
pub struct LilArgs {
    #[arg(long, value_parser = parse_manifold)]
    pub manifold: Option<ManifoldSpec>,
    /// Observable label (phiN, fN).
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long = "T", alias = "horizon")]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long)]
    pub t0: Option<f64>,
    /// Minimum fraction of paths whose ratio must fall in the band.
    #[arg(long)]
    pub require: Option<f64>,
}

#[derive(Serialize)]
struct PathRatio {
    path: u64,
    running_max: f64,
    ratio: Option<f64>,
    in_band: bool,
}

#[derive(Serialize)]
struct LilSummary {
    sigma: f64,
    paths: Vec<PathRatio>,
    in_band: usize,
    passed: bool,
}

pub fn run(args: &LilArgs, ctx: &Ctx) -> Result<bool> {
    let mut cfg: LilConfig = load(ctx.config.as_deref())?;
    if let Some(m) = &args.manifold {
        cfg.manifold = m.clone();
    }
    if let Some(f) = &args.f {
        cfg.f = Observable::Label(f.clone());
    }
    if let Some(t) = args.horizon {
        cfg.horizon = t;
    }
    if let Some(h) = args.step {
        cfg.step = h;
    }
    if let Some(n) = args.seeds {
        cfg.seeds = n;
    }
    if let Some(t) = args.t0 {
        cfg.t0 = t;
    }
    if args.require.is_some() {
        cfg.require = args.require;
    }
    cfg.seed = ctx.seed(cfg.seed);
    if cfg.t0 > cfg.horizon {
        bail!("window start t0 = {} exceeds the horizon {}", cfg.t0, cfg.horizon);
    }

    let spectrum = spectrum_for(&cfg.manifold, std::slice::from_ref(&cfg.f))?;
    let f = cfg.f.resolve(&spectrum)?;
    let sigma = lil_sigma(&f.centered())?;
    let sim = SimConfig {
        manifold: cfg.manifold.clone(),
        start: cfg.start.to_start_point(&cfg.manifold),
        step: cfg.step,
        horizon: cfg.horizon,
        seed: cfg.seed,
        observables: vec![f],
        checkpoints: cfg.checkpoints,
    };
    let ensemble = run_ensemble(&sim, cfg.seeds, EnsembleOptions::default())?;

    let meta = Meta::new("lil", &cfg, cfg.seed)?;
    let mut csv = meta.csv_comment();
    csv.push_str("path,t,mu,running_max,ratio\n");
    let mut paths = Vec::new();
    for p in &ensemble.paths {
        let rows = running_limsup(&p.checkpoints, 0, cfg.t0, sigma)?;
        for (r, c) in rows.iter().zip(p.checkpoints.iter().filter(|c| c.t >= cfg.t0)) {
            let ratio = r.ratio.map(|x| x.to_string()).unwrap_or_default();
            writeln!(csv, "{},{},{},{},{ratio}", p.path_id, r.t, c.mu[0], r.running_max)?;
        }
        let last = rows.last().expect("window inside the horizon");
        let in_band = last.ratio.is_some_and(|x| x >= cfg.band.0 && x <= cfg.band.1);
        paths.push(PathRatio { path: p.path_id, running_max: last.running_max, ratio: last.ratio, in_band });
    }
    let in_band = paths.iter().filter(|p| p.in_band).count();
    let passed = cfg.require.is_none_or(|q| in_band as f64 >= q * paths.len() as f64);
    write_atomic(&ctx.out, "lil.csv", csv.as_bytes())?;
    let result = LilSummary { sigma, paths, in_band, passed };
    write_atomic(&ctx.out, "lil.json", &json_bytes(&Artifact { meta: &meta, config: &cfg, result })?)?;
    Ok(passed)
}
