use std::sync::Arc;

use anyhow::{bail, Result};
use clap::Args;
use lil_core::harness::{chase_target, ellipsoid_from, make_basis, ChaseSpec, TargetChaseResult};
use lil_core::manifold::{ManifoldSpec, SpectralTruncation, Spectrum};
use lil_core::sim::{CheckpointSchedule, SimConfig, Simulator};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Ctx;
use crate::config::{default_manifold, default_schedule, load, parse_manifold, Start};
use crate::output::{json_bytes, write_atomic, Artifact, Meta};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChaseConfig {
    pub manifold: ManifoldSpec,
    /// Target `(v_1, …, v_n)` in the default basis coordinates.
    pub target: Vec<f64>,
    /// Tolerances `ε_1 ≥ … ≥ ε_n`; a single value is repeated.
    pub eps: Vec<f64>,
    /// Time budget per path.
    pub budget: f64,
    pub step: f64,
    pub seeds: usize,
    pub start: Start,
    pub checkpoints: CheckpointSchedule,
    /// Minimum fraction of successful paths.
    pub require: Option<f64>,
    pub seed: u64,
}

impl Default for ChaseConfig {
    fn default() -> Self {
        ChaseConfig {
            manifold: default_manifold(),
            target: vec![0.0],
            eps: vec![0.05],
            budget: 1e5,
            step: 0.1,
            seeds: 1,
            start: Start::default(),
            checkpoints: default_schedule(),
            require: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Args)]
pub struct ChaseArgs {
    #[arg(long, value_parser = parse_manifold)]
    pub manifold: Option<ManifoldSpec>,
    /// Comma separated target coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub target: Option<Vec<f64>>,
    /// Comma separated tolerances.
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    #[arg(long)]
    pub budget: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long)]
    pub require: Option<f64>,
}

#[derive(Serialize)]
struct PathChase {
    path: u64,
    #[serde(flatten)]
    result: TargetChaseResult,
}

#[derive(Serialize)]
struct ChaseSummary {
    results: Vec<PathChase>,
    successes: usize,
    passed: bool,
}

pub fn run(args: &ChaseArgs, ctx: &Ctx) -> Result<bool> {
    let mut cfg: ChaseConfig = load(ctx.config.as_deref())?;
    if let Some(m) = &args.manifold {
        cfg.manifold = m.clone();
    }
    if let Some(t) = &args.target {
        cfg.target = t.clone();
    }
    if let Some(e) = &args.eps {
        cfg.eps = e.clone();
    }
    if let Some(b) = args.budget {
        cfg.budget = b;
    }
    if let Some(h) = args.step {
        cfg.step = h;
    }
    if let Some(s) = args.seeds {
        cfg.seeds = s;
    }
    if args.require.is_some() {
        cfg.require = args.require;
    }
    cfg.seed = ctx.seed(cfg.seed);
    let n = cfg.target.len();
    if n == 0 {
        bail!("empty target");
    }
    if cfg.eps.len() == 1 && n > 1 {
        cfg.eps = vec![cfg.eps[0]; n];
    }
    if cfg.seeds == 0 {
        bail!("seeds must be at least 1");
    }

    let spectrum = Arc::new(Spectrum::new(&cfg.manifold, SpectralTruncation::new(n))?);
    let basis = make_basis(&spectrum, n)?;
    let ellipsoid = ellipsoid_from(&basis.functions)?;
    let spec = ChaseSpec { target: cfg.target.clone(), tolerances: cfg.eps.clone(), budget: cfg.budget };
    // validates the target before any simulation
    chase_target(Vec::new(), &ellipsoid, &spec)?;
    let sim = Simulator::new(SimConfig {
        manifold: cfg.manifold.clone(),
        start: cfg.start.to_start_point(&cfg.manifold),
        step: cfg.step,
        horizon: cfg.budget,
        seed: cfg.seed,
        observables: basis.functions,
        checkpoints: cfg.checkpoints,
    })?;
    let results = (0..cfg.seeds as u64)
        .into_par_iter()
        .map(|path| Ok(PathChase { path, result: chase_target(sim.checkpoints(path), &ellipsoid, &spec)? }))
        .collect::<lil_core::Result<Vec<_>>>()?;

    let successes = results.iter().filter(|r| r.result.success).count();
    let passed = cfg.require.is_none_or(|q| successes as f64 >= q * results.len() as f64);
    let meta = Meta::new("chase", &cfg, cfg.seed)?;
    let result = ChaseSummary { results, successes, passed };
    write_atomic(&ctx.out, "chase.json", &json_bytes(&Artifact { meta: &meta, config: &cfg, result })?)?;
    Ok(passed)
}
