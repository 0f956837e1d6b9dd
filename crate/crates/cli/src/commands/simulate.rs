use anyhow::Result;
use clap::Args;
use lil_core::manifold::ManifoldSpec;
use lil_core::sim::{run_ensemble, CheckpointSchedule, EnsembleOptions, SimConfig};
use serde::{Deserialize, Serialize};

use super::Ctx;
use crate::config::{default_manifold, default_schedule, load, parse_manifold, spectrum_for, Observable, Start};
use crate::output::{json_bytes, write_atomic, Artifact, Meta};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateConfig {
    pub manifold: ManifoldSpec,
    pub observables: Vec<Observable>,
    pub start: Start,
    pub step: f64,
    pub horizon: f64,
    pub paths: usize,
    pub checkpoints: CheckpointSchedule,
    /// Cap on total steps across paths; exceeding it truncates the horizon.
    pub step_budget: Option<u64>,
    pub seed: u64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            manifold: default_manifold(),
            observables: vec![Observable::Label("phi1".into())],
            start: Start::default(),
            step: 0.01,
            horizon: 100.0,
            paths: 1,
            checkpoints: default_schedule(),
            step_budget: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = parse_manifold)]
    pub manifold: Option<ManifoldSpec>,
    /// Comma separated observable labels (phiN, fN, const).
    #[arg(long, value_delimiter = ',')]
    pub observables: Option<Vec<String>>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Horizon T_max.
    #[arg(long = "T", alias = "horizon")]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long)]
    pub step_budget: Option<u64>,
}

#[derive(Serialize)]
struct SimulateSummary {
    partial: bool,
    simulated_horizon: f64,
    /// Final `μ_T(f_k)` per path.
    final_mu: Vec<Vec<f64>>,
}

pub fn run(args: &SimulateArgs, ctx: &Ctx) -> Result<bool> {
    let mut cfg: SimulateConfig = load(ctx.config.as_deref())?;
    if let Some(m) = &args.manifold {
        cfg.manifold = m.clone();
    }
    if let Some(o) = &args.observables {
        cfg.observables = o.iter().map(|s| Observable::Label(s.clone())).collect();
    }
    if let Some(h) = args.step {
        cfg.step = h;
    }
    if let Some(t) = args.horizon {
        cfg.horizon = t;
    }
    if let Some(p) = args.paths {
        cfg.paths = p;
    }
    if args.step_budget.is_some() {
        cfg.step_budget = args.step_budget;
    }
    cfg.seed = ctx.seed(cfg.seed);

    let spectrum = spectrum_for(&cfg.manifold, &cfg.observables)?;
    let observables = cfg.observables.iter().map(|o| o.resolve(&spectrum)).collect::<Result<Vec<_>>>()?;
    let sim = SimConfig {
        manifold: cfg.manifold.clone(),
        start: cfg.start.to_start_point(&cfg.manifold),
        step: cfg.step,
        horizon: cfg.horizon,
        seed: cfg.seed,
        observables,
        checkpoints: cfg.checkpoints,
    };
    let summary = run_ensemble(&sim, cfg.paths, EnsembleOptions { step_budget: cfg.step_budget })?;

    let meta = Meta::new("simulate", &cfg, cfg.seed)?;
    let mut csv = meta.csv_comment().into_bytes();
    summary.write_csv(&mut csv)?;
    write_atomic(&ctx.out, "simulate.csv", &csv)?;
    let result = SimulateSummary {
        partial: summary.partial,
        simulated_horizon: summary.simulated_horizon,
        final_mu: summary.paths.iter().map(|p| p.checkpoints.last().map(|c| c.mu.clone()).unwrap_or_default()).collect(),
    };
    write_atomic(&ctx.out, "simulate.json", &json_bytes(&Artifact { meta: &meta, config: &cfg, result })?)?;
    Ok(!summary.partial)
}
