use std::fmt::Write;
use std::sync::Arc;

use anyhow::Result;
use clap::Args;
use lil_core::harness::{ball_membership, ellipsoid_from, make_basis, ClusterCloud};
use lil_core::manifold::{ManifoldSpec, SpectralTruncation, Spectrum};
use lil_core::sim::{run_ensemble, CheckpointSchedule, EnsembleOptions, SimConfig};
use serde::{Deserialize, Serialize};

use super::Ctx;
use crate::config::{default_manifold, default_schedule, load, parse_manifold, Start};
use crate::output::{json_bytes, write_atomic, Artifact, Meta};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClusterConfig {
    pub manifold: ManifoldSpec,
    /// Number of observables f_1..f_n.
    pub n: usize,
    pub horizon: f64,
    pub step: f64,
    pub seeds: usize,
    pub start: Start,
    pub checkpoints: CheckpointSchedule,
    /// Containment is tested in the ball inflated by `1 + inflation`.
    pub inflation: f64,
    pub t_min: f64,
    pub bins: usize,
    /// Normalized radius a point needs to count towards angular coverage.
    pub min_radius: f64,
    pub min_bins: usize,
    pub require_containment: Option<f64>,
    pub require_coverage: Option<f64>,
    pub seed: u64,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            manifold: default_manifold(),
            n: 2,
            horizon: 1e6,
            step: 0.05,
            seeds: 10,
            start: Start::default(),
            checkpoints: default_schedule(),
            inflation: 0.25,
            t_min: 1e3,
            bins: 16,
            min_radius: 0.2,
            min_bins: 8,
            require_containment: None,
            require_coverage: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[arg(long, value_parser = parse_manifold)]
    pub manifold: Option<ManifoldSpec>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "T", alias = "horizon")]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Minimum fraction of paths fully contained after t_min.
    #[arg(long)]
    pub require_containment: Option<f64>,
    /// Minimum fraction of paths reaching min_bins angular bins.
    #[arg(long)]
    pub require_coverage: Option<f64>,
}

#[derive(Serialize)]
struct PathCloud {
    path: u64,
    considered: usize,
    inside: usize,
    contained: bool,
    covered_bins: Option<usize>,
    covered: Option<bool>,
}

#[derive(Serialize)]
struct ClusterSummary {
    radius: f64,
    paths: Vec<PathCloud>,
    contained: usize,
    covered: usize,
    passed: bool,
}

pub fn run(args: &ClusterArgs, ctx: &Ctx) -> Result<bool> {
    let mut cfg: ClusterConfig = load(ctx.config.as_deref())?;
    if let Some(m) = &args.manifold {
        cfg.manifold = m.clone();
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(t) = args.horizon {
        cfg.horizon = t;
    }
    if let Some(h) = args.step {
        cfg.step = h;
    }
    if let Some(s) = args.seeds {
        cfg.seeds = s;
    }
    if args.require_containment.is_some() {
        cfg.require_containment = args.require_containment;
    }
    if args.require_coverage.is_some() {
        cfg.require_coverage = args.require_coverage;
    }
    cfg.seed = ctx.seed(cfg.seed);

    let spectrum = Arc::new(Spectrum::new(&cfg.manifold, SpectralTruncation::new(cfg.n))?);
    let basis = make_basis(&spectrum, cfg.n)?;
    let ellipsoid = ellipsoid_from(&basis.functions)?;
    let sim = SimConfig {
        manifold: cfg.manifold.clone(),
        start: cfg.start.to_start_point(&cfg.manifold),
        step: cfg.step,
        horizon: cfg.horizon,
        seed: cfg.seed,
        observables: basis.functions,
        checkpoints: cfg.checkpoints,
    };
    let ensemble = run_ensemble(&sim, cfg.seeds, EnsembleOptions::default())?;

    let meta = Meta::new("cluster", &cfg, cfg.seed)?;
    let mut csv = meta.csv_comment();
    csv.push_str("path,t");
    for i in 1..=cfg.n {
        write!(csv, ",v{i}")?;
    }
    csv.push_str(",form_value,member\n");
    let mut paths = Vec::new();
    for p in &ensemble.paths {
        let cloud = ClusterCloud::from_checkpoints(&p.checkpoints, cfg.n)?;
        for pt in &cloud.points {
            let m = ball_membership(&pt.v, &ellipsoid)?;
            write!(csv, "{},{}", p.path_id, pt.t)?;
            for v in &pt.v {
                write!(csv, ",{v}")?;
            }
            writeln!(csv, ",{},{}", m.form, m.member)?;
        }
        let c = cloud.containment(&ellipsoid, cfg.inflation, cfg.t_min)?;
        let covered_bins = if cfg.n >= 2 { Some(cloud.angular_coverage(&ellipsoid, cfg.bins, cfg.min_radius)?.covered()) } else { None };
        paths.push(PathCloud {
            path: p.path_id,
            considered: c.considered,
            inside: c.inside,
            contained: c.all_inside(),
            covered_bins,
            covered: covered_bins.map(|b| b >= cfg.min_bins),
        });
    }
    let contained = paths.iter().filter(|p| p.contained).count();
    let covered = paths.iter().filter(|p| p.covered == Some(true)).count();
    let total = paths.len() as f64;
    let passed = cfg.require_containment.is_none_or(|q| contained as f64 >= q * total)
        && cfg.require_coverage.is_none_or(|q| covered as f64 >= q * total);
    write_atomic(&ctx.out, "cluster.csv", csv.as_bytes())?;
    let radius = (2.0 / spectrum.volume()).sqrt();
    let result = ClusterSummary { radius, paths, contained, covered, passed };
    write_atomic(&ctx.out, "cluster.json", &json_bytes(&Artifact { meta: &meta, config: &cfg, result })?)?;
    Ok(passed)
}
