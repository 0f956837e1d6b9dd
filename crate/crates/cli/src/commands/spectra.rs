use std::fmt::Write;

use anyhow::Result;
use clap::Args;
use lil_core::manifold::{ManifoldSpec, SpectralTruncation, Spectrum};
use serde::{Deserialize, Serialize};

use super::Ctx;
use crate::config::{default_manifold, load, parse_manifold};
use crate::output::{write_atomic, Meta};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectraConfig {
    pub manifold: ManifoldSpec,
    /// Number of nonconstant modes N; the manifold default when absent.
    pub truncation: Option<usize>,
    pub seed: u64,
}

impl Default for SpectraConfig {
    fn default() -> Self {
        SpectraConfig { manifold: default_manifold(), truncation: None, seed: 0 }
    }
}

#[derive(Debug, Args)]
pub struct SpectraArgs {
    /// Manifold as JSON, e.g. '{"kind":"torus","L":[1,2]}'.
    #[arg(long, value_parser = parse_manifold)]
    pub manifold: Option<ManifoldSpec>,
    /// Truncation N (modes φ_0..φ_N).
    #[arg(long, short = 'n')]
    pub truncation: Option<usize>,
}

pub fn run(args: &SpectraArgs, ctx: &Ctx) -> Result<bool> {
    let mut cfg: SpectraConfig = load(ctx.config.as_deref())?;
    if let Some(m) = &args.manifold {
        cfg.manifold = m.clone();
    }
    if args.truncation.is_some() {
        cfg.truncation = args.truncation;
    }
    cfg.seed = ctx.seed(cfg.seed);
    let truncation = match cfg.truncation {
        Some(n) => SpectralTruncation::new(n),
        None => SpectralTruncation::default_for(&cfg.manifold),
    };
    let spectrum: Spectrum<f64> = Spectrum::new(&cfg.manifold, truncation)?;
    let meta = Meta::new("spectra", &cfg, cfg.seed)?;
    let mut csv = meta.csv_comment();
    csv.push_str("index,eigenvalue,mode\n");
    for p in spectrum.eigenpairs() {
        writeln!(csv, "{},{},\"{}\"", p.index, p.eigenvalue, p.mode)?;
    }
    write_atomic(&ctx.out, "spectra.csv", csv.as_bytes())?;
    Ok(true)
}
