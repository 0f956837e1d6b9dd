use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use lil_core::characterize::{ball_equivalence_check, check, BallEquivalenceReport, CandidateDensity, CheckReport};
use lil_core::green::{SpectralFunction, SpectralFunctionWire};
use serde::{Deserialize, Serialize};

use super::Ctx;
use crate::config::load;
use crate::output::{json_bytes, write_atomic, Artifact, Meta};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CharacterizeConfig {
    /// The density `g = dμ/dm` in wire form.
    pub density: Option<SpectralFunctionWire>,
    /// Largest truncation for the ball-membership cross-check.
    pub n_max: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CharacterizeArgs {
    /// JSON file holding the density, `{"manifold": …, "coeffs": [{"n": 1, "c": 0.5}]}`.
    #[arg(long)]
    pub density: Option<PathBuf>,
}

#[derive(Serialize)]
struct CharacterizeResult {
    report: CheckReport,
    /// Present for mean-zero densities within `n_max` modes.
    ball_equivalence: Option<BallEquivalenceReport>,
}

pub fn run(args: &CharacterizeArgs, ctx: &Ctx) -> Result<bool> {
    let mut cfg: CharacterizeConfig = load(ctx.config.as_deref())?;
    if let Some(p) = &args.density {
        let text = fs::read_to_string(p).with_context(|| format!("reading density {}", p.display()))?;
        let wire: SpectralFunctionWire = serde_json::from_str(&text).with_context(|| format!("invalid density {}", p.display()))?;
        cfg.density = Some(wire);
    }
    cfg.seed = ctx.seed(cfg.seed);
    let Some(wire) = &cfg.density else {
        bail!("no density given; pass --density or set \"density\" in the config");
    };
    let g = CandidateDensity::new(SpectralFunction::<f64>::from_wire(wire, 1)?);
    let report = check(&g);
    let n_max = cfg.n_max.unwrap_or(usize::MAX);
    let ball_equivalence = if g.g.is_mean_zero() && g.g.spectrum().len() - 1 <= n_max {
        Some(ball_equivalence_check(&g, n_max)?)
    } else {
        None
    };
    let passed = report.verdict && ball_equivalence.as_ref().is_none_or(|b| b.agree);
    let meta = Meta::new("characterize", &cfg, cfg.seed)?;
    let result = CharacterizeResult { report, ball_equivalence };
    write_atomic(&ctx.out, "characterize.json", &json_bytes(&Artifact { meta: &meta, config: &cfg, result })?)?;
    Ok(passed)
}
