use std::fmt::Write;
use std::sync::Arc;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use lil_core::green::{kernel_g_alpha_spectral, kernel_g_alpha_timeint, semigroup_check, SpectralFunction, TimeQuadrature};
use lil_core::manifold::{ManifoldSpec, Point, SpectralTruncation, Spectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Ctx;
use crate::config::{default_manifold, load, parse_manifold, random_point};
use crate::output::{json_bytes, write_atomic, Artifact, Meta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Spectral,
    Timeint,
    Both,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GreenConfig {
    pub manifold: ManifoldSpec,
    pub truncation: Option<usize>,
    pub alpha: Vec<f64>,
    /// Explicit `(x, y)` coordinate pairs.
    pub pairs: Vec<(Vec<f64>, Vec<f64>)>,
    /// Additional pairs drawn uniformly from the seed.
    pub random_pairs: usize,
    pub route: Route,
    /// Accepted relative gap between the two routes.
    pub tolerance: f64,
    pub verify_semigroup: bool,
    pub semigroup_trials: usize,
    pub seed: u64,
}

impl Default for GreenConfig {
    fn default() -> Self {
        GreenConfig {
            manifold: default_manifold(),
            truncation: None,
            alpha: vec![1.0],
            pairs: Vec::new(),
            random_pairs: 0,
            route: Route::Both,
            tolerance: 1e-6,
            verify_semigroup: false,
            semigroup_trials: 20,
            seed: 0,
        }
    }
}

#[derive(Debug, Args)]
pub struct GreenArgs {
    #[arg(long, value_parser = parse_manifold)]
    pub manifold: Option<ManifoldSpec>,
    #[arg(long, short = 'n')]
    pub truncation: Option<usize>,
    /// Comma separated orders α > 0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "y")]
    pub x: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "x")]
    pub y: Option<Vec<f64>>,
    /// Number of random point pairs.
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long, value_enum)]
    pub route: Option<Route>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Also check G_β G_α = G_{α+β} on random functions.
    #[arg(long)]
    pub verify_semigroup: bool,
}

#[derive(Serialize)]
struct SemigroupTrial {
    alpha: f64,
    beta: f64,
    max_relative_error: f64,
    passed: bool,
}

#[derive(Serialize)]
struct SemigroupResult {
    passed: bool,
    trials: Vec<SemigroupTrial>,
}

pub fn run(args: &GreenArgs, ctx: &Ctx) -> Result<bool> {
    let mut cfg: GreenConfig = load(ctx.config.as_deref())?;
    if let Some(m) = &args.manifold {
        cfg.manifold = m.clone();
    }
    if args.truncation.is_some() {
        cfg.truncation = args.truncation;
    }
    if let Some(a) = &args.alpha {
        cfg.alpha = a.clone();
    }
    if let (Some(x), Some(y)) = (&args.x, &args.y) {
        cfg.pairs.push((x.clone(), y.clone()));
    }
    if let Some(n) = args.pairs {
        cfg.random_pairs = n;
    }
    if let Some(r) = args.route {
        cfg.route = r;
    }
    if let Some(t) = args.tolerance {
        cfg.tolerance = t;
    }
    cfg.verify_semigroup |= args.verify_semigroup;
    if cfg.pairs.is_empty() && cfg.random_pairs == 0 {
        cfg.random_pairs = 10;
    }
    cfg.seed = ctx.seed(cfg.seed);
    if let Some(&a) = cfg.alpha.iter().find(|&&a| !(a > 0.0)) {
        bail!("alpha must be positive, got {a}");
    }

    let m = &cfg.manifold;
    let truncation = cfg.truncation.map(SpectralTruncation::new).unwrap_or_else(|| SpectralTruncation::default_for(m));
    let s: Arc<Spectrum<f64>> = Arc::new(Spectrum::new(m, truncation)?);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pairs = Vec::new();
    for (x, y) in &cfg.pairs {
        pairs.push((Point::new(m, x.clone())?, Point::new(m, y.clone())?));
    }
    for _ in 0..cfg.random_pairs {
        pairs.push((random_point(m, &mut rng)?, random_point(m, &mut rng)?));
    }

    let meta = Meta::new("green", &cfg, cfg.seed)?;
    let mut csv = meta.csv_comment();
    csv.push_str("alpha,label,x,y,spectral,timeint,relative_gap,quadrature_error\n");
    let quad = TimeQuadrature::default();
    let mut passed = true;
    let coords = |p: &Point<f64>| p.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
    for &alpha in &cfg.alpha {
        let label = if alpha == 1.0 { "green kernel g" } else { "g_alpha" };
        for (x, y) in &pairs {
            let sp = match cfg.route {
                Route::Timeint => None,
                _ => Some(kernel_g_alpha_spectral(&s, alpha, x, y)?),
            };
            let ti = match cfg.route {
                Route::Spectral => None,
                _ => Some(kernel_g_alpha_timeint(&s, alpha, x, y, &quad)?),
            };
            let gap = match (&sp, &ti) {
                (Some(a), Some(b)) => {
                    let g = (a.value - b.value).abs() / a.value.abs().max(f64::MIN_POSITIVE);
                    passed &= g <= cfg.tolerance;
                    g.to_string()
                }
                _ => String::new(),
            };
            let show = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
            writeln!(
                csv,
                "{alpha},{label},{},{},{},{},{gap},{}",
                coords(x),
                coords(y),
                show(sp.map(|v| v.value)),
                show(ti.map(|v| v.value)),
                show(ti.map(|v| v.error_estimate)),
            )?;
        }
    }
    write_atomic(&ctx.out, "green.csv", csv.as_bytes())?;

    if cfg.verify_semigroup {
        let mut trials = Vec::with_capacity(cfg.semigroup_trials);
        for _ in 0..cfg.semigroup_trials {
            let (alpha, beta) = (rng.gen_range(0.05..3.0), rng.gen_range(0.05..3.0));
            let mut c: Vec<f64> = (0..s.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            c[0] = 0.0;
            let f = SpectralFunction::new(s.clone(), c)?;
            let r = semigroup_check(&f, alpha, beta)?;
            trials.push(SemigroupTrial { alpha, beta, max_relative_error: r.max_relative_error, passed: r.passed });
        }
        let ok = trials.iter().all(|t| t.passed);
        passed &= ok;
        let art = Artifact { meta: &meta, config: &cfg, result: SemigroupResult { passed: ok, trials } };
        write_atomic(&ctx.out, "semigroup.json", &json_bytes(&art)?)?;
    }
    Ok(passed)
}
