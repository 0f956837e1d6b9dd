use std::fmt::Write;

use anyhow::{bail, Result};
use clap::Args;
use lil_core::manifold::{heat_kernel, ManifoldSpec, Mode, Point, SpectralTruncation, Spectrum};
use lil_core::quadrature::{periodic_nodes, SphereGrid};
use serde::{Deserialize, Serialize};

use super::Ctx;
use crate::config::{default_manifold, load, parse_manifold};
use crate::output::{write_atomic, Meta};

/// Accepted `|∫ p(t, x, ·) dm − 1|`.
const MASS_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HeatConfig {
    pub manifold: ManifoldSpec,
    pub truncation: Option<usize>,
    pub times: Vec<f64>,
    pub x: Option<Vec<f64>>,
    pub y: Option<Vec<f64>>,
    /// Integrate `p(t, x, ·)` by quadrature and require unit mass.
    pub check_mass: bool,
    pub seed: u64,
}

impl Default for HeatConfig {
    fn default() -> Self {
        HeatConfig {
            manifold: default_manifold(),
            truncation: None,
            times: vec![0.1, 1.0, 10.0],
            x: None,
            y: None,
            check_mass: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Args)]
pub struct HeatArgs {
    #[arg(long, value_parser = parse_manifold)]
    pub manifold: Option<ManifoldSpec>,
    #[arg(long, short = 'n')]
    pub truncation: Option<usize>,
    /// Comma separated times.
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Comma separated coordinates of x.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub y: Option<Vec<f64>>,
    /// Skip the unit-mass quadrature check.
    #[arg(long)]
    pub no_mass_check: bool,
}

/// Quadrature nodes exact for the retained modes, or `None` when too large.
fn mass_nodes(s: &Spectrum<f64>) -> Option<Vec<(Vec<f64>, f64)>> {
    match s.manifold() {
        ManifoldSpec::Sphere2 => {
            let lmax = s.modes().iter().map(|m| if let Mode::Harmonic { degree, .. } = m { *degree as usize } else { 0 }).max()?;
            let grid = SphereGrid::new(lmax + 2, 2 * lmax + 4);
            Some(grid.iter().map(|(p, w)| (p.to_vec(), w)).collect())
        }
        m => {
            let periods = m.periods()?;
            let kmax = s
                .modes()
                .iter()
                .filter_map(|m| match m {
                    Mode::Cos(k) | Mode::Sin(k) => k.iter().map(|v| v.unsigned_abs() as usize).max(),
                    _ => None,
                })
                .max()
                .unwrap_or(0);
            let per_axis = 2 * kmax + 2;
            if per_axis.checked_pow(periods.len() as u32)? > 1 << 20 {
                return None;
            }
            let axes: Vec<Vec<f64>> = periods.iter().map(|&l| periodic_nodes(l, per_axis)).collect();
            let cell: f64 = periods.iter().map(|l| l / per_axis as f64).product();
            let mut out = vec![(Vec::new(), cell)];
            for axis in &axes {
                out = out.into_iter().flat_map(|(p, w)| axis.iter().map(move |&c| ([p.clone(), vec![c]].concat(), w))).collect();
            }
            Some(out)
        }
    }
}

pub fn run(args: &HeatArgs, ctx: &Ctx) -> Result<bool> {
    let mut cfg: HeatConfig = load(ctx.config.as_deref())?;
    if let Some(m) = &args.manifold {
        cfg.manifold = m.clone();
    }
    if args.truncation.is_some() {
        cfg.truncation = args.truncation;
    }
    if let Some(t) = &args.times {
        cfg.times = t.clone();
    }
    if args.x.is_some() {
        cfg.x = args.x.clone();
    }
    if args.y.is_some() {
        cfg.y = args.y.clone();
    }
    if args.no_mass_check {
        cfg.check_mass = false;
    }
    cfg.seed = ctx.seed(cfg.seed);
    if cfg.times.is_empty() {
        bail!("no times requested");
    }
    let m = &cfg.manifold;
    let truncation = cfg.truncation.map(SpectralTruncation::new).unwrap_or_else(|| SpectralTruncation::default_for(m));
    let s: Spectrum<f64> = Spectrum::new(m, truncation)?;
    let x = Point::new(m, cfg.x.clone().unwrap_or_else(|| Point::<f64>::origin(m).coords().to_vec()))?;
    let y = Point::new(m, cfg.y.clone().unwrap_or_else(|| Point::<f64>::origin(m).coords().to_vec()))?;
    let nodes = if cfg.check_mass { mass_nodes(&s) } else { None };

    let meta = Meta::new("heat-kernel", &cfg, cfg.seed)?;
    let mut csv = meta.csv_comment();
    csv.push_str("t,value,tail_bound,mass\n");
    let mut passed = true;
    for &t in &cfg.times {
        let v = heat_kernel(&s, t, &x, &y)?;
        let mass = match &nodes {
            Some(nodes) => {
                let mut total = 0.0;
                for (c, w) in nodes {
                    total += w * heat_kernel(&s, t, &x, &Point::new(m, c.clone())?)?.value;
                }
                passed &= (total - 1.0).abs() <= MASS_TOLERANCE;
                total.to_string()
            }
            None => String::new(),
        };
        writeln!(csv, "{},{},{},{}", t, v.value, v.tail_bound, mass)?;
    }
    write_atomic(&ctx.out, "heat_kernel.csv", csv.as_bytes())?;
    Ok(passed)
}
