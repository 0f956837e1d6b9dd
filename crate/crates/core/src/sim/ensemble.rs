use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::path::{Checkpoint, Simulator};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EnsembleOptions {
    /// Cap on total simulated steps across all paths.
    pub step_budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathTrace {
    pub path_id: u64,
    pub checkpoints: Vec<Checkpoint>,
}

/// Per-path checkpoint records of an ensemble run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub seed: u64,
    pub paths: Vec<PathTrace>,
    /// Set when the step budget cut the horizon short.
    pub partial: bool,
    pub simulated_horizon: f64,
}

impl EnsembleSummary {
    /// μ_t(f_k) across paths at checkpoint number `idx`.
    pub fn mu_column(&self, idx: usize, k: usize) -> Vec<f64> {
        self.paths.iter().filter_map(|p| p.checkpoints.get(idx)).map(|c| c.mu[k]).collect()
    }

    /// L_t(f_k) across paths at checkpoint number `idx`.
    pub fn occupation_column(&self, idx: usize, k: usize) -> Vec<f64> {
        self.paths.iter().filter_map(|p| p.checkpoints.get(idx)).map(|c| c.occupation[k]).collect()
    }

    /// Checkpoint CSV: `t, path_id, mu_f1..mu_fn, L_f1..L_fn, x1..xd`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let Some(first) = self.paths.iter().find_map(|p| p.checkpoints.first()) else {
            return writeln!(w, "t,path_id");
        };
        let (k, d) = (first.mu.len(), first.position.len());
        let mut header = vec!["t".to_string(), "path_id".to_string()];
        header.extend((1..=k).map(|i| format!("mu_f{i}")));
        header.extend((1..=k).map(|i| format!("L_f{i}")));
        header.extend((1..=d).map(|i| format!("x{i}")));
        writeln!(w, "{}", header.join(","))?;
        for p in &self.paths {
            for c in &p.checkpoints {
                write!(w, "{},{}", c.t, p.path_id)?;
                for v in c.mu.iter().chain(&c.occupation).chain(&c.position) {
                    write!(w, ",{v}")?;
                }
                writeln!(w)?;
            }
        }
        Ok(())
    }
}

/// Runs `n_paths` independent paths; path `j` uses stream `j` of the seed.
/// The result does not depend on how rayon schedules the paths.
pub fn run_ensemble(config: &SimConfig, n_paths: usize, opts: EnsembleOptions) -> Result<EnsembleSummary> {
    if n_paths == 0 {
        return Err(Error::InvalidConfig("n_paths must be >= 1".into()));
    }
    config.validate()?;
    let mut cfg = config.clone();
    let mut partial = false;
    if let Some(budget) = opts.step_budget {
        let per_path = budget / n_paths as u64;
        if per_path < config.horizon_steps() {
            partial = true;
            cfg.horizon = per_path as f64 * config.step;
        }
    }
    let simulated_horizon = cfg.horizon;
    if cfg.horizon < cfg.checkpoints.first {
        let paths = (0..n_paths as u64).map(|path_id| PathTrace { path_id, checkpoints: Vec::new() }).collect();
        return Ok(EnsembleSummary { seed: cfg.seed, paths, partial, simulated_horizon });
    }
    let sim = Simulator::new(cfg)?;
    let paths = (0..n_paths as u64)
        .into_par_iter()
        .map(|path_id| PathTrace { path_id, checkpoints: sim.checkpoints(path_id).collect() })
        .collect();
    Ok(EnsembleSummary { seed: config.seed, paths, partial, simulated_horizon })
}
