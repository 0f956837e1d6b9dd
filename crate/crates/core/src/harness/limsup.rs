use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::Checkpoint;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimsupRow {
    pub t: f64,
    /// `max_{t₀ ≤ s ≤ t} μ_s(f)` over checkpoints.
    pub running_max: f64,
    /// `running_max / σ_f`; absent when `σ_f = 0`.
    pub ratio: Option<f64>,
}

/// Running maximum of observable `k` over checkpoints from `t0` on.
pub fn running_limsup(checkpoints: &[Checkpoint], k: usize, t0: f64, sigma: f64) -> Result<Vec<LimsupRow>> {
    if !(t0 >= 3.0) {
        return Err(Error::NormalizationUndefined(t0));
    }
    let mut best = f64::NEG_INFINITY;
    let mut rows = Vec::new();
    for c in checkpoints.iter().filter(|c| c.t >= t0) {
        let mu = *c.mu.get(k).ok_or(Error::IndexOutOfRange { index: k, len: c.mu.len() })?;
        best = best.max(mu);
        rows.push(LimsupRow { t: c.t, running_max: best, ratio: (sigma > 0.0).then(|| best / sigma) });
    }
    Ok(rows)
}
