use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::green::SpectralFunction;
use crate::manifold::ManifoldSpec;

/// Where each path starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartPoint {
    /// Fixed coordinates (periodic angles, or a 3-vector on the sphere).
    Fixed(Vec<f64>),
    /// Drawn from the normalized volume measure, using the path's own stream.
    Uniform,
}

/// Geometric checkpoint times `first · ratio^i`, capped by the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckpointSchedule {
    pub first: f64,
    pub ratio: f64,
}

impl Default for CheckpointSchedule {
    fn default() -> Self {
        CheckpointSchedule { first: 3.0, ratio: 1.05 }
    }
}

impl CheckpointSchedule {
    /// Step indices at which checkpoints fire: the first grid time at or past
    /// each target, deduplicated, plus the horizon itself.
    pub fn step_indices(&self, step: f64, horizon_steps: u64) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::new();
        let mut target = self.first;
        loop {
            let idx = (target / step - 1e-9).ceil().max(0.0) as u64;
            if idx > horizon_steps {
                break;
            }
            if out.last() != Some(&idx) {
                out.push(idx);
            }
            target *= self.ratio;
        }
        if out.last() != Some(&horizon_steps) && (horizon_steps as f64) * step >= self.first - 1e-9 {
            out.push(horizon_steps);
        }
        out
    }
}

/// Simulation parameters for one family of paths.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub manifold: ManifoldSpec,
    pub start: StartPoint,
    /// Time step h.
    pub step: f64,
    /// Horizon T_max.
    pub horizon: f64,
    pub seed: u64,
    pub observables: Vec<SpectralFunction<f64>>,
    pub checkpoints: CheckpointSchedule,
}

/// Largest step accepted on the sphere, where stepping is only weakly first order.
pub const SPHERE_MAX_STEP: f64 = 0.01;

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.step > 0.0 && self.step <= 0.1) {
            return bad(format!("step h must lie in (0, 0.1], got {}", self.step));
        }
        if matches!(self.manifold, ManifoldSpec::Sphere2) && self.step > SPHERE_MAX_STEP {
            return bad(format!("sphere stepping needs h <= {SPHERE_MAX_STEP}, got {}", self.step));
        }
        let c = &self.checkpoints;
        if !(c.first >= 3.0) {
            return bad(format!("first checkpoint must be >= 3, got {}", c.first));
        }
        if !(self.horizon.is_finite() && self.horizon >= c.first) {
            return bad(format!("horizon {} must be finite and >= first checkpoint {}", self.horizon, c.first));
        }
        if !(c.ratio > 1.0 && c.ratio <= 2.0) {
            return bad(format!("checkpoint ratio must lie in (1, 2], got {}", c.ratio));
        }
        for f in &self.observables {
            if f.manifold() != &self.manifold {
                return Err(Error::ManifoldMismatch);
            }
        }
        if let StartPoint::Fixed(c) = &self.start {
            if c.len() != self.manifold.coordinate_len() {
                return Err(Error::DimensionMismatch { expected: self.manifold.coordinate_len(), got: c.len() });
            }
        }
        Ok(())
    }

    /// Number of whole steps up to the horizon.
    pub fn horizon_steps(&self) -> u64 {
        (self.horizon / self.step + 1e-9).floor() as u64
    }
}
