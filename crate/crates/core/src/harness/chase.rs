use serde::{Deserialize, Serialize};

use super::ellipsoid::{ball_membership, EllipsoidSpec};
use crate::error::{Error, Result};
use crate::sim::Checkpoint;

/// A target `v ∈ int E`, tolerances `ε_1 ≥ … ≥ ε_n > 0` and a time budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChaseSpec {
    pub target: Vec<f64>,
    pub tolerances: Vec<f64>,
    pub budget: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetChaseResult {
    pub target: Vec<f64>,
    pub tolerances: Vec<f64>,
    /// `t_1 < t_2 < …` for the levels reached.
    pub times: Vec<f64>,
    /// `|v_{k,t_k} − v_{1..k}|` at each recorded time.
    pub errors: Vec<f64>,
    pub success: bool,
    /// Smallest error seen at the first unreached level, after the last recorded time.
    pub best_error: Option<f64>,
    pub budget: f64,
    /// Last checkpoint time examined.
    pub budget_consumed: f64,
    pub budget_exhausted: bool,
}

/// Scans checkpoints for strictly increasing times `t_k` with
/// `|(μ_{t_k}(f_1), …, μ_{t_k}(f_k)) − (v_1, …, v_k)| < ε_k`.
pub fn chase_target<I>(checkpoints: I, e: &EllipsoidSpec, spec: &ChaseSpec) -> Result<TargetChaseResult>
where
    I: IntoIterator<Item = Checkpoint>,
{
    let n = spec.target.len();
    if n != e.n {
        return Err(Error::DimensionMismatch { expected: e.n, got: n });
    }
    if spec.tolerances.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: spec.tolerances.len() });
    }
    if spec.tolerances.iter().any(|&x| !(x > 0.0)) || spec.tolerances.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidConfig("tolerances must be positive and nonincreasing".into()));
    }
    if !(spec.budget.is_finite() && spec.budget > 0.0) {
        return Err(Error::InvalidConfig(format!("budget must be finite and positive, got {}", spec.budget)));
    }
    let form = ball_membership(&spec.target, e)?.form;
    if !(form < 1.0) {
        return Err(Error::TargetNotInterior(form));
    }
    let mut times = Vec::new();
    let mut errors = Vec::new();
    let mut best = f64::INFINITY;
    let mut consumed = 0.0;
    for c in checkpoints {
        if c.t > spec.budget {
            break;
        }
        consumed = c.t;
        if times.last().is_some_and(|&last| c.t <= last) {
            continue;
        }
        let k = times.len();
        if c.mu.len() <= k {
            return Err(Error::DimensionMismatch { expected: n, got: c.mu.len() });
        }
        let err = c.mu[..=k].iter().zip(&spec.target).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        if err < spec.tolerances[k] {
            times.push(c.t);
            errors.push(err);
            best = f64::INFINITY;
            if times.len() == n {
                break;
            }
        } else {
            best = best.min(err);
        }
    }
    let success = times.len() == n;
    Ok(TargetChaseResult {
        target: spec.target.clone(),
        tolerances: spec.tolerances.clone(),
        times,
        errors,
        success,
        best_error: (!success && best.is_finite()).then_some(best),
        budget: spec.budget,
        budget_consumed: consumed,
        budget_exhausted: !success,
    })
}
