use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::green::{sobolev_norm, SpectralFunction};
use crate::manifold::{ManifoldSpec, Spectrum};
use crate::sim::Checkpoint;

/// Slack allowed in `|μ_t(f)| ≤ ‖f‖_{H₀^α} · √(Σ λ_n^{-α} μ_t(φ_n)²)`.
pub const CAUCHY_SCHWARZ_TOLERANCE: f64 = 1e-10;

/// Lower bound `max(d − 3/2, d/2)` that `α` must exceed.
pub fn admissible_alpha(manifold: &ManifoldSpec) -> f64 {
    let d = manifold.dimension() as f64;
    (d - 1.5).max(d / 2.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformBoundReport {
    pub alpha: f64,
    pub n_functions: usize,
    pub n_checkpoints: usize,
    /// Largest `|μ_t(f)| − ‖f‖ · C_t` over all functions and checkpoints.
    pub max_excess: f64,
    pub holds: bool,
    /// Empirical `C(ω) = sup_t √(Σ λ_n^{-α} μ_t(φ_n)²)`.
    pub c_omega: f64,
    /// Time at which the supremum was attained.
    pub c_omega_t: f64,
}

/// Observables to simulate for [`uniform_bound_check`]: `φ_1..φ_N`, then `fs`.
pub fn uniform_bound_observables(spectrum: &Arc<Spectrum<f64>>, fs: &[SpectralFunction<f64>]) -> Result<Vec<SpectralFunction<f64>>> {
    let mut out = (1..spectrum.len()).map(|n| SpectralFunction::basis(spectrum.clone(), n)).collect::<Result<Vec<_>>>()?;
    out.extend(fs.iter().cloned());
    Ok(out)
}

/// Checks the coefficientwise Cauchy–Schwarz bound at every checkpoint and
/// records the path's `C(ω)`. Checkpoints must carry the observables of
/// [`uniform_bound_observables`] in that order.
pub fn uniform_bound_check(
    checkpoints: &[Checkpoint],
    spectrum: &Spectrum<f64>,
    alpha: f64,
    fs: &[SpectralFunction<f64>],
) -> Result<UniformBoundReport> {
    let min = admissible_alpha(spectrum.manifold());
    if !(alpha > min) {
        return Err(Error::AlphaNotAdmissible { alpha, min });
    }
    let modes = spectrum.len() - 1;
    let norms = fs
        .iter()
        .map(|f| {
            if f.manifold() != spectrum.manifold() {
                return Err(Error::ManifoldMismatch);
            }
            if f.coeffs().len() > spectrum.len() {
                return Err(Error::BasisTooLarge { requested: f.coeffs().len() - 1, available: modes });
            }
            f.require_mean_zero()?;
            sobolev_norm(f, alpha)
        })
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<f64> = (1..=modes).map(|n| spectrum.eigenvalue(n).powf(-alpha)).collect();
    let mut report = UniformBoundReport {
        alpha,
        n_functions: fs.len(),
        n_checkpoints: checkpoints.len(),
        max_excess: f64::NEG_INFINITY,
        holds: true,
        c_omega: 0.0,
        c_omega_t: f64::NAN,
    };
    for c in checkpoints {
        if c.mu.len() != modes + fs.len() {
            return Err(Error::DimensionMismatch { expected: modes + fs.len(), got: c.mu.len() });
        }
        let ct = weights.iter().zip(&c.mu).map(|(w, m)| w * m * m).sum::<f64>().sqrt();
        if ct > report.c_omega {
            report.c_omega = ct;
            report.c_omega_t = c.t;
        }
        for (mu_f, norm) in c.mu[modes..].iter().zip(&norms) {
            report.max_excess = report.max_excess.max(mu_f.abs() - norm * ct);
        }
    }
    report.holds = !(report.max_excess > CAUCHY_SCHWARZ_TOLERANCE);
    Ok(report)
}
