//! Brownian motion on the supported manifolds with occupation accumulators.
//!
//! Each path owns a ChaCha8 stream selected by `(seed, path_id)`, so paths
//! are reproducible bit for bit and independent of thread scheduling.

mod config;
mod ensemble;
mod path;

pub use config::{CheckpointSchedule, SimConfig, StartPoint};
pub use ensemble::{run_ensemble, EnsembleOptions, EnsembleSummary, PathTrace};
pub use path::{Checkpoint, CheckpointStream, PathSnapshot, PathState, RngSnapshot, Simulator, TrapezoidAccumulator};

/// `√(2 t log log t)`, defined for `t >= 3`.
pub fn lil_normalizer(t: f64) -> crate::Result<f64> {
    if !(t >= 3.0) {
        return Err(crate::Error::NormalizationUndefined(t));
    }
    Ok((2.0 * t * t.ln().ln()).sqrt())
}
