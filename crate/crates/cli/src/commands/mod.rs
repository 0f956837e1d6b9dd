use std::path::PathBuf;

pub mod characterize;
pub mod chase;
pub mod cluster;
pub mod green;
pub mod heat;
pub mod lil;
pub mod simulate;
pub mod spectra;

/// Global flags shared by every subcommand.
pub struct Ctx {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: PathBuf,
}

impl Ctx {
    /// `--seed` wins over the config file.
    pub fn seed(&self, from_config: u64) -> u64 {
        self.seed.unwrap_or(from_config)
    }
}
