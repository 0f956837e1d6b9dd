//! `lil`: batch front end for spectra, heat and Green kernels, Brownian
//! ensembles and iterated-logarithm diagnostics.
//!
//! Exit status: 0 when every requested check passed, 1 when a check failed,
//! 2 on invalid input or runtime errors.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Ctx;

#[derive(Debug, Parser)]
#[command(name = "lil", version, about = "Iterated-logarithm machinery for Brownian motion on compact manifolds")]
struct Cli {
    /// JSON config for the subcommand; unknown keys are rejected.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Worker threads for path ensembles.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenpairs of the truncated Laplace–Beltrami spectrum.
    Spectra(commands::spectra::SpectraArgs),
    /// Truncated heat kernel p(t, x, y) with tail bounds.
    HeatKernel(commands::heat::HeatArgs),
    /// Kernels g_α by the series and the time integral.
    Green(commands::green::GreenArgs),
    /// Brownian ensembles with occupation accumulators.
    Simulate(commands::simulate::SimulateArgs),
    /// Running maxima of μ_t(f) against σ_f.
    Lil(commands::lil::LilArgs),
    /// Clouds of (μ_t(f_1), …, μ_t(f_n)) against the limiting ball.
    Cluster(commands::cluster::ClusterArgs),
    /// Checkpoint times approaching a target inside the ball.
    Chase(commands::chase::ChaseArgs),
    /// Decide whether a density belongs to the set of limit measures.
    Characterize(commands::characterize::CharacterizeArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let ctx = Ctx { config: cli.config, seed: cli.seed, out: cli.out };
    let result = match &cli.command {
        Command::Spectra(a) => commands::spectra::run(a, &ctx),
        Command::HeatKernel(a) => commands::heat::run(a, &ctx),
        Command::Green(a) => commands::green::run(a, &ctx),
        Command::Simulate(a) => commands::simulate::run(a, &ctx),
        Command::Lil(a) => commands::lil::run(a, &ctx),
        Command::Cluster(a) => commands::cluster::run(a, &ctx),
        Command::Chase(a) => commands::chase::run(a, &ctx),
        Command::Characterize(a) => commands::characterize::run(a, &ctx),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
