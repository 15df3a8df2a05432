//! `netmed`: latent-space network mediation analysis from the command line.
//!
//! Subcommands: `generate` synthetic datasets, `fit` the mediation model,
//! `select-dim` the latent dimension sweep, `simulate` bias/coverage
//! studies, `check-invariance` the isometry property, and `summarize` an
//! existing draws file. Every command is a pure function of its input
//! files, flags, and seed; reruns produce byte-identical data outputs.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical failure,
//! 3 threshold failure from `check-invariance`.

mod commands;
mod manifest;

use clap::{Parser, Subcommand};
use netmed_core::Error as CoreError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "netmed",
    version,
    about = "Latent-space network mediation analysis"
)]
struct Cli {
    /// Base random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for parallel replications (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Suppress progress messages.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate one synthetic dataset (network, actors, generating truth).
    Generate {
        /// Latent space dimension.
        #[arg(long)]
        dim: usize,
        /// Number of actors.
        #[arg(long)]
        n: usize,
        /// Population mediation effect (slopes are sqrt(med/D) per dim).
        #[arg(long)]
        med: f64,
        /// Direct effect.
        #[arg(long)]
        cprime: f64,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },

    /// Fit the mediation model to a network and actor file.
    Fit {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        actors: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 20_000)]
        iters: usize,
        #[arg(long, default_value_t = 6_000)]
        burnin: usize,
        #[arg(long, default_value_t = 1)]
        thin: usize,
        /// Outcome family: continuous (Gaussian) or binary (probit).
        #[arg(long, default_value = "continuous")]
        outcome: String,
        /// Network file format: auto, matrix, or edgelist.
        #[arg(long, default_value = "auto")]
        format: String,
        /// Collapse a directed matrix: max or min.
        #[arg(long)]
        symmetrize: Option<String>,
        /// Output path of the fit report (JSON).
        #[arg(long, default_value = "fit.json")]
        out: PathBuf,
        /// Also write retained draws to this CSV.
        #[arg(long)]
        draws: Option<PathBuf>,
    },

    /// Sweep candidate latent dimensions and pick the smallest BIC.
    SelectDim {
        #[arg(long)]
        network: PathBuf,
        /// Comma-separated candidate dimensions, e.g. 1,2,3,4,5.
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 2_000)]
        iters: usize,
        #[arg(long, default_value_t = 500)]
        burnin: usize,
        #[arg(long, default_value = "auto")]
        format: String,
        #[arg(long)]
        symmetrize: Option<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },

    /// Run a simulation grid and aggregate relative bias and coverage.
    Simulate {
        /// JSON list of conditions: [{"D":2,"n":100,"med":0.1521,"c_prime":0.14}, ...]
        #[arg(long)]
        grid: PathBuf,
        /// Replications per condition.
        #[arg(long, default_value_t = 50)]
        reps: usize,
        #[arg(long, default_value_t = 5_000)]
        iters: usize,
        #[arg(long, default_value_t = 2_000)]
        burnin: usize,
        /// Use the full-length chain and replication settings
        /// (500 reps, 20000 iterations, 6000 burn-in).
        #[arg(long)]
        paper_scale: bool,
        /// Also emit plot_data.csv with relative bias clipped to +/-20%.
        #[arg(long)]
        plot_data: bool,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },

    /// Verify the isometry invariance of the refit effects.
    CheckInvariance {
        /// Random (configuration, x, y) instances.
        #[arg(long, default_value_t = 20)]
        instances: usize,
        /// Total random isometries, spread over the instances.
        #[arg(long, default_value_t = 1_000)]
        isometries: usize,
        /// Actors per instance.
        #[arg(long, default_value_t = 40)]
        n: usize,
        /// Latent dimension of the instances.
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Maximum tolerated |delta|.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },

    /// Re-summarize an existing draws CSV at a different credible level.
    Summarize {
        #[arg(long)]
        draws: PathBuf,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[arg(long, default_value = "summary.json")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    if cli.threads > 0 {
        // Ignore failure if a pool already exists (e.g. repeated calls in
        // tests within one process).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }

    match commands::dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<CoreError>() {
                Some(CoreError::Numerical(_)) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
