//! Batch front-end for the skycell pipeline.
//!
//! Every subcommand writes its data to files in an output directory and logs
//! to standard error. Identical inputs and seeds give byte-identical files.

pub mod commands;
pub mod error;
pub mod manifest;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use skycell::deployment::DEFAULT_H_MAX;
use skycell::{Environment, EnvironmentKind, Scenario};

pub use error::{CliError, ExitCode};

#[derive(Debug, Parser)]
#[command(name = "skycell", version, about = "UAV base-station placement over elliptical cells")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Unset flags keep the scenario's values.
#[derive(Clone, Debug, Args)]
pub struct GlobalArgs {
    /// Master seed for `generate`; clustering seed elsewhere.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Propagation environment preset.
    #[arg(long, global = true)]
    pub env: Option<EnvironmentKind>,
    /// Channel bandwidth in Hz.
    #[arg(long, global = true)]
    pub bandwidth_hz: Option<f64>,
    /// Minimum user SNR in dB.
    #[arg(long, global = true)]
    pub snr_threshold_db: Option<f64>,
    /// Altitude ceiling in meters.
    #[arg(long, global = true, default_value_t = DEFAULT_H_MAX)]
    pub h_max: f64,
    /// Initial upper bound on the silhouette cluster count.
    #[arg(long, global = true)]
    pub k_max: Option<usize>,
    /// Planning method for `deploy`.
    #[arg(long, global = true, value_enum, default_value_t = Method::Ellipse)]
    pub method: Method,
}

impl GlobalArgs {
    /// Applies the scenario-level overrides.
    pub fn apply(&self, scenario: &mut Scenario) {
        if let Some(kind) = self.env {
            scenario.environment = Environment::preset(kind);
        }
        if let Some(b) = self.bandwidth_hz {
            scenario.radio.bandwidth_hz = b;
        }
        if let Some(t) = self.snr_threshold_db {
            scenario.radio.snr_threshold_db = t;
        }
        if let Some(k) = self.k_max {
            scenario.clustering.k_max = k;
        }
        if let Some(seed) = self.seed {
            scenario.clustering.rng_seed = seed;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Ellipse clustering followed by per-cluster deployment.
    Ellipse,
    /// Fixed-altitude, fixed-power circle packing.
    Circle,
    /// Exhaustive partition search (tiny instances only).
    Brute,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Ellipse => "ellipse",
            Method::Circle => "circle",
            Method::Brute => "brute",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write seeded Poisson-cluster-process scenario files.
    Generate(commands::generate::GenerateArgs),
    /// Plan a deployment for one scenario; writes plan.json (and trace.json).
    Deploy(commands::deploy::DeployArgs),
    /// Score a plan against its scenario; writes metrics.csv and throughput_cdf.csv.
    Evaluate(commands::evaluate::EvaluateArgs),
    /// Run methods over many scenarios; writes per_scenario.csv and aggregate.csv.
    Sweep(commands::sweep::SweepArgs),
    /// Path-loss curves for plotting.
    Curves(commands::curves::CurvesArgs),
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(args) => commands::generate::run(&cli.global, &args),
        Command::Deploy(args) => commands::deploy::run(&cli.global, &args),
        Command::Evaluate(args) => commands::evaluate::run(&args),
        Command::Sweep(args) => commands::sweep::run(&cli.global, &args),
        Command::Curves(args) => commands::curves::run(&cli.global, &args),
    }
}

