use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mfg_core::agentsim::Cadence;
use mfg_core::StrategyCase;

#[derive(Debug, Parser)]
#[command(name = "botnet-mfg", version, about = "Stationary mean-field game of botnet defense")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Flat `key = value` parameter file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Overrides one parameter; repeatable. Without --config all twelve keys must be set.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE", value_parser = parse_override)]
    pub overrides: Vec<(String, f64)>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Valid stationary HJB solutions at a population state.
    Hjb(HjbArgs),
    /// Fixed points of the kinetic equation for all four cases, with stability.
    FixedPoints,
    /// Stationary mean-field equilibria.
    Equilibria,
    /// Large-lambda bifurcation thresholds in kappa = k_D / k_I.
    Thresholds,
    /// Equilibria over a grid of kappa values.
    Sweep(SweepArgs),
    /// Event-driven simulation of N computers.
    Simulate(SimulateArgs),
    /// Randomized self-check of the solvers against oracles and invariants.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct HjbArgs {
    /// Population state `x_DI,x_DS,x_UI,x_US`.
    #[arg(long, value_name = "LIST4")]
    pub x: List4,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub kappa_min: f64,
    #[arg(long)]
    pub kappa_max: f64,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n_agents: u64,
    #[arg(long)]
    pub horizon: f64,
    /// Base seed; replica `i` uses `seed + i`.
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub replicas: u64,
    /// `fixed:<i|ii|iii|iv>` or `myopic`.
    #[arg(long, value_parser = PolicyArg::from_str)]
    pub policy: PolicyArg,
    /// When the myopic policy re-solves the HJB equation.
    #[arg(long, value_enum, default_value_t = CadenceArg::PerInterval)]
    pub cadence: CadenceArg,
    /// Starting distribution `x_DI,x_DS,x_UI,x_US`.
    #[arg(long, value_name = "LIST4", default_value = "0.25,0.25,0.25,0.25")]
    pub x: List4,
    /// Time between samples; defaults to horizon / 100.
    #[arg(long)]
    pub sample_interval: Option<f64>,
    /// CSV file for the myopic switch log (CSV output only).
    #[arg(long, value_name = "PATH")]
    pub switch_log: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub seed: u64,
    /// Draws per check.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct List4(pub [f64; 4]);

impl FromStr for List4 {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
            .collect::<Result<_, _>>()?;
        let arr: [f64; 4] = v.try_into().map_err(|v: Vec<f64>| format!("expected 4 values, got {}", v.len()))?;
        Ok(List4(arr))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyArg {
    Fixed(StrategyCase),
    Myopic,
}

impl FromStr for PolicyArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "myopic" {
            return Ok(PolicyArg::Myopic);
        }
        s.strip_prefix("fixed:")
            .and_then(StrategyCase::from_label)
            .map(PolicyArg::Fixed)
            .ok_or_else(|| format!("expected fixed:<i|ii|iii|iv> or myopic, got `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CadenceArg {
    PerInterval,
    PerEvent,
}

impl From<CadenceArg> for Cadence {
    fn from(c: CadenceArg) -> Self {
        match c {
            CadenceArg::PerInterval => Cadence::PerInterval,
            CadenceArg::PerEvent => Cadence::PerEvent,
        }
    }
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (key, value) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    let value = value.trim().parse::<f64>().map_err(|e| format!("`{value}`: {e}"))?;
    Ok((key.trim().to_string(), value))
}
