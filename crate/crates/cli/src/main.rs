//! `botnet-mfg`: solvers and simulator for the botnet defense mean-field game.
//!
//! Exit status is 0 on success, 1 when inputs fail validation (an error
//! record is written to stderr as JSON) and 2 when the config or the command
//! line cannot be parsed.

mod args;
mod emit;
mod params;

use std::process::ExitCode;

use clap::Parser;
use mfg_core::agentsim::{run_myopic_replicas, run_replicas, Policy, SimConfig};
use mfg_core::equilibrium::{kappa_thresholds, solve_mfg, sweep_kappa};
use mfg_core::fixedpoint::all_fixed_points;
use mfg_core::hjb::enumerate_hjb;
use mfg_core::validation::run_validation;
use mfg_core::StateDist;

use args::{Cli, Command, PolicyArg, SimulateArgs};
use emit::{Emitter, Failure, Replica};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(failure) => failure.report(),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let out = Emitter::new(cli.common.format, cli.common.out.clone());
    if let Command::Validate(v) = &cli.command {
        let report = run_validation(v.seed, v.trials);
        out.validation(&report)?;
        return Ok(if report.failures() == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }
    let params = params::load(&cli.common)?;
    match &cli.command {
        Command::Hjb(a) => {
            let x = StateDist::from_array(a.x.0)?;
            out.records(&enumerate_hjb(&params, &x))?;
        }
        Command::FixedPoints => out.records(&all_fixed_points(&params)?)?,
        Command::Equilibria => out.records(&solve_mfg(&params))?,
        Command::Thresholds => out.record(kappa_thresholds(&params)?)?,
        Command::Sweep(a) => out.records(&sweep_kappa(&params, a.kappa_min, a.kappa_max, a.steps)?)?,
        Command::Simulate(a) => simulate(&params, a, &out)?,
        Command::Validate(_) => unreachable!("handled above"),
    }
    Ok(ExitCode::SUCCESS)
}

fn simulate(params: &mfg_core::ModelParams, a: &SimulateArgs, out: &Emitter) -> Result<(), Failure> {
    let policy = match a.policy {
        PolicyArg::Fixed(case) => Policy::fixed(case),
        PolicyArg::Myopic => Policy::Myopic(a.cadence.into()),
    };
    let cfg = SimConfig {
        n_agents: a.n_agents,
        horizon: a.horizon,
        seed: a.seed,
        policy,
        sample_interval: a.sample_interval.unwrap_or(a.horizon / 100.0),
        initial: StateDist::from_array(a.x.0)?,
    };
    match policy {
        Policy::Fixed(_) => {
            let runs = run_replicas(params, &cfg, a.replicas)?;
            let replicas: Vec<Replica> =
                runs.iter().map(|t| Replica { trajectory: t, switches: None, unresolved: None }).collect();
            out.trajectories(&cfg, &replicas, a.switch_log.as_deref())
        }
        Policy::Myopic(_) => {
            let runs = run_myopic_replicas(params, &cfg, a.replicas)?;
            let replicas: Vec<Replica> = runs
                .iter()
                .map(|r| Replica {
                    trajectory: &r.trajectory,
                    switches: Some(&r.switches),
                    unresolved: Some(r.unresolved),
                })
                .collect();
            out.trajectories(&cfg, &replicas, a.switch_log.as_deref())
        }
    }
}
