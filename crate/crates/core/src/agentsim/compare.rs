use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{simulate, simulate_myopic, MyopicRun, SimConfig, Trajectory};
use crate::error::Result;
use crate::model::{default_step, integrate_at, sup_norm_diff, ControlVector, ModelParams};

/// Largest sup-norm distance, over the sample times, between a simulated
/// trajectory and the kinetic solution from the same starting point.
pub fn compare_ode(trajectory: &Trajectory, params: &ModelParams, u: &ControlVector) -> Result<f64> {
    let Some(first) = trajectory.samples.first() else {
        return Ok(0.0);
    };
    let ode = integrate_at(params, &first.x(), u, &trajectory.times(), default_step(params))?;
    Ok(trajectory
        .samples
        .iter()
        .zip(&ode)
        .map(|(s, x)| sup_norm_diff(&s.x().as_array(), &x.as_array()))
        .fold(0.0, f64::max))
}

/// Runs `replicas` independent simulations, replica `i` seeded with
/// `cfg.seed + i`. Output is in replica order.
pub fn run_replicas(params: &ModelParams, cfg: &SimConfig, replicas: u64) -> Result<Vec<Trajectory>> {
    (0..replicas).into_par_iter().map(|i| simulate(params, &cfg.with_seed(cfg.seed.wrapping_add(i)))).collect()
}

/// Myopic counterpart of [`run_replicas`], with the same seeding.
pub fn run_myopic_replicas(params: &ModelParams, cfg: &SimConfig, replicas: u64) -> Result<Vec<MyopicRun>> {
    (0..replicas).into_par_iter().map(|i| simulate_myopic(params, &cfg.with_seed(cfg.seed.wrapping_add(i)))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationStats {
    pub replicas: u64,
    pub mean: f64,
    /// Sample standard deviation; zero for a single replica.
    pub std_dev: f64,
}

impl DeviationStats {
    /// Aggregates per-replica deviations, given in replica order.
    pub fn from_deviations(d: &[f64]) -> Self {
        let n = d.len() as f64;
        let mean = d.iter().sum::<f64>() / n;
        let var = if d.len() > 1 { d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        Self { replicas: d.len() as u64, mean, std_dev: var.sqrt() }
    }
}

/// [`compare_ode`] over independent replicas under the fixed control of `cfg`.
pub fn replica_deviation(params: &ModelParams, cfg: &SimConfig, replicas: u64) -> Result<DeviationStats> {
    let u = match cfg.policy {
        super::Policy::Fixed(u) => u,
        super::Policy::Myopic(_) => {
            return Err(crate::Error::InvalidParams("kinetic comparison needs a fixed policy".into()));
        }
    };
    let deviations: Vec<f64> = (0..replicas)
        .into_par_iter()
        .map(|i| {
            let traj = simulate(params, &cfg.with_seed(cfg.seed.wrapping_add(i)))?;
            compare_ode(&traj, params, &u)
        })
        .collect::<Result<_>>()?;
    Ok(DeviationStats::from_deviations(&deviations))
}
