use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{kappa_thresholds, solve_mfg};
use crate::error::{Error, Result};
use crate::model::{ModelParams, StrategyCase};

/// Rows within `NEAR_BIFURCATION_FACTOR / lambda` of a threshold are flagged.
pub const NEAR_BIFURCATION_FACTOR: f64 = 10.0;

pub const SWEEP_CSV_HEADER: &str = "kappa,count,cases,mu_min,mu_all,stable_all,near_bifurcation";

/// Equilibria found at one grid value of `kappa`, in order of `mu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub kappa: f64,
    pub count: usize,
    pub cases: Vec<StrategyCase>,
    pub mu_min: Option<f64>,
    pub mu_all: Vec<f64>,
    /// Every equilibrium is stable (vacuously true when there are none).
    pub stable_all: bool,
    pub near_bifurcation: bool,
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        let join = |v: Vec<String>| v.join(";");
        format!(
            "{},{},{},{},{},{},{}",
            self.kappa,
            self.count,
            join(self.cases.iter().map(|c| c.label().to_string()).collect()),
            self.mu_min.map(|m| m.to_string()).unwrap_or_default(),
            join(self.mu_all.iter().map(f64::to_string).collect()),
            self.stable_all,
            self.near_bifurcation,
        )
    }
}

/// Solves the equilibrium problem on `steps` evenly spaced values of
/// `kappa` in `[kappa_min, kappa_max]`, holding `k_I` fixed.
pub fn sweep_kappa(params: &ModelParams, kappa_min: f64, kappa_max: f64, steps: usize) -> Result<Vec<SweepRow>> {
    sweep_kappa_with_window(params, kappa_min, kappa_max, steps, NEAR_BIFURCATION_FACTOR / params.lambda)
}

/// As [`sweep_kappa`], flagging rows within `window` of a threshold.
pub fn sweep_kappa_with_window(
    params: &ModelParams,
    kappa_min: f64,
    kappa_max: f64,
    steps: usize,
    window: f64,
) -> Result<Vec<SweepRow>> {
    if !(kappa_min >= 0.0 && kappa_min < kappa_max && kappa_max.is_finite()) {
        return Err(Error::InvalidParams(format!("need 0 <= kappa_min < kappa_max, got {kappa_min} and {kappa_max}")));
    }
    if steps < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 sweep steps, got {steps}")));
    }
    params.validate()?;
    let thresholds = kappa_thresholds(params)?.active_thresholds();
    let rows = (0..steps)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 / (steps - 1) as f64;
            let kappa = if k + 1 == steps { kappa_max } else { kappa_min + t * (kappa_max - kappa_min) };
            let eqs = solve_mfg(&params.with_kappa(kappa));
            SweepRow {
                kappa,
                count: eqs.len(),
                cases: eqs.iter().map(|e| e.case).collect(),
                mu_min: eqs.first().map(|e| e.mu),
                mu_all: eqs.iter().map(|e| e.mu).collect(),
                stable_all: eqs.iter().all(|e| e.stable),
                near_bifurcation: thresholds.iter().any(|t| (kappa - t).abs() <= window),
            }
        })
        .collect();
    Ok(rows)
}

/// Maximal run of consecutive sweep rows with the same equilibrium count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountBand {
    pub count: usize,
    pub kappa_first: f64,
    pub kappa_last: f64,
}

/// Compresses a sweep into runs of equal count. Band edges lie between the
/// last row of one band and the first row of the next.
pub fn count_bands(rows: &[SweepRow]) -> Vec<CountBand> {
    let mut bands: Vec<CountBand> = Vec::new();
    for row in rows {
        match bands.last_mut() {
            Some(b) if b.count == row.count => b.kappa_last = row.kappa,
            _ => bands.push(CountBand { count: row.count, kappa_first: row.kappa, kappa_last: row.kappa }),
        }
    }
    bands
}

/// Midpoints between consecutive bands.
pub fn band_edges(bands: &[CountBand]) -> Vec<f64> {
    bands.windows(2).map(|w| 0.5 * (w[0].kappa_last + w[1].kappa_first)).collect()
}
