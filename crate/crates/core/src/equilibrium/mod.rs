//! Stationary mean-field equilibria: pairs `(x, u)` where `x` is stationary
//! under `u` and `u` is optimal for an individual facing `x`.

mod sweep;
mod thresholds;

pub use sweep::{
    band_edges, count_bands, sweep_kappa, sweep_kappa_with_window, CountBand, SweepRow, NEAR_BIFURCATION_FACTOR,
    SWEEP_CSV_HEADER,
};
pub use thresholds::{kappa_of, kappa_star_pair, kappa_thresholds, BifurcationReport};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fixedpoint::{fixed_point_acyclic, fixed_point_mixed, FixedPoint};
use crate::hjb::{solve_case, HjbSolution, DEDUP_TOL};
use crate::model::{ControlVector, ModelParams, StateDist, StrategyCase};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "EquilibriumRecord", from = "EquilibriumRecord")]
pub struct Equilibrium {
    pub x: StateDist,
    pub u: ControlVector,
    pub case: StrategyCase,
    pub g: [f64; 4],
    pub mu: f64,
    pub eigenvalues: [Complex64; 3],
    pub stable: bool,
    /// Attains the smallest `mu` among the equilibria returned together.
    pub efficient: bool,
}

impl Equilibrium {
    fn pair(fp: &FixedPoint, hjb: &HjbSolution) -> Self {
        Self {
            x: fp.x,
            u: hjb.control(),
            case: fp.case,
            g: hjb.g,
            mu: hjb.mu,
            eigenvalues: fp.eigenvalues,
            stable: fp.stable,
            efficient: false,
        }
    }
}

/// Flat serialized form of an [`Equilibrium`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumRecord {
    pub case: StrategyCase,
    #[serde(rename = "x_DI")]
    pub x_di: f64,
    #[serde(rename = "x_DS")]
    pub x_ds: f64,
    #[serde(rename = "x_UI")]
    pub x_ui: f64,
    #[serde(rename = "x_US")]
    pub x_us: f64,
    pub u: ControlVector,
    #[serde(rename = "g_DI")]
    pub g_di: f64,
    #[serde(rename = "g_DS")]
    pub g_ds: f64,
    #[serde(rename = "g_UI")]
    pub g_ui: f64,
    #[serde(rename = "g_US")]
    pub g_us: f64,
    pub mu: f64,
    pub eig1_re: f64,
    pub eig1_im: f64,
    pub eig2_re: f64,
    pub eig2_im: f64,
    pub eig3_re: f64,
    pub eig3_im: f64,
    pub stable: bool,
    pub efficient: bool,
}

impl From<Equilibrium> for EquilibriumRecord {
    fn from(e: Equilibrium) -> Self {
        let [x_di, x_ds, x_ui, x_us] = e.x.as_array();
        let [g_di, g_ds, g_ui, g_us] = e.g;
        let [e1, e2, e3] = e.eigenvalues;
        Self {
            case: e.case,
            x_di,
            x_ds,
            x_ui,
            x_us,
            u: e.u,
            g_di,
            g_ds,
            g_ui,
            g_us,
            mu: e.mu,
            eig1_re: e1.re,
            eig1_im: e1.im,
            eig2_re: e2.re,
            eig2_im: e2.im,
            eig3_re: e3.re,
            eig3_im: e3.im,
            stable: e.stable,
            efficient: e.efficient,
        }
    }
}

impl From<EquilibriumRecord> for Equilibrium {
    fn from(r: EquilibriumRecord) -> Self {
        Self {
            x: StateDist::renormalized([r.x_di, r.x_ds, r.x_ui, r.x_us]),
            u: r.u,
            case: r.case,
            g: [r.g_di, r.g_ds, r.g_ui, r.g_us],
            mu: r.mu,
            eigenvalues: [
                Complex64::new(r.eig1_re, r.eig1_im),
                Complex64::new(r.eig2_re, r.eig2_im),
                Complex64::new(r.eig3_re, r.eig3_im),
            ],
            stable: r.stable,
            efficient: r.efficient,
        }
    }
}

/// Stationary points of one case; mixed cases with a vanishing recovery
/// rate have no regular reduction and contribute nothing.
fn case_fixed_points(params: &ModelParams, case: StrategyCase) -> Vec<FixedPoint> {
    let found = if case.is_acyclic() {
        fixed_point_acyclic(params, case).map(|fp| vec![fp])
    } else {
        fixed_point_mixed(params, case)
    };
    found.unwrap_or_default()
}

/// All consistent equilibria, sorted by `mu`.
///
/// Every stationary point of every case is paired with that case's HJB
/// solution at the point; the pair is kept when the case's control is
/// optimal there (slack at least `-VALIDITY_TOL`). An empty result is legal.
pub fn solve_mfg(params: &ModelParams) -> Vec<Equilibrium> {
    let mut out: Vec<Equilibrium> = StrategyCase::ALL
        .into_iter()
        .flat_map(|case| case_fixed_points(params, case))
        .filter_map(|fp| {
            let hjb = solve_case(params, &fp.x, fp.case).ok()?;
            hjb.valid.then(|| Equilibrium::pair(&fp, &hjb))
        })
        .collect();
    mark_efficient(&mut out);
    out.sort_by(|a, b| a.mu.total_cmp(&b.mu).then(a.case.cmp(&b.case)));
    out
}

fn mark_efficient(eqs: &mut [Equilibrium]) {
    let best = eqs.iter().map(|e| e.mu).fold(f64::INFINITY, f64::min);
    for e in eqs {
        e.efficient = e.mu - best <= DEDUP_TOL;
    }
}
