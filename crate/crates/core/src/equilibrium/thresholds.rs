use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixedpoint::{fixed_point_acyclic, fixed_point_mixed_asymptotic};
use crate::model::{alpha_beta, classify_domain, ModelParams, StateDist, StrategyCase};

/// Large-`lambda` bifurcation points in the cost ratio `kappa = k_D / k_I`.
///
/// The three reference states are the unprotected SIS point `x*_UI` of
/// case (i), the defended SIS point `x*_DI` of case (ii) and the limiting
/// case (iii) point `x-bar*_UI`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationReport {
    pub x_star_ui: f64,
    pub x_star_di: f64,
    pub x_bar_star_ui: f64,
    /// `kappa(x*_UI)`; present only with equal recovery rates.
    pub kappa_star: Option<f64>,
    /// `kappa(x-bar*_UI)`; present only with equal recovery rates.
    pub kappa_bar_star: Option<f64>,
    /// `(beta - alpha) / (beta + q_rec_U)` at the case (i) point.
    pub kappa_1: f64,
    /// `delta / (alpha + q_rec_D)` at the case (ii) point.
    pub kappa_2: f64,
    /// `delta / (alpha + q_rec_D)` at the case (iii) point.
    pub kappa_3: f64,
    /// `(beta - alpha) / (beta + q_rec_U)` at the case (iii) point.
    pub kappa_4: f64,
    /// Domain labels at the case (i), (ii) and (iii) points.
    pub domains: [String; 3],
    /// Whether `kappa(z)` increases on `[0, 1]`.
    pub kappa_increasing: bool,
    pub equal_recovery: bool,
}

impl BifurcationReport {
    /// The thresholds that govern the large-`lambda` band structure:
    /// `kappa*` and `kappa-bar*` with equal recovery, `kappa_1..kappa_4`
    /// otherwise.
    pub fn active_thresholds(&self) -> Vec<f64> {
        match (self.kappa_star, self.kappa_bar_star) {
            (Some(a), Some(b)) => vec![a, b],
            _ => vec![self.kappa_1, self.kappa_2, self.kappa_3, self.kappa_4],
        }
    }
}

/// `kappa(z) = ((q_inf_U - q_inf_D) v_H + z (beta_UU - beta_UD)) / (q_inf_U v_H + z beta_UU + q)`,
/// defined when both recovery rates equal `q`.
pub fn kappa_of(params: &ModelParams, z: f64) -> Result<f64> {
    let p = params;
    if !p.has_equal_recovery() {
        return Err(Error::AssumptionViolation(format!(
            "kappa(z) needs q_rec_D = q_rec_U, got {} and {}",
            p.q_rec_d, p.q_rec_u
        )));
    }
    Ok(((p.q_inf_u - p.q_inf_d) * p.v_h + z * (p.beta_uu - p.beta_ud)) / (p.direct_u() + z * p.beta_uu + p.q_rec_d))
}

/// `(kappa*, kappa-bar*)`; requires equal recovery rates.
pub fn kappa_star_pair(params: &ModelParams) -> Result<(f64, f64)> {
    let x_star = fixed_point_acyclic(params, StrategyCase::AlwaysUnprotected)?.x.ui();
    let x_bar = fixed_point_mixed_asymptotic(params, StrategyCase::DefendSusceptible)?.x.ui();
    Ok((kappa_of(params, x_star)?, kappa_of(params, x_bar)?))
}

fn gap_ratio(params: &ModelParams, x: &StateDist) -> f64 {
    let r = alpha_beta(params, x);
    (r.beta - r.alpha) / (r.beta + params.q_rec_u)
}

fn delta_ratio(params: &ModelParams, x: &StateDist) -> f64 {
    let r = alpha_beta(params, x);
    params.delta() / (r.alpha + params.q_rec_d)
}

pub fn kappa_thresholds(params: &ModelParams) -> Result<BifurcationReport> {
    let p = params;
    p.validate()?;
    let i = fixed_point_acyclic(p, StrategyCase::AlwaysUnprotected)?.x;
    let ii = fixed_point_acyclic(p, StrategyCase::AlwaysDefended)?.x;
    let iii = fixed_point_mixed_asymptotic(p, StrategyCase::DefendSusceptible)?.x;
    let (kappa_star, kappa_bar_star) = match kappa_star_pair(p) {
        Ok((a, b)) => (Some(a), Some(b)),
        Err(Error::AssumptionViolation(_)) => (None, None),
        Err(e) => return Err(e),
    };
    let q = p.q_rec_d;
    Ok(BifurcationReport {
        x_star_ui: i.ui(),
        x_star_di: ii.di(),
        x_bar_star_ui: iii.ui(),
        kappa_star,
        kappa_bar_star,
        kappa_1: gap_ratio(p, &i),
        kappa_2: delta_ratio(p, &ii),
        kappa_3: delta_ratio(p, &iii),
        kappa_4: gap_ratio(p, &iii),
        domains: [i, ii, iii].map(|x| classify_domain(p, &x).label()),
        kappa_increasing: p.beta_uu * (p.direct_d() + q) > p.beta_ud * (p.direct_u() + q),
        equal_recovery: p.has_equal_recovery(),
    })
}
