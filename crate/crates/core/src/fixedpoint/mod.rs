//! Stationary points of the kinetic equation under each admissible control,
//! and their linear stability.

mod eigen;
mod quartic;

pub use eigen::eigenvalues3;
pub use quartic::{mixed_polynomial, MIXED_GRID};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{jacobian, kinetic_rhs, sup_norm, ModelParams, StateDist, StrategyCase, DI, DS, UI, US};

/// Largest admissible sup-norm of the kinetic right-hand side at a returned point.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Real parts must lie below `-STABILITY_TOL` for a point to count as stable.
pub const STABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointMethod {
    ClosedForm,
    QuarticNumeric,
    LargeLambda,
}

impl FixedPointMethod {
    pub fn label(self) -> &'static str {
        match self {
            Self::ClosedForm => "closed_form",
            Self::QuarticNumeric => "quartic_numeric",
            Self::LargeLambda => "large_lambda",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "FixedPointRecord", from = "FixedPointRecord")]
pub struct FixedPoint {
    pub x: StateDist,
    pub case: StrategyCase,
    /// Eigenvalues of the linearization restricted to the simplex, by
    /// decreasing real part. Zero until [`stability`] has run.
    pub eigenvalues: [Complex64; 3],
    pub stable: bool,
    pub method: FixedPointMethod,
}

impl FixedPoint {
    fn unanalysed(x: StateDist, case: StrategyCase, method: FixedPointMethod) -> Self {
        Self { x, case, eigenvalues: [Complex64::new(0.0, 0.0); 3], stable: false, method }
    }

    /// No infected computers at all. Returned by the acyclic solver when
    /// infection cannot persist without a direct attack.
    pub fn is_disease_free(&self) -> bool {
        self.x.infected() == 0.0
    }

    pub fn residual(&self, params: &ModelParams) -> f64 {
        sup_norm(&kinetic_rhs(params, &self.x, &self.case.control()))
    }
}

/// Flat serialized form of a [`FixedPoint`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub case: StrategyCase,
    #[serde(rename = "x_DI")]
    pub x_di: f64,
    #[serde(rename = "x_DS")]
    pub x_ds: f64,
    #[serde(rename = "x_UI")]
    pub x_ui: f64,
    #[serde(rename = "x_US")]
    pub x_us: f64,
    pub eig1_re: f64,
    pub eig1_im: f64,
    pub eig2_re: f64,
    pub eig2_im: f64,
    pub eig3_re: f64,
    pub eig3_im: f64,
    pub stable: bool,
    pub method: FixedPointMethod,
}

impl From<FixedPoint> for FixedPointRecord {
    fn from(fp: FixedPoint) -> Self {
        let [x_di, x_ds, x_ui, x_us] = fp.x.as_array();
        let [e1, e2, e3] = fp.eigenvalues;
        Self {
            case: fp.case,
            x_di,
            x_ds,
            x_ui,
            x_us,
            eig1_re: e1.re,
            eig1_im: e1.im,
            eig2_re: e2.re,
            eig2_im: e2.im,
            eig3_re: e3.re,
            eig3_im: e3.im,
            stable: fp.stable,
            method: fp.method,
        }
    }
}

impl From<FixedPointRecord> for FixedPoint {
    fn from(r: FixedPointRecord) -> Self {
        Self {
            x: StateDist::renormalized([r.x_di, r.x_ds, r.x_ui, r.x_us]),
            case: r.case,
            eigenvalues: [
                Complex64::new(r.eig1_re, r.eig1_im),
                Complex64::new(r.eig2_re, r.eig2_im),
                Complex64::new(r.eig3_re, r.eig3_im),
            ],
            stable: r.stable,
            method: r.method,
        }
    }
}

/// Smallest root in `[0, 1]` of `b y^2 + (q - b + a) y - a`, the stationary
/// equation of an SIS population with direct infection rate `a`, contact
/// rate `b` and recovery rate `q`. Returns `None` when only the disease-free
/// root exists.
pub fn sis_root(a: f64, b: f64, q: f64) -> Option<f64> {
    if a == 0.0 {
        return (b > q).then(|| (b - q) / b);
    }
    if b == 0.0 {
        return Some(a / (q + a));
    }
    let c = q - b + a;
    let s = (c * c + 4.0 * a * b).sqrt();
    Some(if c >= 0.0 { 2.0 * a / (c + s) } else { (s - c) / (2.0 * b) })
}

/// The unique stationary point under an acyclic control, with stability.
///
/// Case (i) lives on `{x_DI = x_DS = 0}` and case (ii) on `{x_UI = x_US = 0}`.
/// Without direct attack and with subcritical contact rate the disease-free
/// point is returned; see [`FixedPoint::is_disease_free`].
pub fn fixed_point_acyclic(params: &ModelParams, case: StrategyCase) -> Result<FixedPoint> {
    let p = params;
    let x = match case {
        StrategyCase::AlwaysUnprotected => {
            let y = sis_root(p.direct_u(), p.beta_uu, p.q_rec_u).unwrap_or(0.0);
            [0.0, 0.0, y, 1.0 - y]
        }
        StrategyCase::AlwaysDefended => {
            let y = sis_root(p.direct_d(), p.beta_dd, p.q_rec_d).unwrap_or(0.0);
            [y, 1.0 - y, 0.0, 0.0]
        }
        _ => return Err(Error::InvalidParams(format!("case ({case}) is not acyclic"))),
    };
    let fp = FixedPoint::unanalysed(StateDist::renormalized(x), case, FixedPointMethod::ClosedForm);
    Ok(stability(p, &fp))
}

/// All stationary points under a mixed control at finite `lambda`, with
/// stability, sorted by `x_DI`.
///
/// Case (iii) reduces to a quartic in `y = x_DI` (see [`mixed_polynomial`]);
/// case (iv) is solved as case (iii) of the relabeled model.
pub fn fixed_point_mixed(params: &ModelParams, case: StrategyCase) -> Result<Vec<FixedPoint>> {
    let points = match case {
        StrategyCase::DefendSusceptible => quartic::case_iii_states(params)?,
        StrategyCase::DefendInfected => {
            quartic::case_iii_states(&params.swap_protection())?.into_iter().map(|x| x.swap_protection()).collect()
        }
        _ => return Err(Error::InvalidParams(format!("case ({case}) is not mixed"))),
    };
    let mut out: Vec<FixedPoint> = points
        .into_iter()
        .map(|x| FixedPoint::unanalysed(x, case, FixedPointMethod::QuarticNumeric))
        .filter(|fp| fp.residual(params) <= RESIDUAL_TOL)
        .map(|fp| stability(params, &fp))
        .collect();
    out.sort_by(|a, b| a.x.di().total_cmp(&b.x.di()));
    Ok(out)
}

/// Limit of the mixed-case stationary point as `lambda` grows.
///
/// Case (iii) tends to `(0, 1 - y, y, 0)` and case (iv) to `(y, 0, 0, 1 - y)`,
/// with `y` the SIS root for the population that is infected while
/// unprotected and susceptible while defended (and vice versa). The
/// returned point is only approximately stationary; `stable` reports the
/// limiting analysis at the given `lambda`.
pub fn fixed_point_mixed_asymptotic(params: &ModelParams, case: StrategyCase) -> Result<FixedPoint> {
    let p = params;
    let x = match case {
        StrategyCase::DefendSusceptible => {
            let y = sis_root(p.direct_d(), p.beta_ud, p.q_rec_u).unwrap_or(0.0);
            [0.0, 1.0 - y, y, 0.0]
        }
        StrategyCase::DefendInfected => {
            let y = sis_root(p.direct_u(), p.beta_du, p.q_rec_d).unwrap_or(0.0);
            [y, 0.0, 0.0, 1.0 - y]
        }
        _ => return Err(Error::InvalidParams(format!("case ({case}) is not mixed"))),
    };
    let fp = FixedPoint::unanalysed(StateDist::renormalized(x), case, FixedPointMethod::LargeLambda);
    Ok(stability(p, &fp))
}

/// Fixed points of every case: one per acyclic case and all mixed-case points.
pub fn all_fixed_points(params: &ModelParams) -> Result<Vec<FixedPoint>> {
    let mut out = vec![
        fixed_point_acyclic(params, StrategyCase::AlwaysUnprotected)?,
        fixed_point_acyclic(params, StrategyCase::AlwaysDefended)?,
    ];
    out.extend(fixed_point_mixed(params, StrategyCase::DefendSusceptible)?);
    out.extend(fixed_point_mixed(params, StrategyCase::DefendInfected)?);
    Ok(out)
}

/// Coordinate expressed through the other three when reducing the dynamics
/// to the simplex.
fn eliminated(case: StrategyCase) -> usize {
    match case {
        StrategyCase::AlwaysUnprotected => US,
        StrategyCase::AlwaysDefended => DS,
        StrategyCase::DefendSusceptible => DS,
        StrategyCase::DefendInfected => US,
    }
}

/// Jacobian of the 3-variable dynamics obtained by substituting
/// `x_k = 1 - sum of the others`; rows and columns keep the order DI, DS, UI, US
/// with `k` removed.
pub fn reduced_jacobian(params: &ModelParams, x: &StateDist, case: StrategyCase) -> [[f64; 3]; 3] {
    let j = jacobian(params, x, &case.control());
    let k = eliminated(case);
    let keep: Vec<usize> = [DI, DS, UI, US].into_iter().filter(|&i| i != k).collect();
    std::array::from_fn(|r| std::array::from_fn(|c| j[keep[r]][keep[c]] - j[keep[r]][k]))
}

/// Fills in eigenvalues and the stability flag.
pub fn stability(params: &ModelParams, fp: &FixedPoint) -> FixedPoint {
    let eigenvalues = eigenvalues3(&reduced_jacobian(params, &fp.x, fp.case));
    let stable = eigenvalues.iter().all(|z| z.re < -STABILITY_TOL);
    FixedPoint { eigenvalues, stable, ..*fp }
}

#[cfg(test)]
mod tests;
