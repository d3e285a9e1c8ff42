//! Stationary ergodic HJB equation of an individual computer owner.
//!
//! For fixed population state `x` the relative values `g` and the average
//! cost `mu` solve, line by line for DI, DS, UI, US,
//!
//! ```text
//! lambda min(g(UI)-g(DI), 0) + q_rec_D (g(DS)-g(DI)) + k_I + k_D = mu
//! lambda min(g(US)-g(DS), 0) + alpha   (g(DI)-g(DS)) + k_D       = mu
//! lambda min(g(DI)-g(UI), 0) + q_rec_U (g(US)-g(UI)) + k_I       = mu
//! lambda min(g(DS)-g(US), 0) + beta    (g(UI)-g(US))             = mu
//! ```
//!
//! Only the four controls of [`StrategyCase`] can attain all four minima in a
//! non-degenerate way; [`solve_case`] gives the closed form for each of them
//! and [`oracle_enumerate`] checks all sixteen binary controls by brute force.

mod classify;
mod oracle;

pub use classify::{large_lambda_classify, LargeLambdaPrediction, LimitThresholds};
pub use oracle::{oracle_enumerate, OracleSolution};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{alpha_beta, ControlVector, EffectiveRates, ModelParams, StateDist, StrategyCase, DI, DS, UI, US};

/// Slack band treated as equality when checking a case's optimality conditions.
pub const VALIDITY_TOL: f64 = 1e-9;

/// Two solutions closer than this (in `g` and `mu`) are the same solution.
pub const DEDUP_TOL: f64 = 1e-9;

const DENOMINATOR_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "HjbRecord", from = "HjbRecord")]
pub struct HjbSolution {
    pub case: StrategyCase,
    /// Relative values on DI, DS, UI, US, shifted so the minimum is zero.
    pub g: [f64; 4],
    pub mu: f64,
    pub valid: bool,
    pub degenerate: bool,
    /// Signed margins of the case's two optimality conditions, for the
    /// infected and the susceptible pair of states. Nonnegative when the
    /// case's control attains the minimum.
    pub slack: [f64; 2],
}

impl HjbSolution {
    pub fn control(&self) -> ControlVector {
        self.case.control()
    }

    /// Whether both slacks exceed the tolerance band.
    pub fn strictly_valid(&self) -> bool {
        self.slack.iter().all(|s| *s > VALIDITY_TOL)
    }

    pub fn same_solution(&self, other: &HjbSolution) -> bool {
        close_solutions(&self.g, self.mu, &other.g, other.mu)
    }
}

/// Flat serialized form of an [`HjbSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HjbRecord {
    pub case: StrategyCase,
    pub mu: f64,
    #[serde(rename = "g_DI")]
    pub g_di: f64,
    #[serde(rename = "g_DS")]
    pub g_ds: f64,
    #[serde(rename = "g_UI")]
    pub g_ui: f64,
    #[serde(rename = "g_US")]
    pub g_us: f64,
    pub valid: bool,
    pub degenerate: bool,
    pub slack1: f64,
    pub slack2: f64,
}

impl From<HjbSolution> for HjbRecord {
    fn from(s: HjbSolution) -> Self {
        let [g_di, g_ds, g_ui, g_us] = s.g;
        Self {
            case: s.case,
            mu: s.mu,
            g_di,
            g_ds,
            g_ui,
            g_us,
            valid: s.valid,
            degenerate: s.degenerate,
            slack1: s.slack[0],
            slack2: s.slack[1],
        }
    }
}

impl From<HjbRecord> for HjbSolution {
    fn from(r: HjbRecord) -> Self {
        Self {
            case: r.case,
            g: [r.g_di, r.g_ds, r.g_ui, r.g_us],
            mu: r.mu,
            valid: r.valid,
            degenerate: r.degenerate,
            slack: [r.slack1, r.slack2],
        }
    }
}

pub(crate) fn close_solutions(g1: &[f64; 4], mu1: f64, g2: &[f64; 4], mu2: f64) -> bool {
    (mu1 - mu2).abs() <= DEDUP_TOL && g1.iter().zip(g2).all(|(a, b)| (a - b).abs() <= DEDUP_TOL)
}

/// Shifts `g` so that its smallest entry is zero.
pub fn renormalize(g: [f64; 4]) -> [f64; 4] {
    let min = g.iter().copied().fold(f64::INFINITY, f64::min);
    g.map(|v| v - min)
}

/// Closed-form solution of the HJB equation with the control of `case`.
pub fn solve_case(params: &ModelParams, x: &StateDist, case: StrategyCase) -> Result<HjbSolution> {
    solve_case_with_rates(params, alpha_beta(params, x), case)
}

pub(crate) fn solve_case_with_rates(
    params: &ModelParams,
    rates: EffectiveRates,
    case: StrategyCase,
) -> Result<HjbSolution> {
    let EffectiveRates { alpha: a, beta: b } = rates;
    let (l, qd, qu, kd, ki) = (params.lambda, params.q_rec_d, params.q_rec_u, params.k_d, params.k_i);
    nonzero("lambda", l)?;

    let (g, mu) = match case {
        StrategyCase::AlwaysUnprotected => {
            // g(US) = 0
            let infected_u = nonzero("beta + q_rec_U", b + qu)?;
            let switch_d = nonzero("alpha + lambda + q_rec_D", a + l + qd)?;
            let g_ui = ki / infected_u;
            let mu = b * g_ui;
            let common = (kd - mu) / l;
            let scale = ki * (b + l + qu) / (l * infected_u * switch_d);
            ([common + scale * (a + l), common + scale * a, g_ui, 0.0], mu)
        }
        StrategyCase::AlwaysDefended => {
            // g(DS) = 0
            let infected_d = nonzero("alpha + q_rec_D", a + qd)?;
            let switch_u = nonzero("beta + lambda + q_rec_U", b + l + qu)?;
            let g_di = ki / infected_d;
            let mu = (a * (kd + ki) + kd * qd) / infected_d;
            let scale = ki / (l * infected_d * switch_u);
            let g_us = -kd / l + scale * (b * (l + qd) - a * (l + qu));
            let g_ui = -kd / l + scale * ((b + l) * (l + qd) - a * qu);
            ([g_di, 0.0, g_ui, g_us], mu)
        }
        StrategyCase::DefendSusceptible => {
            // g(DS) = 0
            let den = nonzero(
                "alpha (beta + lambda + q_rec_U) + q_rec_U (alpha + lambda + q_rec_D)",
                a * (b + l + qu) + qu * (a + l + qd),
            )?;
            let g_di = (b + l + qu) * (ki - kd) / den;
            let g_us = (ki * (b * (l + qd) - a * (l + qu)) - kd * (b + qu) * (a + l + qd)) / (l * den);
            let g_ui = (ki * ((l + qd) * (l + b) - a * qu) - kd * (b + l + qu) * (a + l + qd)) / (l * den);
            let mu = (ki * a * (b + l + qu) + kd * qu * (a + l + qd)) / den;
            ([g_di, 0.0, g_ui, g_us], mu)
        }
        StrategyCase::DefendInfected => {
            // g(US) = 0
            let den = nonzero(
                "beta (alpha + lambda + q_rec_D) + q_rec_D (beta + lambda + q_rec_U)",
                b * (a + l + qd) + qd * (b + l + qu),
            )?;
            let g_ui = (kd + ki) * (a + l + qd) / den;
            let g_ds = (kd * (b + l + qu) * (a + qd) + ki * (a * (l + qu) - b * (l + qd))) / (l * den);
            let g_di = (kd * (b + l + qu) * (a + l + qd) + ki * ((a + l) * (l + qu) - b * qd)) / (l * den);
            ([g_di, g_ds, g_ui, 0.0], b * g_ui)
        }
    };

    let slack = case_slack(case, &g);
    let valid = slack.iter().all(|s| *s >= -VALIDITY_TOL);
    let degenerate = slack.iter().any(|s| s.abs() <= VALIDITY_TOL);
    Ok(HjbSolution { case, g: renormalize(g), mu, valid, degenerate, slack })
}

fn nonzero(what: &'static str, value: f64) -> Result<f64> {
    if value <= DENOMINATOR_FLOOR {
        Err(Error::DegenerateDenominator { what, value })
    } else {
        Ok(value)
    }
}

/// Margins of the conditions under which `case`'s control attains the
/// minimum in the infected lines (first) and the susceptible lines (second).
pub fn case_slack(case: StrategyCase, g: &[f64; 4]) -> [f64; 2] {
    let infected = g[DI] - g[UI];
    let susceptible = g[DS] - g[US];
    match case {
        StrategyCase::AlwaysUnprotected => [infected, susceptible],
        StrategyCase::AlwaysDefended => [-infected, -susceptible],
        StrategyCase::DefendSusceptible => [infected, -susceptible],
        StrategyCase::DefendInfected => [-infected, susceptible],
    }
}

/// Residuals of the four HJB lines (with the minimum taken over both
/// controls) at `(g, mu)`.
pub fn hjb_residual(params: &ModelParams, x: &StateDist, g: &[f64; 4], mu: f64) -> [f64; 4] {
    let EffectiveRates { alpha, beta } = alpha_beta(params, x);
    let l = params.lambda;
    [
        l * (g[UI] - g[DI]).min(0.0) + params.q_rec_d * (g[DS] - g[DI]) + params.k_i + params.k_d - mu,
        l * (g[US] - g[DS]).min(0.0) + alpha * (g[DI] - g[DS]) + params.k_d - mu,
        l * (g[DI] - g[UI]).min(0.0) + params.q_rec_u * (g[US] - g[UI]) + params.k_i - mu,
        l * (g[DS] - g[US]).min(0.0) + beta * (g[UI] - g[US]) - mu,
    ]
}

/// All valid solutions at `x`, sorted by average cost (the efficiency order).
///
/// Solutions from different cases that coincide (at a threshold equality)
/// are merged into the first one, which is flagged degenerate. At most two
/// distinct solutions exist.
pub fn enumerate_hjb(params: &ModelParams, x: &StateDist) -> Vec<HjbSolution> {
    let rates = alpha_beta(params, x);
    let mut found: Vec<HjbSolution> = StrategyCase::ALL
        .into_iter()
        .filter_map(|case| solve_case_with_rates(params, rates, case).ok())
        .filter(|s| s.valid)
        .collect();
    found.sort_by(|a, b| a.mu.total_cmp(&b.mu).then(a.case.cmp(&b.case)));

    let mut out: Vec<HjbSolution> = Vec::with_capacity(2);
    for s in found {
        match out.iter_mut().find(|kept| kept.same_solution(&s)) {
            Some(kept) => kept.degenerate = true,
            None => out.push(s),
        }
    }
    debug_assert!(out.len() <= 2, "more than two distinct HJB solutions: {out:?}");
    out
}
