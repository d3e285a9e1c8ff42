use serde::{Deserialize, Serialize};

use crate::model::{
    classify_domain, Domain, DomainClass, EffectiveRates, ModelParams, StateDist, StrategyCase, Subdomain,
};

/// Large-`lambda` limits of the case-existence thresholds in `kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitThresholds {
    /// `delta / (alpha + q_rec_D)`
    pub delta_over_defended: f64,
    /// `(beta - alpha) / (beta + q_rec_U)`
    pub gap_over_unprotected: f64,
    /// `(beta - alpha) / (alpha + q_rec_D)`
    pub gap_over_defended: f64,
    /// `delta / (beta + q_rec_U)`
    pub delta_over_unprotected: f64,
}

impl LimitThresholds {
    pub fn new(params: &ModelParams, rates: EffectiveRates) -> Self {
        let EffectiveRates { alpha, beta } = rates;
        let delta = params.delta();
        let defended = alpha + params.q_rec_d;
        let unprotected = beta + params.q_rec_u;
        Self {
            delta_over_defended: delta / defended,
            gap_over_unprotected: (beta - alpha) / unprotected,
            gap_over_defended: (beta - alpha) / defended,
            delta_over_unprotected: delta / unprotected,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.delta_over_defended, self.gap_over_unprotected, self.gap_over_defended, self.delta_over_unprotected]
    }

    /// Case set from the limiting inequalities without any domain split:
    /// (i) above both unprotected thresholds, (ii) below both defended ones,
    /// (iii) and (iv) in their respective bands.
    fn limit_cases(&self, kappa: f64) -> Vec<StrategyCase> {
        let t = self;
        let mut cases = Vec::new();
        if kappa >= t.delta_over_unprotected.max(t.gap_over_unprotected) {
            cases.push(StrategyCase::AlwaysUnprotected);
        }
        if kappa <= t.delta_over_defended.min(t.gap_over_defended) {
            cases.push(StrategyCase::AlwaysDefended);
        }
        if t.delta_over_defended <= kappa && kappa <= t.gap_over_unprotected {
            cases.push(StrategyCase::DefendSusceptible);
        }
        if t.gap_over_defended <= kappa && kappa <= t.delta_over_unprotected {
            cases.push(StrategyCase::DefendInfected);
        }
        cases
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LargeLambdaPrediction {
    /// Predicted cases with an HJB solution, in case order.
    pub cases: Vec<StrategyCase>,
    /// Half-width of the `kappa` window around each threshold where the
    /// prediction may be wrong at the current `lambda`.
    pub window: f64,
    pub thresholds: LimitThresholds,
    pub domain: DomainClass,
}

impl LargeLambdaPrediction {
    /// Whether `kappa` is farther than `window` from every threshold.
    pub fn is_reliable_at(&self, kappa: f64) -> bool {
        let mut edges = self.thresholds.as_array().to_vec();
        edges.push(0.0);
        edges.iter().all(|t| (kappa - t).abs() > self.window)
    }
}

/// Which cases admit an HJB solution at `x` for price ratio `kappa`, in the
/// `lambda -> infinity` limit.
///
/// The reported window is a bound on how far the exact finite-`lambda`
/// thresholds sit from their limits: each differs by at most
/// `4 R^2 / (m lambda)` with `R = max(alpha, beta, q_rec_D, q_rec_U)` and
/// `m = min(alpha + q_rec_D, beta + q_rec_U)`.
pub fn large_lambda_classify(params: &ModelParams, x: &StateDist, kappa: f64) -> LargeLambdaPrediction {
    use StrategyCase::*;

    let domain = classify_domain(params, x);
    let EffectiveRates { alpha, beta } = domain.rates;
    let t = LimitThresholds::new(params, domain.rates);
    let (t1, t2, t3, t4) =
        (t.delta_over_defended, t.gap_over_unprotected, t.gap_over_defended, t.delta_over_unprotected);
    let delta = params.delta();

    let cases = match (domain.domain, domain.subdomain) {
        // Equal recovery rates, beta > alpha: case (ii) only for kappa <= 0.
        _ if delta == 0.0 && beta > alpha => {
            if kappa <= 0.0 {
                vec![AlwaysDefended]
            } else if kappa < t2 {
                vec![DefendSusceptible]
            } else {
                vec![AlwaysUnprotected]
            }
        }
        (Domain::D1, Subdomain::First) if delta > 0.0 => {
            if kappa < t1 {
                vec![AlwaysDefended]
            } else if kappa < t2 {
                vec![DefendSusceptible]
            } else {
                vec![AlwaysUnprotected]
            }
        }
        (Domain::D1, Subdomain::Second) if delta > 0.0 => {
            // t2 <= t1 here; both acyclic cases coexist in between.
            let mut cases = Vec::new();
            if kappa > t2 {
                cases.push(AlwaysUnprotected);
            }
            if kappa < t1 {
                cases.push(AlwaysDefended);
            }
            cases
        }
        (Domain::D2, Subdomain::Second) if delta > 0.0 => {
            if kappa < t3 {
                vec![AlwaysDefended]
            } else if kappa < t4 {
                vec![DefendInfected]
            } else {
                vec![AlwaysUnprotected]
            }
        }
        (Domain::D2, Subdomain::First) if delta > 0.0 => {
            if t1 < kappa && kappa < t2 {
                vec![DefendSusceptible, DefendInfected]
            } else if kappa < t3 {
                vec![AlwaysDefended]
            } else if kappa > t4 {
                vec![AlwaysUnprotected]
            } else {
                vec![DefendInfected]
            }
        }
        // Boundaries and delta < 0 fall outside the classified regimes.
        _ => t.limit_cases(kappa),
    };

    let r = alpha.max(beta).max(params.q_rec_d).max(params.q_rec_u);
    let m = (alpha + params.q_rec_d).min(beta + params.q_rec_u);
    let window = 4.0 * r * r / (m * params.lambda);

    LargeLambdaPrediction { cases, window, thresholds: t, domain }
}

#[cfg(test)]
pub(super) fn limit_cases(params: &ModelParams, x: &StateDist, kappa: f64) -> Vec<StrategyCase> {
    LimitThresholds::new(params, crate::model::alpha_beta(params, x)).limit_cases(kappa)
}
