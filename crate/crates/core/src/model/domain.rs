use serde::{Deserialize, Serialize};

use super::kinetics::{alpha_beta, EffectiveRates};
use super::params::ModelParams;
use super::state::StateDist;

/// Absolute tolerance on rate comparisons when classifying.
pub const DOMAIN_TOL: f64 = 1e-12;

/// D1: `beta + q_rec_U > alpha + q_rec_D`; D2: the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    D1,
    D2,
    Boundary,
}

/// Refinement within a domain by `delta/(alpha+q_rec_D)` versus
/// `(beta-alpha)/(beta+q_rec_U)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subdomain {
    /// `delta/(alpha+q_rec_D) < (beta-alpha)/(beta+q_rec_U)`.
    First,
    Second,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainClass {
    pub domain: Domain,
    pub subdomain: Subdomain,
    pub rates: EffectiveRates,
}

impl DomainClass {
    /// Short label, e.g. `D12` or `D1?` for a subdomain boundary.
    pub fn label(&self) -> String {
        let d = match self.domain {
            Domain::D1 => "D1",
            Domain::D2 => "D2",
            Domain::Boundary => return "boundary".into(),
        };
        let s = match self.subdomain {
            Subdomain::First => "1",
            Subdomain::Second => "2",
            Subdomain::Boundary => "?",
        };
        format!("{d}{s}")
    }
}

pub fn classify_domain(params: &ModelParams, x: &StateDist) -> DomainClass {
    classify_rates(params, alpha_beta(params, x))
}

pub(crate) fn classify_rates(params: &ModelParams, rates: EffectiveRates) -> DomainClass {
    let EffectiveRates { alpha, beta } = rates;
    let margin = (beta + params.q_rec_u) - (alpha + params.q_rec_d);
    let domain = if margin.abs() <= DOMAIN_TOL {
        Domain::Boundary
    } else if margin > 0.0 {
        Domain::D1
    } else {
        Domain::D2
    };

    let left = params.delta() / (alpha + params.q_rec_d);
    let right = (beta - alpha) / (beta + params.q_rec_u);
    let subdomain = if (left - right).abs() <= DOMAIN_TOL {
        Subdomain::Boundary
    } else if left < right {
        Subdomain::First
    } else {
        Subdomain::Second
    };
    DomainClass { domain, subdomain, rates }
}

/// Threshold `x_bar` of the D1 condition `x_DI + x_UI > x_bar` when contact
/// rates depend only on the susceptible side (`beta_U`, `beta_D`). `None` if
/// `beta_U == beta_D`.
pub fn d1_infected_threshold(params: &ModelParams) -> Option<f64> {
    let spread = params.beta_uu - params.beta_dd;
    (spread != 0.0).then(|| ((params.q_inf_d - params.q_inf_u) * params.v_h + params.delta()) / spread)
}
