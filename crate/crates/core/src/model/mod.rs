//! Parameters, population states and the kinetic (mean-field) dynamics.

mod domain;
mod kinetics;
mod params;
mod state;

pub use domain::{classify_domain, d1_infected_threshold, Domain, DomainClass, Subdomain, DOMAIN_TOL};
#[cfg(test)]
pub(crate) use kinetics::rhs_raw;
pub use kinetics::{
    alpha_beta, default_step, integrate, integrate_at, jacobian, kinetic_rhs, EffectiveRates, STEP_NEGATIVITY_LIMIT,
};
pub use params::{ModelParams, PARAM_KEYS};
pub(crate) use state::{sup_norm, sup_norm_diff, DI, DS, UI, US};
pub use state::{AgentState, ControlVector, StateDist, StrategyCase, SIMPLEX_TOL};
