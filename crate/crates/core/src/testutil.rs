use rand::Rng;

use crate::model::{ModelParams, StateDist};
use crate::sampling::{self, SimRng};

pub fn rng(seed: u64) -> SimRng {
    sampling::seeded(seed)
}

/// A generic parameter point satisfying the base assumptions.
pub fn baseline() -> ModelParams {
    ModelParams {
        q_rec_d: 1.2,
        q_rec_u: 1.0,
        q_inf_d: 0.2,
        q_inf_u: 0.5,
        beta_uu: 2.0,
        beta_ud: 1.0,
        beta_du: 1.5,
        beta_dd: 0.5,
        lambda: 10.0,
        v_h: 1.0,
        k_d: 0.3,
        k_i: 1.0,
    }
}

pub fn random_lambda(rng: &mut impl Rng) -> f64 {
    [1.0, 10.0, 1e3][rng.random_range(0..3)]
}

pub fn random_params(rng: &mut impl Rng) -> ModelParams {
    let lambda = random_lambda(rng);
    sampling::params_in(rng, (0.1, 5.0), lambda)
}

pub fn random_base_params(rng: &mut impl Rng) -> ModelParams {
    let lambda = random_lambda(rng);
    sampling::base_params_in(rng, (0.1, 5.0), lambda)
}

pub fn random_state(rng: &mut impl Rng) -> StateDist {
    sampling::state(rng)
}
