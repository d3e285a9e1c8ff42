//! Seeded random draws of parameters and states for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{ModelParams, StateDist};

/// The generator used everywhere randomness is needed. ChaCha8 gives the
/// same stream on every platform for a given seed.
pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parameters with every rate and cost drawn uniformly from `rates`, `v_H = 1`
/// and the given `lambda`. No ordering assumptions are imposed.
pub fn params_in(rng: &mut impl Rng, rates: (f64, f64), lambda: f64) -> ModelParams {
    let mut draw = || rng.random_range(rates.0..=rates.1);
    let mut p = ModelParams {
        q_rec_d: draw(),
        q_rec_u: draw(),
        q_inf_d: draw(),
        q_inf_u: draw(),
        beta_uu: draw(),
        beta_ud: draw(),
        beta_du: draw(),
        beta_dd: draw(),
        lambda,
        v_h: 1.0,
        k_d: draw(),
        k_i: draw(),
    };
    if p.k_d > p.k_i {
        std::mem::swap(&mut p.k_d, &mut p.k_i);
    }
    p
}

/// Like [`params_in`] but reordered so the base assumptions hold:
/// `q_rec_D >= q_rec_U`, `q_inf_D < q_inf_U`, `beta_UD <= beta_UU`,
/// `beta_DD <= beta_DU`, `k_D <= k_I`.
pub fn base_params_in(rng: &mut impl Rng, rates: (f64, f64), lambda: f64) -> ModelParams {
    loop {
        let mut p = params_in(rng, rates, lambda);
        order(&mut p.q_rec_u, &mut p.q_rec_d);
        order(&mut p.q_inf_d, &mut p.q_inf_u);
        order(&mut p.beta_ud, &mut p.beta_uu);
        order(&mut p.beta_dd, &mut p.beta_du);
        if p.satisfies_base_assumptions() {
            return p;
        }
    }
}

fn order(lo: &mut f64, hi: &mut f64) {
    if *lo > *hi {
        std::mem::swap(lo, hi);
    }
}

/// Uniform point of the simplex (normalized exponentials).
pub fn state(rng: &mut impl Rng) -> StateDist {
    let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let sum: f64 = e.iter().sum();
    StateDist::from_array(e.map(|v| v / sum)).expect("normalized exponentials lie on the simplex")
}

/// Random point of the simplex boundary with component `zero` set to 0.
pub fn boundary_state(rng: &mut impl Rng, zero: usize) -> StateDist {
    let mut e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    e[zero] = 0.0;
    let sum: f64 = e.iter().sum();
    StateDist::from_array(e.map(|v| v / sum)).expect("normalized exponentials lie on the simplex")
}
