//! Shared inputs for the benchmarks.

use mfg_core::ModelParams;

/// Equal recovery rates at `lambda = 1e3`; both case (i) and case (iii)
/// equilibria exist for `kappa` between about 0.234 and 0.254.
pub fn reference_params() -> ModelParams {
    ModelParams {
        q_rec_d: 1.0,
        q_rec_u: 1.0,
        q_inf_d: 0.2,
        q_inf_u: 1.0,
        beta_uu: 2.0,
        beta_ud: 2.0,
        beta_du: 2.0,
        beta_dd: 1.0,
        lambda: 1e3,
        v_h: 1.0,
        k_d: 0.245,
        k_i: 1.0,
    }
}
