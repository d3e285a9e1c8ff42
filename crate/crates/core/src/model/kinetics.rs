use serde::{Deserialize, Serialize};

use super::params::ModelParams;
use super::state::{ControlVector, StateDist, DI, DS, UI, US};
use crate::error::{Error, Result};

/// Intermediate states below this value abort integration.
pub const STEP_NEGATIVITY_LIMIT: f64 = -1e-6;

/// Effective infection intensities of a susceptible defended (`alpha`) and a
/// susceptible unprotected (`beta`) computer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveRates {
    pub alpha: f64,
    pub beta: f64,
}

pub fn alpha_beta(params: &ModelParams, x: &StateDist) -> EffectiveRates {
    rates_raw(params, &x.as_array())
}

pub(crate) fn rates_raw(p: &ModelParams, x: &[f64; 4]) -> EffectiveRates {
    EffectiveRates {
        alpha: p.direct_d() + x[DI] * p.beta_dd + x[UI] * p.beta_ud,
        beta: p.direct_u() + x[DI] * p.beta_du + x[UI] * p.beta_uu,
    }
}

/// Right-hand side of the kinetic equation under the stationary control `u`.
///
/// The components sum to exactly `0.0` when added in order.
pub fn kinetic_rhs(params: &ModelParams, x: &StateDist, u: &ControlVector) -> [f64; 4] {
    rhs_raw(params, &x.as_array(), u)
}

pub(crate) fn rhs_raw(p: &ModelParams, x: &[f64; 4], u: &ControlVector) -> [f64; 4] {
    let EffectiveRates { alpha, beta } = rates_raw(p, x);
    // Net flows: infection minus recovery within each protection class, and
    // net switching into the defended class for infected / susceptible.
    let defended = x[DS] * alpha - x[DI] * p.q_rec_d;
    let unprotected = x[US] * beta - x[UI] * p.q_rec_u;
    let switch_i = p.lambda * (x[UI] * u.rate(UI) - x[DI] * u.rate(DI));
    let switch_s = p.lambda * (x[US] * u.rate(US) - x[DS] * u.rate(DS));

    let d_di = defended + switch_i;
    let d_ds = switch_s - defended;
    let d_ui = unprotected - switch_i;
    let d_us = -((d_di + d_ds) + d_ui);
    [d_di, d_ds, d_ui, d_us]
}

/// Jacobian `d rhs_i / d x_j` on the full 4-dimensional space.
pub fn jacobian(params: &ModelParams, x: &StateDist, u: &ControlVector) -> [[f64; 4]; 4] {
    let p = params;
    let x = x.as_array();
    let EffectiveRates { alpha, beta } = rates_raw(p, &x);
    let l = p.lambda;
    let [u_di, u_ds, u_ui, u_us] = [u.rate(DI), u.rate(DS), u.rate(UI), u.rate(US)];
    [
        [x[DS] * p.beta_dd - p.q_rec_d - l * u_di, alpha, x[DS] * p.beta_ud + l * u_ui, 0.0],
        [p.q_rec_d - x[DS] * p.beta_dd, -alpha - l * u_ds, -x[DS] * p.beta_ud, l * u_us],
        [x[US] * p.beta_du + l * u_di, 0.0, x[US] * p.beta_uu - p.q_rec_u - l * u_ui, beta],
        [-x[US] * p.beta_du, l * u_ds, p.q_rec_u - x[US] * p.beta_uu, -beta - l * u_us],
    ]
}

/// Default RK4 step: `1e-2 / max rate`.
pub fn default_step(params: &ModelParams) -> f64 {
    1e-2 / params.max_rate().max(f64::MIN_POSITIVE)
}

/// Integrates the kinetic equation with fixed-step RK4 under a constant
/// control. Every emitted state is projected back onto the simplex.
pub fn integrate(
    params: &ModelParams,
    x0: &StateDist,
    u: &ControlVector,
    horizon: f64,
    step: f64,
) -> Result<Vec<(f64, StateDist)>> {
    check_step(horizon, step)?;
    let mut out = vec![(0.0, *x0)];
    let mut x = *x0;
    let n = steps_for(horizon, step);
    let h = if n == 0 { 0.0 } else { horizon / n as f64 };
    for k in 0..n {
        let t = k as f64 * h;
        x = rk4_step(params, &x, u, t, h)?;
        out.push(((k + 1) as f64 * h, x));
    }
    Ok(out)
}

/// Integrates and returns the state at each requested time. `times` must be
/// nondecreasing and start at or after zero.
pub fn integrate_at(
    params: &ModelParams,
    x0: &StateDist,
    u: &ControlVector,
    times: &[f64],
    step: f64,
) -> Result<Vec<StateDist>> {
    let horizon = times.last().copied().unwrap_or(0.0);
    check_step(horizon, step)?;
    let mut out = Vec::with_capacity(times.len());
    let mut x = *x0;
    let mut t = 0.0;
    for &target in times {
        if target < t {
            return Err(Error::InvalidParams(format!("sample times must be nondecreasing, got {target} after {t}")));
        }
        let n = steps_for(target - t, step);
        let h = if n == 0 { 0.0 } else { (target - t) / n as f64 };
        for k in 0..n {
            x = rk4_step(params, &x, u, t + k as f64 * h, h)?;
        }
        t = target;
        out.push(x);
    }
    Ok(out)
}

fn check_step(horizon: f64, step: f64) -> Result<()> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidParams(format!("step must be > 0, got {step}")));
    }
    if !horizon.is_finite() || horizon < 0.0 {
        return Err(Error::InvalidParams(format!("horizon must be >= 0, got {horizon}")));
    }
    Ok(())
}

fn steps_for(span: f64, step: f64) -> usize {
    if span <= 0.0 {
        0
    } else {
        (span / step - 1e-9).ceil().max(1.0) as usize
    }
}

fn rk4_step(p: &ModelParams, x: &StateDist, u: &ControlVector, t: f64, h: f64) -> Result<StateDist> {
    let x0 = x.as_array();
    let axpy = |k: &[f64; 4], a: f64| -> Result<[f64; 4]> {
        let y = std::array::from_fn(|i| x0[i] + a * k[i]);
        guard(&y, t)?;
        Ok(y)
    };
    let k1 = rhs_raw(p, &x0, u);
    let k2 = rhs_raw(p, &axpy(&k1, h / 2.0)?, u);
    let k3 = rhs_raw(p, &axpy(&k2, h / 2.0)?, u);
    let k4 = rhs_raw(p, &axpy(&k3, h)?, u);
    let next: [f64; 4] = std::array::from_fn(|i| x0[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    guard(&next, t + h)?;
    Ok(StateDist::renormalized(next))
}

fn guard(x: &[f64; 4], time: f64) -> Result<()> {
    match x.iter().position(|v| *v < STEP_NEGATIVITY_LIMIT || !v.is_finite()) {
        Some(component) => Err(Error::StepTooLarge { time, component, value: x[component] }),
        None => Ok(()),
    }
}
