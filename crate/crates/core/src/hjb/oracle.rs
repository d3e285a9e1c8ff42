use nalgebra::{Matrix5, Vector5};
use serde::{Deserialize, Serialize};

use super::{close_solutions, renormalize, VALIDITY_TOL};
use crate::error::{Error, Result};
use crate::model::{alpha_beta, ControlVector, EffectiveRates, ModelParams, StateDist, StrategyCase, DI, DS, UI, US};

/// Ratio of extreme singular values below which a control-fixed system is
/// treated as rank-deficient.
const RANK_TOL: f64 = 1e-12;

/// A solution found by brute force over all sixteen binary controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSolution {
    pub g: [f64; 4],
    pub mu: f64,
    pub degenerate: bool,
    /// Every binary control attaining the minimum in all four lines.
    pub optimal_controls: Vec<ControlVector>,
}

impl OracleSolution {
    /// Admissible cases whose control is among the optimal ones.
    pub fn cases(&self) -> Vec<StrategyCase> {
        StrategyCase::ALL.into_iter().filter(|c| self.optimal_controls.contains(&c.control())).collect()
    }
}

/// For each binary control, solves the linear system obtained by fixing the
/// control in the HJB lines (plus `g(US) = 0`), and keeps the solution if
/// that control is optimal against it. Solutions equal up to a shift of `g`
/// are merged.
pub fn oracle_enumerate(params: &ModelParams, x: &StateDist) -> Result<Vec<OracleSolution>> {
    let rates = alpha_beta(params, x);
    let mut out: Vec<OracleSolution> = Vec::new();
    let mut solvable = 0;
    for u in ControlVector::all() {
        let Some((g, mu)) = solve_fixed_control(params, rates, &u) else {
            continue;
        };
        solvable += 1;
        let (optimal_controls, degenerate) = optimal_set(&g);
        if !optimal_controls.contains(&u) {
            continue;
        }
        let g = renormalize(g);
        if out.iter().any(|s| close_solutions(&s.g, s.mu, &g, mu)) {
            continue;
        }
        out.push(OracleSolution { g, mu, degenerate, optimal_controls });
    }
    if solvable == 0 {
        return Err(Error::SingularSystem);
    }
    out.sort_by(|a, b| a.mu.total_cmp(&b.mu));
    Ok(out)
}

fn solve_fixed_control(p: &ModelParams, rates: EffectiveRates, u: &ControlVector) -> Option<([f64; 4], f64)> {
    let EffectiveRates { alpha, beta } = rates;
    let l = p.lambda;
    let [u_di, u_ds, u_ui, u_us] = u.as_array().map(f64::from);
    // Unknowns: g(DI), g(DS), g(UI), g(US), mu.
    #[rustfmt::skip]
    let a = Matrix5::new(
        -l * u_di - p.q_rec_d, p.q_rec_d,           l * u_di,              0.0,                  -1.0,
        alpha,                 -l * u_ds - alpha,   0.0,                   l * u_ds,             -1.0,
        l * u_ui,              0.0,                 -l * u_ui - p.q_rec_u, p.q_rec_u,            -1.0,
        0.0,                   l * u_us,            beta,                  -l * u_us - beta,     -1.0,
        0.0,                   0.0,                 0.0,                   1.0,                  0.0,
    );
    let rhs = Vector5::new(-(p.k_i + p.k_d), -p.k_d, -p.k_i, 0.0, 0.0);

    let sv = a.singular_values();
    let (max, min) = (sv.max(), sv.min());
    if max.is_nan() || max <= 0.0 || min / max < RANK_TOL {
        return None;
    }
    let sol = a.lu().solve(&rhs)?;
    sol.iter().all(|v| v.is_finite()).then(|| ([sol[0], sol[1], sol[2], sol[3]], sol[4]))
}

/// All controls optimal against `g`, from the sign of each line's switching
/// difference, and whether any line is tied.
fn optimal_set(g: &[f64; 4]) -> (Vec<ControlVector>, bool) {
    // Switching from state s to s' is optimal iff g(s') - g(s) <= 0.
    let diffs = [g[UI] - g[DI], g[US] - g[DS], g[DI] - g[UI], g[DS] - g[US]];
    let choices: Vec<Vec<u8>> = diffs
        .iter()
        .map(|d| {
            if *d < -VALIDITY_TOL {
                vec![1]
            } else if *d > VALIDITY_TOL {
                vec![0]
            } else {
                vec![0, 1]
            }
        })
        .collect();
    let degenerate = choices.iter().any(|c| c.len() > 1);
    let mut controls = Vec::new();
    for &a in &choices[0] {
        for &b in &choices[1] {
            for &c in &choices[2] {
                for &d in &choices[3] {
                    controls.push(ControlVector::new(a, b, c, d));
                }
            }
        }
    }
    controls.sort();
    (controls, degenerate)
}
