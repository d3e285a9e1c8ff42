//! Case (iii) stationary points at finite `lambda`.
//!
//! With `u_DI = u_US = 1` the stationary equations force `x_US = x_DI = y` and
//!
//! ```text
//! x_UI = y (q_inf_U v_H + beta_DU y + lambda) / (q_rec_U - beta_UU y)
//! (1 - x_UI - 2y)(q_inf_D v_H + beta_DD y + beta_UD x_UI) = (q_rec_D + lambda) y
//! ```
//!
//! Clearing the denominator in the second line gives a polynomial of degree
//! at most four in `y`.

use crate::error::{Error, Result};
use crate::model::{ModelParams, StateDist, SIMPLEX_TOL};

/// Spacing of the uniform bracketing grid on `[0, 1]`.
pub const MIXED_GRID: f64 = 1e-3;

/// Decades below the grid spacing covered by extra geometric sample points;
/// stationary `x_DI` is of order `1/lambda`.
const GEOMETRIC_DECADES: i32 = 13;
const GEOMETRIC_PER_DECADE: i32 = 10;

/// Halvings spent looking for a hidden pair of roots around a local
/// minimum of `|P|`.
const REFINE_STEPS: usize = 60;

type Poly = Vec<f64>;

fn mul(a: &[f64], b: &[f64]) -> Poly {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add(a: &[f64], b: &[f64], sign: f64) -> Poly {
    (0..a.len().max(b.len()))
        .map(|i| a.get(i).copied().unwrap_or(0.0) + sign * b.get(i).copied().unwrap_or(0.0))
        .collect()
}

fn eval(p: &[f64], y: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * y + c)
}

/// Coefficients `[c0, c1, c2, c3, c4]` (ascending powers of `y = x_DI`) of the
/// case (iii) stationary polynomial, i.e. the first stationary line times
/// `(q_rec_U - beta_UU y)^2`.
pub fn mixed_polynomial(params: &ModelParams) -> [f64; 5] {
    let p = params;
    let den = [p.q_rec_u, -p.beta_uu];
    let num = [0.0, p.direct_u() + p.lambda, p.beta_du];
    let y_den = mul(&[0.0, 1.0], &den);
    // (1 - x_UI - 2y) den
    let susceptible = add(&add(&den, &num, -1.0), &y_den, -2.0);
    // (q_inf_D v_H + beta_DD y + beta_UD x_UI) den
    let force = add(&add(&mul(&[p.direct_d()], &den), &mul(&[p.beta_dd], &y_den), 1.0), &mul(&[p.beta_ud], &num), 1.0);
    let outflow = mul(&mul(&[0.0, p.q_rec_d + p.lambda], &den), &den);
    let poly = add(&mul(&susceptible, &force), &outflow, -1.0);
    std::array::from_fn(|i| poly.get(i).copied().unwrap_or(0.0))
}

fn sample_points(pole: Option<f64>) -> Vec<f64> {
    let n = (1.0 / MIXED_GRID).round() as usize;
    let mut ys: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    for k in 1..=(GEOMETRIC_DECADES * GEOMETRIC_PER_DECADE) {
        ys.push(MIXED_GRID * 10f64.powf(-(k as f64) / GEOMETRIC_PER_DECADE as f64));
    }
    if let Some(pole) = pole {
        ys.push(pole);
    }
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    ys
}

fn bisect(poly: &[f64], mut a: f64, mut b: f64) -> f64 {
    let mut fa = eval(poly, a);
    loop {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return if fa.abs() <= eval(poly, b).abs() { a } else { b };
        }
        let fm = eval(poly, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
}

/// Narrows `[a, c]` around a local extremum of `poly` whose sign matches the
/// endpoints; returns a point of opposite sign if the extremum crosses zero.
fn refine_extremum(poly: &[f64], mut a: f64, mut c: f64, sign: f64) -> Option<f64> {
    let g = |y: f64| sign * eval(poly, y);
    let mut b = 0.5 * (a + c);
    for _ in 0..REFINE_STEPS {
        let (left, right) = (0.5 * (a + b), 0.5 * (b + c));
        let (gl, gb, gr) = (g(left), g(b), g(right));
        for (y, v) in [(left, gl), (b, gb), (right, gr)] {
            if v <= 0.0 {
                return Some(y);
            }
        }
        if gl < gb {
            c = b;
            b = left;
        } else if gr < gb {
            a = b;
            b = right;
        } else {
            a = left;
            c = right;
        }
        if c - a <= f64::EPSILON * c.abs() {
            break;
        }
    }
    None
}

/// Real roots of the polynomial in `[0, 1]`, ascending.
fn roots_in_unit_interval(poly: &[f64], pole: Option<f64>) -> Vec<f64> {
    let ys = sample_points(pole);
    let fs: Vec<f64> = ys.iter().map(|&y| eval(poly, y)).collect();
    let mut roots = Vec::new();
    for i in 0..ys.len() {
        if fs[i] == 0.0 {
            roots.push(ys[i]);
        }
        if i + 1 < ys.len() && fs[i] != 0.0 && fs[i + 1] != 0.0 && (fs[i] < 0.0) != (fs[i + 1] < 0.0) {
            roots.push(bisect(poly, ys[i], ys[i + 1]));
        }
        // A local minimum of |P| without a sign change may hide two roots.
        if i > 0 && i + 1 < ys.len() {
            let (l, m, r) = (fs[i - 1], fs[i], fs[i + 1]);
            let same_sign = l != 0.0 && m != 0.0 && r != 0.0 && (l < 0.0) == (m < 0.0) && (m < 0.0) == (r < 0.0);
            if same_sign && m.abs() < l.abs() && m.abs() < r.abs() {
                let sign = m.signum();
                if let Some(y) = refine_extremum(poly, ys[i - 1], ys[i + 1], sign) {
                    roots.push(bisect(poly, ys[i - 1], y));
                    roots.push(bisect(poly, y, ys[i + 1]));
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 4.0 * f64::EPSILON * a.abs().max(f64::MIN_POSITIVE));
    roots
}

/// Simplex points `(y, 1 - x_UI - 2y, x_UI, y)` built from the roots of the
/// case (iii) polynomial.
pub(crate) fn case_iii_states(params: &ModelParams) -> Result<Vec<StateDist>> {
    let p = params;
    if p.q_rec_u <= 0.0 {
        return Err(Error::DenominatorPole { at: 0.0 });
    }
    let pole = (p.beta_uu > 0.0).then(|| p.q_rec_u / p.beta_uu).filter(|y| *y < 1.0);
    let poly = mixed_polynomial(p);
    let mut out = Vec::new();
    for y in roots_in_unit_interval(&poly, pole) {
        let den = p.q_rec_u - p.beta_uu * y;
        if den <= 0.0 {
            continue;
        }
        let x_ui = y * (p.direct_u() + p.beta_du * y + p.lambda) / den;
        let x = [y, 1.0 - x_ui - 2.0 * y, x_ui, y];
        if x.iter().all(|v| v.is_finite() && *v >= -SIMPLEX_TOL) {
            out.push(StateDist::renormalized(x));
        }
    }
    Ok(out)
}
