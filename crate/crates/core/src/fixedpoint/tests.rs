use nalgebra::{Matrix4, Vector4};
use rand::Rng;

use super::*;
use crate::model::ControlVector;
use crate::testutil::{baseline, random_params, rng};

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn params_with(f: impl FnOnce(&mut ModelParams)) -> ModelParams {
    let mut p = baseline();
    f(&mut p);
    p
}

fn q_poly(a: f64, b: f64, q: f64, y: f64) -> f64 {
    b * y * y + y * (q - b + a) - a
}

/// Newton iteration on `(rhs_DI, rhs_DS, rhs_UI, sum - 1) = 0`.
fn newton(p: &ModelParams, u: &ControlVector, x0: [f64; 4]) -> Option<[f64; 4]> {
    let mut x = Vector4::from(x0);
    for _ in 0..100 {
        let arr: [f64; 4] = x.into();
        let f = crate::model::rhs_raw(p, &arr, u);
        let r = Vector4::new(f[0], f[1], f[2], arr.iter().sum::<f64>() - 1.0);
        if r.amax() < 1e-14 * p.max_rate() {
            return Some(arr);
        }
        let j = raw_jacobian(p, &arr, u);
        let m = Matrix4::from_fn(|i, k| if i < 3 { j[i][k] } else { 1.0 });
        x -= m.lu().solve(&r)?;
        if x.iter().any(|v| !v.is_finite() || v.abs() > 10.0) {
            return None;
        }
    }
    None
}

/// Central differences; exact up to rounding since the right-hand side is quadratic.
fn raw_jacobian(p: &ModelParams, x: &[f64; 4], u: &ControlVector) -> [[f64; 4]; 4] {
    let h = 1e-5;
    std::array::from_fn(|i| {
        std::array::from_fn(|k| {
            let (mut a, mut b) = (*x, *x);
            a[k] += h;
            b[k] -= h;
            (crate::model::rhs_raw(p, &a, u)[i] - crate::model::rhs_raw(p, &b, u)[i]) / (2.0 * h)
        })
    })
}

#[test]
fn sis_root_examples() {
    assert!((sis_root(1.0, 1.0, 1.0).unwrap() - GOLDEN).abs() < 1e-15);
    assert_eq!(sis_root(0.0, 2.0, 1.0), Some(0.5));
    assert_eq!(sis_root(0.0, 1.0, 2.0), None);
    assert_eq!(sis_root(0.0, 1.0, 1.0), None);
    assert_eq!(sis_root(0.5, 0.0, 1.5), Some(0.25));
}

#[test]
fn acyclic_examples() {
    let p = params_with(|p| {
        p.beta_uu = 1.0;
        p.q_rec_u = 1.0;
        p.q_inf_u = 1.0;
        p.v_h = 1.0;
    });
    let fp = fixed_point_acyclic(&p, StrategyCase::AlwaysUnprotected).unwrap();
    assert!((fp.x.ui() - GOLDEN).abs() < 1e-15);
    assert_eq!(fp.x.di() + fp.x.ds(), 0.0);
    assert_eq!(fp.method, FixedPointMethod::ClosedForm);

    let p = params_with(|p| {
        p.v_h = 0.0;
        p.beta_uu = 2.0;
        p.q_rec_u = 1.0;
    });
    let fp = fixed_point_acyclic(&p, StrategyCase::AlwaysUnprotected).unwrap();
    assert_eq!(fp.x.as_array(), [0.0, 0.0, 0.5, 0.5]);
    assert!(!fp.is_disease_free());

    let p = params_with(|p| {
        p.v_h = 0.0;
        p.beta_uu = 1.0;
        p.q_rec_u = 2.0;
    });
    let fp = fixed_point_acyclic(&p, StrategyCase::AlwaysUnprotected).unwrap();
    assert_eq!(fp.x.as_array(), [0.0, 0.0, 0.0, 1.0]);
    assert!(fp.is_disease_free());
    assert!(fp.residual(&p) == 0.0);

    let p = params_with(|p| p.beta_uu = 0.0);
    let fp = fixed_point_acyclic(&p, StrategyCase::AlwaysUnprotected).unwrap();
    let a = p.direct_u();
    assert!((fp.x.ui() - a / (p.q_rec_u + a)).abs() < 1e-15);

    assert!(fixed_point_acyclic(&p, StrategyCase::DefendInfected).is_err());
    assert!(fixed_point_mixed(&p, StrategyCase::AlwaysDefended).is_err());
}

#[test]
fn acyclic_roots_solve_their_quadratics_and_are_stable() {
    let mut rng = rng(21);
    for _ in 0..10_000 {
        let p = random_params(&mut rng);
        let i = fixed_point_acyclic(&p, StrategyCase::AlwaysUnprotected).unwrap();
        let y = i.x.ui();
        assert!(y > 0.0 && y < 1.0);
        assert!(q_poly(p.direct_u(), p.beta_uu, p.q_rec_u, y).abs() <= 1e-12);
        // Stability condition of the unprotected SIS point.
        assert!(2.0 * y > 1.0 - (p.q_rec_u + p.direct_u()) / p.beta_uu);

        let ii = fixed_point_acyclic(&p, StrategyCase::AlwaysDefended).unwrap();
        let y = ii.x.di();
        assert!(y > 0.0 && y < 1.0);
        assert!(q_poly(p.direct_d(), p.beta_dd, p.q_rec_d, y).abs() <= 1e-12);

        for fp in [i, ii] {
            assert!(fp.residual(&p) <= RESIDUAL_TOL, "{p:?} {fp:?}");
            assert!(fp.stable, "{p:?} {fp:?}");
        }
    }
}

#[test]
fn case_i_eigenvalues_have_closed_form() {
    let mut rng = rng(22);
    for _ in 0..10_000 {
        let p = random_params(&mut rng);
        let fp = fixed_point_acyclic(&p, StrategyCase::AlwaysUnprotected).unwrap();
        let x = fp.x.ui();
        let alpha = p.direct_d() + x * p.beta_ud;
        let mut want = [
            (1.0 - x) * p.beta_uu - p.direct_u() - x * p.beta_uu - p.q_rec_u,
            -p.lambda - (p.q_rec_d + alpha),
            -p.lambda,
        ];
        want.sort_by(|a, b| b.total_cmp(a));
        for (z, w) in fp.eigenvalues.iter().zip(want) {
            assert!((z.re - w).abs() <= 1e-9 && z.im == 0.0, "{p:?}: {:?} vs {want:?}", fp.eigenvalues);
        }
    }
}

#[test]
fn reduced_spectrum_matches_full_jacobian() {
    let mut rng = rng(23);
    for _ in 0..2000 {
        let p = random_params(&mut rng);
        for fp in all_fixed_points(&p).unwrap() {
            let j = jacobian(&p, &fp.x, &fp.case.control());
            let m = Matrix4::from_fn(|i, k| j[i][k]);
            let mut full: Vec<Complex64> = m.complex_eigenvalues().iter().copied().collect();
            // Mass conservation contributes one zero eigenvalue.
            let zero =
                full.iter().enumerate().min_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).map(|(i, _)| i).unwrap();
            assert!(full[zero].norm() <= 1e-9 * p.max_rate());
            full.remove(zero);
            for z in fp.eigenvalues {
                let d = full.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
                assert!(d <= 1e-7 * p.max_rate(), "{:?} vs {full:?}", fp.eigenvalues);
            }
        }
    }
}

#[test]
fn stability_does_not_depend_on_eliminated_coordinate() {
    let mut rng = rng(24);
    for _ in 0..500 {
        let p = random_params(&mut rng);
        for fp in all_fixed_points(&p).unwrap() {
            let j = jacobian(&p, &fp.x, &fp.case.control());
            for k in 0..4 {
                let keep: Vec<usize> = (0..4).filter(|&i| i != k).collect();
                let r: [[f64; 3]; 3] =
                    std::array::from_fn(|a| std::array::from_fn(|b| j[keep[a]][keep[b]] - j[keep[a]][k]));
                let e = eigenvalues3(&r);
                for (x, y) in e.iter().zip(&fp.eigenvalues) {
                    assert!((x - y).norm() <= 1e-7 * p.max_rate());
                }
            }
        }
    }
}

#[test]
fn mixed_points_are_stationary_and_unique_for_large_lambda() {
    let mut rng = rng(25);
    for _ in 0..3000 {
        let lambda = [1e3, 1e4][rng.random_range(0..2)];
        let p = random_params(&mut rng).with_lambda(lambda);
        for case in [StrategyCase::DefendSusceptible, StrategyCase::DefendInfected] {
            let fps = fixed_point_mixed(&p, case).unwrap();
            assert_eq!(fps.len(), 1, "{p:?} {case}: {fps:?}");
            let fp = fps[0];
            assert!(fp.residual(&p) <= RESIDUAL_TOL);
            assert!(fp.stable, "{p:?} {fp:?}");
            assert_eq!(fp.method, FixedPointMethod::QuarticNumeric);
        }
    }
}

#[test]
fn mixed_points_match_newton_from_many_starts() {
    let mut rng = rng(26);
    let mut converged = 0;
    for _ in 0..300 {
        let p = random_params(&mut rng).with_lambda([1.0, 10.0, 1e3][rng.random_range(0..3)]);
        for case in [StrategyCase::DefendSusceptible, StrategyCase::DefendInfected] {
            let fps = fixed_point_mixed(&p, case).unwrap();
            for fp in &fps {
                assert!(fp.residual(&p) <= RESIDUAL_TOL);
            }
            let u = case.control();
            let mut starts: Vec<[f64; 4]> =
                (0..40).map(|_| crate::testutil::random_state(&mut rng).as_array()).collect();
            starts.push(fixed_point_mixed_asymptotic(&p, case).unwrap().x.as_array());
            for x0 in starts {
                let Some(x) = newton(&p, &u, x0) else { continue };
                if x.iter().any(|v| *v < -1e-12) {
                    continue;
                }
                converged += 1;
                let hit = fps.iter().any(|fp| crate::model::sup_norm_diff(&fp.x.as_array(), &x) <= 1e-9);
                assert!(hit, "{p:?} {case}: newton found {x:?}, quartic found {fps:?}");
            }
        }
    }
    assert!(converged > 1000, "{converged}");
}

#[test]
fn case_iv_is_relabeled_case_iii() {
    let mut rng = rng(27);
    for _ in 0..500 {
        let mut p = random_params(&mut rng);
        // Protection-symmetric rates.
        p.q_rec_u = p.q_rec_d;
        p.q_inf_u = p.q_inf_d;
        p.beta_dd = p.beta_uu;
        p.beta_du = p.beta_ud;
        assert_eq!(p.swap_protection(), p);
        let iii = fixed_point_mixed(&p, StrategyCase::DefendSusceptible).unwrap();
        let iv = fixed_point_mixed(&p, StrategyCase::DefendInfected).unwrap();
        assert_eq!(iii.len(), iv.len());
        let mut swapped: Vec<StateDist> = iii.iter().map(|fp| fp.x.swap_protection()).collect();
        swapped.sort_by(|a, b| a.di().total_cmp(&b.di()));
        for (a, b) in swapped.iter().zip(&iv) {
            assert!(a.sup_distance(&b.x) <= 1e-12);
        }
    }
}

#[test]
fn asymptotic_examples() {
    let p = params_with(|p| {
        p.beta_ud = 1.0;
        p.q_rec_u = 1.0;
        p.q_inf_d = 1.0;
        p.v_h = 1.0;
    });
    let fp = fixed_point_mixed_asymptotic(&p, StrategyCase::DefendSusceptible).unwrap();
    assert!((fp.x.ui() - GOLDEN).abs() < 1e-15);
    assert_eq!(fp.x.di() + fp.x.us(), 0.0);
    assert_eq!(fp.method, FixedPointMethod::LargeLambda);

    let p = params_with(|p| {
        p.beta_du = 1.0;
        p.q_rec_d = 1.0;
        p.q_inf_u = 1.0;
        p.v_h = 1.0;
    });
    let fp = fixed_point_mixed_asymptotic(&p, StrategyCase::DefendInfected).unwrap();
    assert!((fp.x.di() - GOLDEN).abs() < 1e-15);
    assert_eq!(fp.x.ds() + fp.x.ui(), 0.0);
}

#[test]
fn asymptotic_case_iii_coincides_with_defended_point_under_symmetric_contact() {
    let mut rng = rng(28);
    for _ in 0..1000 {
        let mut p = random_params(&mut rng);
        p.beta_du = p.beta_uu;
        p.beta_ud = p.beta_dd;
        p.q_rec_u = p.q_rec_d;
        let bar = fixed_point_mixed_asymptotic(&p, StrategyCase::DefendSusceptible).unwrap();
        let ii = fixed_point_acyclic(&p, StrategyCase::AlwaysDefended).unwrap();
        assert!((bar.x.ui() - ii.x.di()).abs() <= 1e-14);
    }
}

#[test]
fn mixed_points_approach_asymptotic_form() {
    let mut rng = rng(29);
    for _ in 0..300 {
        let p = random_params(&mut rng).with_lambda(1e3);
        let fp = fixed_point_mixed(&p, StrategyCase::DefendSusceptible).unwrap()[0];
        let bar = fixed_point_mixed_asymptotic(&p, StrategyCase::DefendSusceptible).unwrap();
        assert!((fp.x.ui() - bar.x.ui()).abs() <= 5.0 / p.lambda, "{p:?}");
        let predicted = fp.x.ui() * p.q_rec_u / p.lambda;
        assert!((fp.x.di() - predicted).abs() <= 10.0 * predicted / p.lambda * p.max_rate());

        let distances: Vec<f64> = [1e2, 1e3, 1e4, 1e5]
            .iter()
            .map(|&l| {
                let q = p.with_lambda(l);
                let fp = fixed_point_mixed(&q, StrategyCase::DefendInfected).unwrap()[0];
                let bar = fixed_point_mixed_asymptotic(&q, StrategyCase::DefendInfected).unwrap();
                fp.x.sup_distance(&bar.x)
            })
            .collect();
        for w in distances.windows(2) {
            let ratio = w[1] / w[0];
            assert!((0.05..0.2).contains(&ratio), "{p:?}: {distances:?}");
        }
    }
}

#[test]
fn record_round_trip() {
    let p = baseline();
    let fp = fixed_point_mixed(&p, StrategyCase::DefendSusceptible).unwrap()[0];
    let json = serde_json::to_value(fp).unwrap();
    let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
    for key in [
        "case", "x_DI", "x_DS", "x_UI", "x_US", "eig1_re", "eig1_im", "eig2_re", "eig2_im", "eig3_re", "eig3_im",
        "stable", "method",
    ] {
        assert!(keys.contains(&key), "{key} missing from {json}");
    }
    assert_eq!(keys.len(), 13);
    assert_eq!(json["case"], "iii");
    assert_eq!(json["method"], "quartic_numeric");
    let back: FixedPoint = serde_json::from_value(json).unwrap();
    assert!(back.x.sup_distance(&fp.x) <= 1e-15);
    assert_eq!(back.eigenvalues, fp.eigenvalues);
}
