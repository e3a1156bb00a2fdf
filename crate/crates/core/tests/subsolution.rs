mod common;

use proptest::prelude::*;
use subsol::profiles::{make_ansatz_profile, Alpha, RadialProfile};
use subsol::subsolution::{check_conditions, eval_qs, SubsolutionFields};

fn fields(al: f64, b: f64) -> SubsolutionFields {
    SubsolutionFields::new(make_ansatz_profile(Alpha::new(al).unwrap(), b).unwrap()).unwrap()
}

/// `W₂` of the ansatz from the antiderivative of `ζ^{3+b}(1 − a ln ζ)`.
fn w2_exact(al: f64, b: f64, xi: f64) -> f64 {
    let a = (4.0 + b) * (al + b) / (4.0 - al);
    let k = 4.0 + b;
    let mass = xi.powf(k) / k - a * (xi.powf(k) * xi.ln() / k - xi.powf(k) / (k * k));
    xi * common::ansatz_h(al, b, xi) - (4.0 - al) * mass / (xi * xi)
}

fn g_exact(al: f64, b: f64, xi: f64) -> f64 {
    let a = (4.0 + b) * (al + b) / (4.0 - al);
    xi.powf(b) * ((2.0 + b) * (1.0 - a * xi.ln()) - a)
}

#[test]
fn functionals_at_alpha_one() {
    let r = fields(1.0, 0.0).report().unwrap();
    assert!(r.cond1_residual < 1e-12);
    assert!(common::rel(r.a_functional, 1.0 / 36.0) < 1e-12);
    assert!(common::rel(r.b_functional, 1.0 / 48.0) < 1e-12);
    assert!(common::rel(r.c_opt.unwrap(), 4.0 / 9.0) < 1e-12);
    assert!(r.is_admissible());
}

#[test]
fn report_json_fields() {
    let r = fields(1.0, 0.0).report().unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["A", "B", "alpha", "b", "c_max_bound", "c_opt", "cond1_residual", "cond2_margin"]);
}

#[test]
fn q_at_one_half() {
    let f = fields(1.0, 0.0);
    let oracle = eval_qs(Alpha::new(1.0).unwrap(), 1.0)
        - common::simpson(|x| g_exact(1.0, 0.0, x) * common::ansatz_h(1.0, 0.0, x), 0.5, 1.0);
    let q = f.q(0.5).unwrap();
    assert!((q - oracle).abs() < 1e-12);
    assert!((q + 0.753_667_833).abs() < 1e-9);
}

#[test]
fn rigid_rotation_fails_condition_one() {
    let p = RadialProfile::monomial(Alpha::new(1.0).unwrap(), 1.0).unwrap();
    let r = check_conditions(&p).unwrap();
    assert!((r.cond1_residual - 0.25).abs() < 1e-12);
    assert!(!r.is_admissible());
}

#[test]
fn w2_matches_simpson_oracle() {
    for &(al, b) in &[(1.0, 0.0), (0.4, 1.5), (1.6, 0.2)] {
        let f = fields(al, b);
        for xi in [0.05, 0.3, 0.7] {
            let want = common::ansatz_w2(al, b, xi);
            assert!((f.w2(xi).unwrap() - want).abs() < 1e-11, "α={al} b={b} ξ={xi}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn w2_vanishes_outside_the_disc(al in 0.05f64..1.95, b in 0.0f64..6.0) {
        let f = fields(al, b);
        prop_assert!(f.w2(1.0).unwrap().abs() < 1e-9);
        prop_assert_eq!(f.w2(1.0 + 1e-9).unwrap(), 0.0);
        prop_assert_eq!(f.w2(3.0).unwrap(), 0.0);
    }

    #[test]
    fn w2_matches_antiderivative(al in 0.05f64..1.95, b in 0.0f64..4.0, xi in 0.001f64..1.0) {
        let f = fields(al, b);
        prop_assert!((f.w2(xi).unwrap() - w2_exact(al, b, xi)).abs() < 1e-12);
    }

    #[test]
    fn q_is_continuous_at_one(al in 0.05f64..1.95, b in 0.0f64..4.0) {
        let f = fields(al, b);
        let inner = f.q(1.0 - 1e-10).unwrap();
        let outer = f.q(1.0 + 1e-10).unwrap();
        prop_assert!((inner - outer).abs() < 1e-8);
    }

    #[test]
    fn b_functional_matches_closed_form(al in 0.05f64..1.95, b in 0.0f64..4.0) {
        let f = fields(al, b);
        let closed = (b + al).powi(2) / ((4.0 - al) * (4.0 + b).powi(2));
        prop_assert!(common::rel(f.b_functional().unwrap(), closed) < 1e-9);
    }

    #[test]
    fn residuals_are_small(al in 0.1f64..1.9, b in 0.0f64..2.0) {
        let f = fields(al, b);
        let grid: Vec<f64> = (0..20).map(|k| 0.05 + 0.9 * k as f64 / 19.0).collect();
        let (r1, r2) = f.residual_ss(&grid, 1e-4).unwrap();
        prop_assert!(r1 < 1e-5 && r2 < 1e-5, "{} {}", r1, r2);
    }
}

#[test]
fn b_oracle_by_simpson() {
    for &(al, b) in &[(1.0, 0.0), (0.5, 2.0)] {
        let oracle = common::simpson_from_zero(|x| (x * w2_exact(al, b, x)).abs(), 1.0);
        assert!(common::rel(fields(al, b).b_functional().unwrap(), oracle) < 1e-10);
    }
}

#[test]
fn perturbed_profile_is_flagged() {
    let p = RadialProfile::log_power(Alpha::new(1.0).unwrap(), 1.5, 0.0).unwrap();
    let r = check_conditions(&p).unwrap();
    assert!(r.cond1_residual > 1e-3);
    assert!(!r.is_admissible());
}
