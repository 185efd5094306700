use wsobolev::admissible::{AdmissibleBall, Grid, RadiusField, Sampler};
use wsobolev::manifold::{builtin, BuiltinKind};
use wsobolev::norms::{pull_back_normalized, Numerics, SobolevParams};
use wsobolev::verify::suites::{map_to_ball, unit_ball_suite, window_suite};
use wsobolev::verify::{check_ball_embedding, check_euclidean_scaling, run_embedding_experiment, ExperimentReport, Row, Summary};
use wsobolev::{Exec, Point};

fn num() -> Numerics {
    Numerics::with_nodes(32, Exec::default())
}

#[test]
fn rows_and_summary() {
    let rows = vec![Row::new("a", 1.0, 2.0), Row::new("b", 0.0, 0.0), Row::new("c", 3.0, 2.0)];
    assert!(!rows[0].vacuous && rows[1].vacuous);
    let mut s = Summary::from_rows(&rows);
    assert_eq!(s.max_ratio, 1.5);
    assert_eq!(s.mean_ratio, 1.0);
    let bounded = s.max_ratio <= 1.0;
    s.threshold("ratio", 1.0).assert("bounded", bounded);
    assert!(!s.passed);
    assert_eq!(s.violations, 1);
}

#[test]
fn report_schema() {
    let rows = vec![Row::new("u0", 1.0, 4.0).with("radius", 0.5)];
    let s = Summary::from_rows(&rows);
    let rep = ExperimentReport::new("demo", serde_json::json!({"kind": "euclidean"}), serde_json::json!({"r": 2}), rows, s);
    let v: serde_json::Value = serde_json::from_str(&rep.to_json().unwrap()).unwrap();
    for key in ["experiment", "manifold", "params", "rows", "summary", "runtime_ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!(v["runtime_ms"].is_null());
    let row = &v["rows"][0];
    assert_eq!(row["field_id"], "u0");
    assert_eq!(row["ratio"], 0.25);
    assert_eq!(row["radius"], 0.5);
    for key in ["max_ratio", "mean_ratio", "violations", "thresholds", "passed"] {
        assert!(v["summary"].get(key).is_some(), "{key}");
    }
}

#[test]
fn ratios_are_invariant_under_field_scaling() {
    let m = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.3, 0.0], &[0.1, 0.1]).unwrap();
    let f = RadiusField::on_grid(&m, &Grid::uniform(m.window(), 5), 0, 0.1, &Sampler::standard(2), Exec::default()).unwrap();
    let p = SobolevParams::new(2, 1, 0, 1.5, 0.5).unwrap();
    let suite = window_suite(&m, 0, 3, 0.5, 1).unwrap();
    let scaled: Vec<_> = suite.iter().map(|u| u.scaled(7.5)).collect();
    let a = run_embedding_experiment(&m, &p, &f, &[("s".into(), suite)], &num()).unwrap();
    let b = run_embedding_experiment(&m, &p, &f, &[("s".into(), scaled)], &num()).unwrap();
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert!((y.lhs / x.lhs - 7.5).abs() < 1e-10 && (y.rhs / x.rhs - 7.5).abs() < 1e-10);
        assert!((x.ratio - y.ratio).abs() <= 1e-12 * x.ratio);
    }
}

#[test]
fn ball_embedding_constants_are_stable() {
    let m = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.3, 0.0], &[0.3, 0.3]).unwrap();
    let s = Sampler::standard(2);
    let balls: Vec<_> = [0.0, 0.3, 0.6]
        .iter()
        .map(|&x| AdmissibleBall::at_admissible_radius(&m, Point::new(vec![x, 0.0]), 1, 0.1, &s).unwrap())
        .collect();
    let rep = check_ball_embedding(&m, &balls, 1.5, &unit_ball_suite(2, 0, 4, 3).unwrap(), &num()).unwrap();
    assert!(rep.passed(), "{:?}", rep.summary);
}

#[test]
fn scaling_rejects_supercritical_exponent() {
    let suite = unit_ball_suite(2, 0, 2, 0).unwrap();
    assert!(check_euclidean_scaling(2, 2.0, &[1.0], &suite, &num()).is_err());
    assert!(check_euclidean_scaling(2, 1.5, &[2.0], &suite, &num()).is_err());
}

#[test]
fn transplant_and_pull_back_are_inverse_up_to_scale() {
    // pull_back(map_to_ball(v))(z) = R^{-p} v(z/R).
    let m = builtin(BuiltinKind::HyperbolicCusp, 3, &[], &[1.0, 1.0, 0.0], &[0.2, 0.2, 0.2]).unwrap();
    let ball = AdmissibleBall::at_admissible_radius(&m, Point::new(vec![1.1, 0.9, 0.05]), 1, 0.1, &Sampler::standard(3)).unwrap();
    for p in 0..=3 {
        let v = &unit_ball_suite(3, p, 1, 10 + p as u64).unwrap()[0];
        let back = pull_back_normalized(&map_to_ball(v, &ball).unwrap(), &ball).unwrap();
        let rp = ball.radius.powi(p as i32);
        for z in [[0.0, 0.0, 0.0], [0.3, -0.2, 0.1], [-0.1, 0.05, -0.25]] {
            let zs: Vec<f64> = z.iter().map(|c| c * ball.radius).collect();
            let got = back.value(&zs);
            let want = v.value(&z);
            for (a, b) in got.comps.iter().zip(&want.comps) {
                assert!((a * rp - b).abs() < 1e-10 * (1.0 + b.abs()), "p = {p}");
            }
        }
    }
}

#[test]
fn suites_are_seeded() {
    let m = builtin(BuiltinKind::SphereStereo, 2, &[], &[0.0, 0.0], &[0.5, 0.5]).unwrap();
    let a = window_suite(&m, 1, 3, 0.5, 9).unwrap();
    let b = window_suite(&m, 1, 3, 0.5, 9).unwrap();
    let c = window_suite(&m, 1, 3, 0.5, 10).unwrap();
    let x = [0.1, -0.05];
    assert_eq!(a[0].value(&x).comps, b[0].value(&x).comps);
    assert_ne!(a[0].value(&x).comps, c[0].value(&x).comps);
}
