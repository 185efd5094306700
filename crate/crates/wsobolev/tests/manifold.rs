use std::path::Path;

use wsobolev::manifold::{builtin, BuiltinKind, ManifoldSpec};
use wsobolev::{Error, Point};

fn fixture(name: &str) -> ManifoldSpec {
    ManifoldSpec::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)).unwrap()
}

#[test]
fn fixtures_load_and_build() {
    for (name, kind, n) in [
        ("euclid2.json", BuiltinKind::Euclidean, 2),
        ("poincare2.json", BuiltinKind::PoincareBall, 2),
        ("sphere2.json", BuiltinKind::SphereStereo, 2),
        ("cusp2.json", BuiltinKind::HyperbolicCusp, 2),
        ("cusp3.json", BuiltinKind::HyperbolicCusp, 3),
    ] {
        let spec = fixture(name);
        let m = spec.build().unwrap();
        assert_eq!(m.kind(), Some(kind));
        assert_eq!(m.n(), n);
        let back: ManifoldSpec = serde_json::from_value(m.spec_json()).unwrap();
        assert_eq!(back, spec);
    }
}

#[test]
fn spec_errors() {
    let bad = |text: &str| serde_json::from_str::<ManifoldSpec>(text).map_err(Error::from).and_then(|s| s.build());
    let w = r#""window": {"center": [0.0, 0.0], "halfwidths": [0.1, 0.1]}"#;
    assert!(matches!(bad(&format!(r#"{{"kind": "torus", "n": 2, {w}}}"#)), Err(Error::UnknownKind(_))));
    assert!(matches!(
        bad(&format!(r#"{{"kind": "poincare_ball", "n": 2, "params": {{"curvature": 2.0}}, {w}}}"#)),
        Err(Error::InvalidSpec(_))
    ));
    assert!(bad(&format!(r#"{{"kind": "euclidean", "n": 2, "colour": 1, {w}}}"#)).is_err());
    let outside = r#"{"kind": "poincare_ball", "n": 2, "window": {"center": [0.9, 0.0], "halfwidths": [0.2, 0.2]}}"#;
    assert!(bad(outside).is_err());
}

#[test]
fn conformal_metrics_match_closed_forms() {
    let p = builtin(BuiltinKind::PoincareBall, 3, &[], &[0.0; 3], &[0.3; 3]).unwrap();
    let s = builtin(BuiltinKind::SphereStereo, 3, &[], &[0.0; 3], &[0.3; 3]).unwrap();
    for x in [[0.1, -0.2, 0.3], [0.5, 0.1, 0.0], [-0.3, -0.3, 0.6]] {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let gp = p.chart().metric(&x);
        let gs = s.chart().metric(&x);
        for i in 0..3 {
            for j in 0..3 {
                let d = if i == j { 1.0 } else { 0.0 };
                assert!((gp[(i, j)] - d * 4.0 / (1.0 - r2).powi(2)).abs() < 1e-12);
                assert!((gs[(i, j)] - d * 4.0 / (1.0 + r2).powi(2)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn cusp_metric_and_periodicity() {
    let c = builtin(BuiltinKind::HyperbolicCusp, 3, &[("theta_period", 0.5)], &[1.5, 0.25, 0.0], &[0.5, 0.25, 0.1]).unwrap();
    let g = c.chart().metric(&[2.0, 0.1, 0.3]);
    assert!((g[(0, 0)] - 1.0).abs() < 1e-15);
    assert!((g[(1, 1)] - (-4.0f64).exp()).abs() < 1e-15);
    assert!((g[(2, 2)] - 1.0).abs() < 1e-15);
    let w = c.chart().wrap(&[2.0, 1.3, 0.0]);
    assert!((w[1] - 0.3).abs() < 1e-12);
    let mut d = vec![0.0, 0.45, 0.0];
    c.chart().min_image(&mut d);
    assert!((d[1] + 0.05).abs() < 1e-12);
    assert_eq!(c.oracle("sectional_curvature", 0.0), None);
}

#[test]
fn analytic_partials_agree_with_differences() {
    for kind in [BuiltinKind::PoincareBall, BuiltinKind::SphereStereo, BuiltinKind::HyperbolicCusp] {
        let center = if kind == BuiltinKind::HyperbolicCusp { [1.0, 1.0] } else { [0.2, -0.1] };
        let m = builtin(kind, 2, &[], &center, &[0.1, 0.1]).unwrap();
        let x = [center[0] + 0.03, center[1] - 0.02];
        let a = m.chart().metric_partials(&x).unwrap();
        let f = m.chart().fd_partials(&x).unwrap();
        for (da, df) in a.iter().zip(&f) {
            assert!((da - df).amax() < 1e-6 * (1.0 + da.amax()));
        }
    }
}

#[test]
fn volume_element_and_domain() {
    let p = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.0, 0.0], &[0.3, 0.3]).unwrap();
    let v = p.volume_element(&Point::new(vec![0.5, 0.0])).unwrap();
    assert!((v - 4.0 / 0.75f64.powi(2)).abs() < 1e-12);
    assert!(!p.chart().contains(&[0.97, 0.0]));
    assert!(p.chart().contains(&[0.9, 0.0]));
}
