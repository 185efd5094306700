use wsobolev::admissible::{admissible_radius, is_admissible, AdmissibleBall, Grid, Normalizer, RadiusField, Sampler};
use wsobolev::manifold::{builtin, BuiltinKind};
use wsobolev::{Error, Exec, Point};

const EPS: f64 = 0.1;

#[test]
fn euclidean_radius_is_capped_at_one() {
    let m = builtin(BuiltinKind::Euclidean, 3, &[], &[0.0; 3], &[1.0; 3]).unwrap();
    let s = Sampler::standard(3);
    for class in [0, 1] {
        let r = admissible_radius(&m, &Point::new(vec![0.3, -0.2, 0.5]), class, EPS, &s).unwrap();
        assert_eq!(r.radius, 1.0);
    }
}

#[test]
fn normalized_metric_is_identity_at_center() {
    let m = builtin(BuiltinKind::HyperbolicCusp, 3, &[], &[1.0, 1.0, 0.0], &[0.2, 0.2, 0.2]).unwrap();
    let x = [1.2, 0.7, 0.1];
    let nz = Normalizer::at(m.chart(), &x).unwrap();
    let g = nz.metric(m.chart(), &[0.0; 3]);
    assert!((g - wsobolev::linalg::Mat::identity(3, 3)).amax() < 1e-12);
    let y = nz.to_chart(&[0.0, 0.01, 0.0]);
    assert!((nz.distance(m.chart(), &y) - 0.01).abs() < 1e-12);
}

#[test]
fn cusp_radius_is_limited_by_the_period() {
    // In normalized units the θ-circle has half-length (period/2)·e^{-t}, and
    // the metric of the normalized chart stays within (1±ε) well past it.
    let period = 0.2;
    let m = builtin(BuiltinKind::HyperbolicCusp, 2, &[("theta_period", period)], &[1.5, 0.1], &[1.0, 0.1]).unwrap();
    let s = Sampler::standard(2);
    for t in [1.0f64, 2.0] {
        let r = admissible_radius(&m, &Point::new(vec![t, 0.05]), 0, EPS, &s).unwrap();
        let want = 0.5 * period * (-t).exp();
        assert!((r.r_prime / want - 1.0).abs() < 2e-3, "t = {t}: {} vs {want}", r.r_prime);
        assert!((r.radius - r.r_prime / 2.0).abs() < 1e-15);
    }
}

#[test]
fn poincare_radius_decreases_towards_the_boundary() {
    let m = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.0, 0.0], &[0.5, 0.5]).unwrap();
    let s = Sampler::standard(2);
    let mut last = f64::INFINITY;
    for x in [0.0, 0.3, 0.6, 0.85] {
        let r0 = admissible_radius(&m, &Point::new(vec![x, 0.0]), 0, EPS, &s).unwrap();
        let r1 = admissible_radius(&m, &Point::new(vec![x, 0.0]), 1, EPS, &s).unwrap();
        assert!(r0.radius < last);
        assert!(r1.radius <= r0.radius * (1.0 + 2e-3));
        last = r0.radius;
    }
}

#[test]
fn admissibility_is_monotone_in_the_radius() {
    let m = builtin(BuiltinKind::SphereStereo, 2, &[], &[0.0, 0.0], &[0.5, 0.5]).unwrap();
    let s = Sampler::standard(2);
    let x = Point::new(vec![0.4, 0.1]);
    let r = admissible_radius(&m, &x, 1, EPS, &s).unwrap();
    assert!(is_admissible(&m, &x, 0.9 * r.r_prime, 1, EPS, &s).unwrap().admissible);
    assert!(!is_admissible(&m, &x, 1.2 * r.r_prime, 1, EPS, &s).unwrap().admissible);
    let err = AdmissibleBall::new(&m, x.clone(), 1.2 * r.r_prime, 1, EPS, &s).unwrap_err();
    assert!(matches!(err, Error::NotAdmissible(_)));
    assert!(AdmissibleBall::new(&m, x, 0.5 * r.r_prime, 1, EPS, &s).is_ok());
}

#[test]
fn invalid_class_and_epsilon() {
    let m = builtin(BuiltinKind::Euclidean, 2, &[], &[0.0; 2], &[1.0; 2]).unwrap();
    let s = Sampler::standard(2);
    let x = Point::new(vec![0.0, 0.0]);
    assert!(admissible_radius(&m, &x, 2, EPS, &s).is_err());
    assert!(admissible_radius(&m, &x, 0, 0.7, &s).is_err());
    assert!(admissible_radius(&m, &Point::new(vec![0.0]), 0, EPS, &s).is_err());
}

#[test]
fn outside_point_is_reported() {
    let m = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.0; 2], &[0.5; 2]).unwrap();
    let s = Sampler::standard(2);
    assert!(admissible_radius(&m, &Point::new(vec![1.5, 0.0]), 0, EPS, &s).is_err());
}

#[test]
fn radius_field_execution_policies_agree() {
    let m = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.3, 0.0], &[0.2, 0.2]).unwrap();
    let g = Grid::uniform(m.window(), 5);
    let s = Sampler::standard(2);
    let a = RadiusField::on_grid(&m, &g, 1, EPS, &s, Exec::Sequential).unwrap();
    let b = RadiusField::on_grid(&m, &g, 1, EPS, &s, Exec::default()).unwrap();
    for (x, y) in a.samples().iter().zip(b.samples()) {
        assert_eq!(x.r_prime.to_bits(), y.r_prime.to_bits());
    }
    let node = g.point(7);
    assert_eq!(a.radius(&node).unwrap(), a.samples()[7].radius);
    let mid: Vec<f64> = node.iter().zip(g.point(8)).map(|(p, q)| 0.5 * (p + q)).collect();
    let (r7, r8) = (a.samples()[7].radius, a.samples()[8].radius);
    assert!((a.radius(&mid).unwrap() - (r7 * r8).sqrt()).abs() < 1e-12);
}
