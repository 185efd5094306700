use std::f64::consts::PI;

use wsobolev::admissible::{AdmissibleBall, Grid, RadiusField, Sampler};
use wsobolev::covering::cover_window;
use wsobolev::fields::{Bump, Constant};
use wsobolev::geometry::FormField;
use wsobolev::manifold::{builtin, BuiltinKind};
use wsobolev::norms::{
    chart_comparison, holder_ball_check, jet_norms, localization_check, lp_norm, lp_sequence_compare, sobolev_norm,
    volume, Numerics, SobolevParams, Weight,
};
use wsobolev::region::{BallRegion, BoxRegion, Region};
use wsobolev::{Exec, Point};

fn num() -> Numerics {
    Numerics::with_nodes(48, Exec::default())
}

#[test]
fn stereographic_disk_area() {
    // Area of the stereographic disk |x| < a on the unit sphere: 4πa²/(1+a²).
    let m = builtin(BuiltinKind::SphereStereo, 2, &[], &[0.0, 0.0], &[0.5, 0.5]).unwrap();
    for a in [0.3, 1.0, 2.0] {
        let v = volume(&m, &Region::Ball(BallRegion::coordinate(vec![0.0, 0.0], a)), &Weight::Unit, &num()).unwrap();
        assert!((v / (4.0 * PI * a * a / (1.0 + a * a)) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn three_ball_volume_in_hyperbolic_space() {
    // Geodesic ball of radius ρ in H³: π(sinh 2ρ - 2ρ).
    let m = builtin(BuiltinKind::PoincareBall, 3, &[], &[0.0; 3], &[0.3; 3]).unwrap();
    let rho = 1.0f64;
    let v = volume(&m, &Region::Ball(BallRegion::coordinate(vec![0.0; 3], (rho / 2.0).tanh())), &Weight::Unit, &num()).unwrap();
    assert!((v / (PI * ((2.0 * rho).sinh() - 2.0 * rho)) - 1.0).abs() < 1e-8);
}

#[test]
fn one_form_norm_against_midpoint_rule() {
    // |dx|_g = (1 - |x|²)/2 on the Poincaré disk; ∫|dx|² dv over a box
    // equals the Euclidean area of the box.
    let m = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.0, 0.0], &[0.4, 0.4]).unwrap();
    let dx = FormField::new(2, 1, vec![Constant::new(2, 1.0), Constant::new(2, 0.0)]).unwrap();
    let b = BoxRegion::new(vec![-0.1, 0.0], vec![0.3, 0.5]);
    let v = lp_norm(&m, &dx, &Region::Box(b.clone()), 2.0, &Weight::Unit, &num()).unwrap();
    assert!((v * v - 0.2).abs() < 1e-12);
    // L¹ against a midpoint rule: ∫ (1-|x|²)/2 · 4/(1-|x|²)² = ∫ 2/(1-|x|²).
    let k = 800;
    let (hx, hy) = (0.4 / k as f64, 0.5 / k as f64);
    let mut mid = 0.0;
    for i in 0..k {
        for j in 0..k {
            let (x, y) = (-0.1 + (i as f64 + 0.5) * hx, (j as f64 + 0.5) * hy);
            mid += 2.0 / (1.0 - x * x - y * y) * hx * hy;
        }
    }
    let l1 = lp_norm(&m, &dx, &Region::Box(b), 1.0, &Weight::Unit, &num()).unwrap();
    assert!((l1 / mid - 1.0).abs() < 1e-6);
}

#[test]
fn jet_norms_of_a_linear_function() {
    // u = 2x - y on the unit square: |∇u| = √5, ∇²u = 0.
    let m = builtin(BuiltinKind::Euclidean, 2, &[], &[0.5, 0.5], &[0.5, 0.5]).unwrap();
    let u = FormField::scalar(wsobolev::fields::Polynomial::new(2, vec![(2.0, vec![1, 0]), (-1.0, vec![0, 1])]));
    let r = Region::Box(BoxRegion::new(vec![0.0, 0.0], vec![1.0, 1.0]));
    let j = jet_norms(&m, &u, &r, 2, 2.0, &Weight::Unit, &num()).unwrap();
    assert!((j[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
    assert!((j[1] - 5f64.sqrt()).abs() < 1e-12);
    assert!(j[2].abs() < 1e-4);
    let s = sobolev_norm(&m, &u, &r, 1, 2.0, &Weight::Unit, &num()).unwrap();
    assert!((s - j[0] - j[1]).abs() < 1e-12);
}

#[test]
fn weights_scale_norms() {
    let m = builtin(BuiltinKind::HyperbolicCusp, 2, &[("theta_period", 0.2)], &[1.1, 0.1], &[0.1, 0.1]).unwrap();
    let s = Sampler::standard(2);
    let f = RadiusField::on_grid(&m, &Grid::uniform(m.window(), 5), 0, 0.1, &s, Exec::default()).unwrap();
    let one = FormField::scalar(Constant::new(2, 1.0));
    let r = Region::Box(BoxRegion::new(m.window().lo(), m.window().hi()));
    // R = 0.05 e^{-t} and dv = e^{-t} dt dθ: ∫R dv = 0.2·0.05·∫e^{-2t}dt.
    let v = lp_norm(&m, &one, &r, 1.0, &Weight::power(1.0, &f), &num()).unwrap();
    let want = 0.2 * 0.05 * ((-2.0f64).exp() - (-2.4f64).exp()) / 2.0;
    assert!((v / want - 1.0).abs() < 2e-3, "{v} vs {want}");
}

#[test]
fn sobolev_parameters() {
    let p = SobolevParams::new(3, 1, 0, 2.0, 1.0).unwrap();
    assert!((p.s - 6.0).abs() < 1e-12);
    assert!((p.nu - 6.0 * 2.5).abs() < 1e-12);
    assert!(SobolevParams::new(2, 1, 0, 2.0, 0.0).is_err());
    assert!(SobolevParams::new(2, 0, 1, 2.0, 0.0).is_err());
    assert!(SobolevParams::new(2, 1, 0, 0.5, 0.0).is_err());
}

#[test]
fn sequence_comparison() {
    assert!(lp_sequence_compare(&[3.0, 4.0], 2.0, 1.0).unwrap());
    assert!(lp_sequence_compare(&[], 3.0, 2.0).unwrap());
    assert!(lp_sequence_compare(&[1.0], 1.0, 2.0).is_err());
    assert!(lp_sequence_compare(&[-1.0], 2.0, 1.0).is_err());
}

#[test]
fn holder_constant_of_a_constant_on_a_flat_ball() {
    // For u ≡ 1 on B(x, R): ‖u‖_r/‖u‖_s = (ν_n Rⁿ)^{1/r - 1/s}, so the
    // normalized constant is ν_n^{1/r - 1/s}.
    let m = builtin(BuiltinKind::Euclidean, 2, &[], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
    let s = Sampler::standard(2);
    let ball = AdmissibleBall::at_admissible_radius(&m, Point::new(vec![0.1, 0.2]), 1, 0.1, &s).unwrap();
    let one = FormField::scalar(Constant::new(2, 1.0));
    let rep = holder_ball_check(&m, &one, &ball, 1.0, 2.0, &num()).unwrap();
    assert!((rep.constant.unwrap() - PI.sqrt()).abs() < 1e-10);
    assert!(rep.passed);
    assert!(holder_ball_check(&m, &one, &ball, 2.0, 1.0, &num()).is_err());
}

#[test]
fn chart_comparison_lies_in_band() {
    let m = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.3, 0.0], &[0.2, 0.2]).unwrap();
    let s = Sampler::standard(2);
    let ball = AdmissibleBall::at_admissible_radius(&m, Point::new(vec![0.35, 0.05]), 1, 0.1, &s).unwrap();
    let c = ball.center.coords.clone();
    let w = FormField::scalar(Bump::compact(1.0, &c, &[ball.radius; 2]).into_scalar());
    let cmp = chart_comparison(&m, &w, &ball, 2.0, &num()).unwrap();
    assert!(cmp.within_band, "{cmp:?}");
    assert!(cmp.inner_lp <= cmp.flat_lp);
}

#[test]
fn localization_band() {
    let m = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.3, 0.0], &[0.03, 0.03]).unwrap();
    let s = Sampler::standard(2);
    let run = cover_window(&m, 0, 0.1, &s, None, Exec::default()).unwrap();
    let u = FormField::scalar(Bump::compact(1.0, &[0.3, 0.0], &[0.02, 0.02]).into_scalar());
    for mu in [0.0, 1.0, -2.0] {
        let rep = localization_check(&m, &u, &run.covering, 2.0, mu, &run.field, &Numerics::with_nodes(16, Exec::default())).unwrap();
        assert!(rep.within_band, "{rep:?}");
        assert!(rep.ratio >= 1.0 / 2f64.powf(mu.abs()));
    }
}
