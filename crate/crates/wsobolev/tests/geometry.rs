use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wsobolev::fields::Polynomial;
use wsobolev::geometry::{
    christoffel_at, codifferential, covariant_derivative, exterior_derivative, hodge_star, ricci, riemann_at,
    sectional, wedge, FormField, FormSection, FormValue, HodgeFlavor,
};
use wsobolev::manifold::{builtin, BuiltinKind};
use wsobolev::Point;

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(42)
}

#[test]
fn poincare_christoffels_match_conformal_formula() {
    // g = e^{2φ}δ with φ = ln 2 - ln(1 - |x|²):
    // Γ^k_ij = δ_ki ∂_jφ + δ_kj ∂_iφ - δ_ij ∂_kφ.
    let m = builtin(BuiltinKind::PoincareBall, 3, &[], &[0.0; 3], &[0.3; 3]).unwrap();
    let x = [0.2, -0.3, 0.1];
    let q = 1.0 - x.iter().map(|v| v * v).sum::<f64>();
    let dphi: Vec<f64> = x.iter().map(|v| 2.0 * v / q).collect();
    let gamma = christoffel_at(m.chart(), &x).unwrap();
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let want = d(k, i) * dphi[j] + d(k, j) * dphi[i] - d(i, j) * dphi[k];
                assert!((gamma.get(k, i, j) - want).abs() < 1e-10, "Γ^{k}_{i}{j}");
            }
        }
    }
}

#[test]
fn sphere_sectional_curvature_is_one_on_random_planes() {
    let m = builtin(BuiltinKind::SphereStereo, 3, &[], &[0.0; 3], &[0.5; 3]).unwrap();
    let mut r = rng();
    for _ in 0..10 {
        let p = Point::new((0..3).map(|_| r.random_range(-0.5..0.5)).collect());
        let v: Vec<f64> = (0..3).map(|_| r.random_range(-1.0..1.0)).collect();
        let w: Vec<f64> = (0..3).map(|_| r.random_range(-1.0..1.0)).collect();
        assert!((sectional(&m, &p, &v, &w).unwrap() - 1.0).abs() < 1e-3);
    }
}

#[test]
fn hyperbolic_ricci_is_minus_two_g_in_dimension_three() {
    let m = builtin(BuiltinKind::PoincareBall, 3, &[], &[0.0; 3], &[0.3; 3]).unwrap();
    let p = Point::new(vec![0.1, 0.2, -0.2]);
    let ric = ricci(&m, &p).unwrap();
    let g = m.metric_at(&p).unwrap();
    assert!((ric + g * 2.0).amax() < 2e-3);
}

#[test]
fn cusp_curvature_is_minus_one() {
    let m = builtin(BuiltinKind::HyperbolicCusp, 2, &[], &[1.0, 1.0], &[0.2, 0.2]).unwrap();
    let r = riemann_at(&m, &Point::new(vec![1.3, 0.9])).unwrap();
    let k = r.curvature_form(&[1.0, 0.0], &[0.0, 1.0]);
    let g = m.chart().metric(&[1.3, 0.9]);
    assert!((k / (g[(0, 0)] * g[(1, 1)]) + 1.0).abs() < 1e-3);
}

#[test]
fn wedge_of_one_forms_anticommutes() {
    let mut r = rng();
    for _ in 0..20 {
        let a = FormValue::new(3, 1, (0..3).map(|_| r.random_range(-1.0..1.0)).collect());
        let b = FormValue::new(3, 1, (0..3).map(|_| r.random_range(-1.0..1.0)).collect());
        let ab = wedge(&a, &b);
        let ba = wedge(&b, &a);
        for (x, y) in ab.comps.iter().zip(&ba.comps) {
            assert!((x + y).abs() < 1e-14);
        }
        assert!(wedge(&a, &a).comps.iter().all(|v| v.abs() < 1e-14));
    }
}

#[test]
fn flat_star_on_basis_forms() {
    let id = wsobolev::linalg::Mat::identity(3, 3);
    // *dx = dy∧dz, *dy = -dx∧dz, *dz = dx∧dy in the basis (dx∧dy, dx∧dz, dy∧dz).
    let cases = [([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]), ([0.0, 1.0, 0.0], [0.0, -1.0, 0.0]), ([0.0, 0.0, 1.0], [1.0, 0.0, 0.0])];
    for (v, want) in cases {
        let s = hodge_star(&FormValue::new(3, 1, v.to_vec()), &id, HodgeFlavor::Metric);
        assert_eq!(s.comps, want.to_vec());
    }
}

#[test]
fn codifferential_of_gradient_is_minus_laplacian() {
    // f = x² + 3y² - xz: Δf = 8, and d*(df) = -Δf with the positive codifferential.
    let m = builtin(BuiltinKind::Euclidean, 3, &[], &[0.0; 3], &[1.0; 3]).unwrap();
    let f = FormField::scalar(Polynomial::new(3, vec![(1.0, vec![2, 0, 0]), (3.0, vec![0, 2, 0]), (-1.0, vec![1, 0, 1])]));
    let df = exterior_derivative(&f).unwrap();
    let delta = codifferential(&m, &df, HodgeFlavor::Metric).unwrap();
    for x in [[0.1, 0.2, 0.3], [-0.4, 0.5, 0.0]] {
        let v = delta.eval(&x);
        assert_eq!(v.degree, 0);
        assert!((v.comps[0] + 8.0).abs() < 1e-5, "{:?}", v.comps);
    }
}

#[test]
fn conformal_codifferential_of_gradient() {
    // On g = e^{2φ}δ in dimension 2, d*(df) = -e^{-2φ} Δ_flat f.
    let m = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.0, 0.0], &[0.4, 0.4]).unwrap();
    let f = FormField::scalar(Polynomial::new(2, vec![(1.0, vec![2, 0]), (2.0, vec![0, 2]), (0.5, vec![1, 1])]));
    let delta = codifferential(&m, &exterior_derivative(&f).unwrap(), HodgeFlavor::Metric).unwrap();
    let x = [0.2, -0.1];
    let q = 1.0 - 0.05;
    let want = -(q * q / 4.0) * 6.0;
    assert!((delta.eval(&x).comps[0] - want).abs() < 1e-5);
}

#[test]
fn hessian_of_function_is_symmetric() {
    let m = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.0, 0.0], &[0.4, 0.4]).unwrap();
    let f = FormField::scalar(Polynomial::new(2, vec![(1.0, vec![3, 0]), (-2.0, vec![1, 2]), (0.3, vec![0, 1])]));
    let df = exterior_derivative(&f).unwrap();
    let t = covariant_derivative(&m, &df, &Point::new(vec![0.25, 0.1])).unwrap();
    let n = 2;
    for i in 0..n {
        for j in 0..n {
            assert!((t.comps[i * n + j] - t.comps[j * n + i]).abs() < 1e-6);
        }
    }
}
