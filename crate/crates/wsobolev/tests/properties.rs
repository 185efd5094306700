use proptest::prelude::*;

use wsobolev::admissible::Grid;
use wsobolev::geometry::{hodge_star, wedge, FormValue, HodgeFlavor};
use wsobolev::linalg::{binomial, Mat};
use wsobolev::norms::lp_sequence_compare;
use wsobolev::Exec;

fn spd(n: usize, entries: &[f64]) -> Mat {
    let a = Mat::from_fn(n, n, |i, j| entries[i * n + j]);
    &a * a.transpose() + Mat::identity(n, n) * 0.3
}

fn form(n: usize, p: usize, raw: &[f64]) -> FormValue {
    FormValue::new(n, p, raw[..binomial(n, p)].to_vec())
}

proptest! {
    #[test]
    fn star_is_an_isometry(n in 2usize..=4, p in 0usize..=4, raw in prop::collection::vec(-1.0f64..1.0, 16), m in prop::collection::vec(-1.0f64..1.0, 16)) {
        let p = p.min(n);
        let g = spd(n, &m);
        let g_inv = g.clone().try_inverse().unwrap();
        let a = form(n, p, &raw);
        let b = form(n, p, &raw[6..]);
        let (sa, sb) = (hodge_star(&a, &g, HodgeFlavor::Metric), hodge_star(&b, &g, HodgeFlavor::Metric));
        let lhs = sa.inner(&sb, &g_inv);
        let rhs = a.inner(&b, &g_inv);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs() + a.norm(&g_inv) * b.norm(&g_inv)));
    }

    #[test]
    fn star_twice_is_the_sign(n in 2usize..=4, p in 0usize..=4, raw in prop::collection::vec(-1.0f64..1.0, 6), m in prop::collection::vec(-1.0f64..1.0, 16)) {
        let p = p.min(n);
        let g = spd(n, &m);
        let a = form(n, p, &raw);
        let twice = hodge_star(&hodge_star(&a, &g, HodgeFlavor::Metric), &g, HodgeFlavor::Metric);
        let sign = if (p * (n - p)) % 2 == 0 { 1.0 } else { -1.0 };
        for (x, y) in twice.comps.iter().zip(&a.comps) {
            prop_assert!((x - sign * y).abs() < 1e-9);
        }
    }

    #[test]
    fn wedge_is_graded_commutative(n in 2usize..=4, p in 0usize..=2, q in 0usize..=2, raw in prop::collection::vec(-1.0f64..1.0, 12)) {
        prop_assume!(p + q <= n);
        let a = form(n, p, &raw);
        let b = form(n, q, &raw[6..]);
        let ab = wedge(&a, &b);
        let ba = wedge(&b, &a);
        let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
        for (x, y) in ab.comps.iter().zip(&ba.comps) {
            prop_assert!((x - sign * y).abs() < 1e-12);
        }
    }

    #[test]
    fn sequence_norms_are_monotone(values in prop::collection::vec(0.0f64..1e3, 0..50), s in 1.0f64..5.0, extra in 0.0f64..5.0) {
        prop_assert!(lp_sequence_compare(&values, s + extra, s).unwrap());
    }

    #[test]
    fn grid_nearest_round_trips(counts in prop::collection::vec(1usize..6, 1..4), pick in 0usize..1000) {
        let n = counts.len();
        let g = Grid::new(vec![-1.0; n], vec![2.0; n], counts);
        let k = pick % g.len();
        prop_assert_eq!(g.nearest(&g.point(k)), k);
    }

    #[test]
    fn execution_policies_agree(values in prop::collection::vec(-1e3f64..1e3, 0..300)) {
        let f = |x: &f64| (x * 1.7).sin() + x * x;
        prop_assert_eq!(Exec::Sequential.map(&values, f), Exec::default().map(&values, f));
    }
}
