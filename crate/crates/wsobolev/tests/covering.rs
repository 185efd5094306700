use wsobolev::admissible::{Grid, RadiusField, Sampler};
use wsobolev::covering::{candidate_grid, overlap_bound, select, vitali_cover};
use wsobolev::manifold::{builtin, BuiltinKind};
use wsobolev::{Error, Exec};

#[test]
fn overlap_bounds_closed_form() {
    for (n, eps) in [(2, 0.1), (3, 0.2), (4, 0.05)] {
        let (t, t1) = overlap_bound(n, eps);
        let ratio: f64 = (1.0 + eps) / (1.0 - eps);
        let want = ratio.powf(n as f64 / 2.0) * 100f64.powi(n as i32);
        assert!((t / want - 1.0).abs() < 1e-12);
        assert!((t1 / (want * 2f64.powi(n as i32)) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn euclidean_cover_is_sound() {
    let m = builtin(BuiltinKind::Euclidean, 2, &[], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
    let s = Sampler::standard(2);
    let g = candidate_grid(&m, 0, 0.1, &s, None, Exec::default()).unwrap();
    // Pitch R/20 = 0.05 on [-1, 1].
    assert_eq!(g.counts, vec![41, 41]);
    let f = RadiusField::on_grid(&m, &g, 0, 0.1, &s, Exec::default()).unwrap();
    let c = vitali_cover(&m, &f, f.points(), &g.refined(4).points(), Exec::default()).unwrap();
    assert!(c.bases_disjoint());
    assert!(c.radii.iter().all(|r| *r == 1.0));
    assert!((c.base_radius(0) - 0.1).abs() < 1e-15 && (c.dilated_radius(0) - 0.5).abs() < 1e-15);
    let stats = c.stats.as_ref().unwrap();
    assert_eq!(stats.uncovered, 0);
    assert!(stats.within_bounds());
    assert_eq!(stats.max_base_overlap, 1);
    // Independent check: every centre pair is at least two base radii apart.
    for i in 0..c.len() {
        for j in 0..i {
            let d: f64 = c.centers[i].coords.iter().zip(&c.centers[j].coords).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            assert!(0.9 * d >= 0.2 - 1e-12);
        }
    }
}

#[test]
fn coarse_candidates_are_rejected() {
    let m = builtin(BuiltinKind::Euclidean, 2, &[], &[0.0, 0.0], &[2.0, 2.0]).unwrap();
    let s = Sampler::standard(2);
    let f = RadiusField::at_points(&m, &[vec![0.0, 0.0]], 0, 0.1, &s, Exec::default()).unwrap();
    let probes = Grid::uniform(m.window(), 5).points();
    assert!(matches!(vitali_cover(&m, &f, f.points(), &probes, Exec::default()), Err(Error::GridTooCoarse(_))));
}

#[test]
fn selection_is_deterministic_across_policies() {
    let m = builtin(BuiltinKind::SphereStereo, 2, &[], &[0.0, 0.0], &[0.3, 0.3]).unwrap();
    let s = Sampler::standard(2);
    let g = Grid::uniform(m.window(), 25);
    let f = RadiusField::on_grid(&m, &g, 0, 0.1, &s, Exec::default()).unwrap();
    let a = select(&m, &f, f.points(), Exec::Sequential).unwrap();
    let b = select(&m, &f, f.points(), Exec::default()).unwrap();
    assert_eq!(a.centers, b.centers);
    assert!(a.bases_disjoint());
}

#[test]
fn periodic_axis_is_covered_across_the_seam() {
    let m = builtin(BuiltinKind::HyperbolicCusp, 2, &[("theta_period", 0.2)], &[1.05, 0.1], &[0.05, 0.1]).unwrap();
    let s = Sampler::standard(2);
    let g = candidate_grid(&m, 0, 0.1, &s, None, Exec::default()).unwrap();
    let f = RadiusField::on_grid(&m, &g, 0, 0.1, &s, Exec::default()).unwrap();
    let c = vitali_cover(&m, &f, f.points(), &g.refined(2).points(), Exec::default()).unwrap();
    assert!(c.bases_disjoint());
    assert!(c.stats.unwrap().within_bounds());
}
