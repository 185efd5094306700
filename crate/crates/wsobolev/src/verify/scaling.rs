//! Flat-ball Sobolev estimates and their dependence on the radius.

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fields::Affine;
use crate::geometry::FormField;
use crate::norms::{flat_space, jet_norms, Numerics, Weight};
use crate::region::{BallRegion, Region};

use super::report::{ExperimentReport, Row, Summary};

/// Allowed max/min spread of the suite constant across radii.
pub const SCALING_SPREAD: f64 = 1.25;
/// Allowed relative drift of the homogeneous constant ‖u‖_t/‖∇u‖_r.
pub const HOMOGENEOUS_TOL: f64 = 1e-3;

#[derive(Clone, Debug, Serialize)]
struct ScalingParams {
    n: usize,
    r: f64,
    t: f64,
    radii: Vec<f64>,
    suite_size: usize,
}

/// For every radius R and suite function u, evaluates ‖u‖_{L^t(B_R)} against
/// R⁻¹‖u‖_{W^{1,r}(B_R)} with 1/t = 1/r - 1/n. Rows also carry the homogeneous
/// constant ‖u_R‖_t/‖∇u_R‖_r of the rescaled field u_R(x) = u(x/R), which is
/// exactly invariant.
pub fn check_euclidean_scaling(n: usize, r: f64, radii: &[f64], suite: &[FormField], num: &Numerics) -> Result<ExperimentReport> {
    if !(r >= 1.0) || r >= n as f64 {
        return Err(Error::InvalidParams(format!("need 1 ≤ r < n, got r = {r}, n = {n}")));
    }
    if radii.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
        return Err(Error::InvalidParams("radii must lie in (0, 1]".into()));
    }
    let t = 1.0 / (1.0 / r - 1.0 / n as f64);
    let flat = flat_space(n, 1.0)?;
    let mut rows = Vec::new();
    let mut per_radius = Vec::new();
    let mut hom: Vec<Vec<f64>> = vec![Vec::new(); suite.len()];
    for &radius in radii {
        let region = Region::Ball(BallRegion::coordinate(vec![0.0; n], radius));
        let mut best: f64 = 0.0;
        for (i, u) in suite.iter().enumerate() {
            if u.degree() != 0 {
                return Err(Error::InvalidDegree("the scaling check takes functions".into()));
            }
            let lhs = jet_norms(&flat, u, &region, 0, t, &Weight::Unit, num)?[0];
            let jr = jet_norms(&flat, u, &region, 1, r, &Weight::Unit, num)?;
            let row = Row::new(format!("R={radius}/u{i}"), lhs, (jr[0] + jr[1]) / radius);
            let ur = FormField::scalar(Affine::rescaled(u.coeffs()[0].clone(), radius));
            let ht = jet_norms(&flat, &ur, &region, 0, t, &Weight::Unit, num)?[0];
            let hg = jet_norms(&flat, &ur, &region, 1, r, &Weight::Unit, num)?[1];
            let homogeneous = if hg > 0.0 { ht / hg } else { 0.0 };
            if !row.vacuous {
                best = best.max(row.ratio);
            }
            if homogeneous > 0.0 {
                hom[i].push(homogeneous);
            }
            rows.push(row.with("radius", radius).with("homogeneous_constant", homogeneous));
        }
        per_radius.push(best);
    }
    let mut summary = Summary::from_rows(&rows);
    let radius_spread = spread(&per_radius);
    let drift = hom
        .iter()
        .filter(|h| !h.is_empty())
        .map(|h| spread(h) - 1.0)
        .fold(0.0, f64::max);
    summary
        .threshold("max_spread", SCALING_SPREAD)
        .threshold("homogeneous_tol", HOMOGENEOUS_TOL)
        .note("constant_per_radius", &per_radius)
        .note("spread", radius_spread)
        .note("homogeneous_drift", drift)
        .assert("spread", radius_spread <= SCALING_SPREAD)
        .assert("homogeneous", drift <= HOMOGENEOUS_TOL);
    let params = ScalingParams { n, r, t, radii: radii.to_vec(), suite_size: suite.len() };
    Ok(ExperimentReport::new("euclidean_scaling", json!({"kind": "euclidean", "n": n}), params, rows, summary))
}

/// max/min of the positive entries (1 when fewer than one entry).
pub fn spread(values: &[f64]) -> f64 {
    let live: Vec<f64> = values.iter().copied().filter(|v| *v > 0.0 && v.is_finite()).collect();
    if live.is_empty() {
        return 1.0;
    }
    let hi = live.iter().copied().fold(0.0, f64::max);
    let lo = live.iter().copied().fold(f64::INFINITY, f64::min);
    hi / lo
}
