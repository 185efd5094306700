//! Curvature diagnostics on sample points of the window.

use serde::Serialize;

use crate::admissible::{random_window_points, AdmissibleBall, Sampler};
use crate::error::Result;
use crate::geometry::curvature::sectional_from;
use crate::geometry::{ricci_trace_residual, cmt_check, normalized_ricci_eigenvalues, riemann_at};
use crate::manifold::{BuiltinKind, ChartedManifold, Point};

use super::report::{ExperimentReport, Row, Summary};

/// Tolerance on curved builtins; flat space uses [`FLAT_TOL`].
pub const CURVATURE_TOL: f64 = 1e-3;
pub const FLAT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
struct CurvatureParams {
    points: usize,
    seed: u64,
    epsilon: f64,
    expected_sectional: Option<f64>,
    tolerance: f64,
}

/// Sectional curvature of every coordinate plane against the builtin's
/// constant curvature, the Ricci–sectional identity, and the Christoffel
/// bound on a (1, ε)-admissible ball at every sample point.
pub fn run_curvature(m: &ChartedManifold, points: usize, seed: u64, epsilon: f64, sampler: &Sampler) -> Result<ExperimentReport> {
    let n = m.n();
    let expected = m.oracle("sectional_curvature", 0.0);
    let tol = if m.kind() == Some(BuiltinKind::Euclidean) { FLAT_TOL } else { CURVATURE_TOL };
    let mut rows = Vec::new();
    let (mut worst_trace, mut worst_ricci) = (0.0f64, 0.0f64);
    let mut cmt_ratio: f64 = 0.0;
    let mut cmt_violations = 0usize;
    let mut cmt_vacuous = 0usize;
    for (i, x) in random_window_points(m.window(), points, seed).into_iter().enumerate() {
        let p = Point::new(x);
        let r = riemann_at(m, &p)?;
        for a in 0..n {
            let mut e = vec![0.0; n];
            e[a] = 1.0;
            worst_trace = worst_trace.max(ricci_trace_residual(&r, &e)?);
            for b in a + 1..n {
                let mut f = vec![0.0; n];
                f[b] = 1.0;
                let k = sectional_from(&r, &e, &f)?;
                if let Some(k0) = expected {
                    rows.push(Row::new(format!("x{i}/plane{a}{b}"), (k - k0).abs(), tol).with("sectional", k));
                }
            }
        }
        if let Some(k0) = expected {
            for l in normalized_ricci_eigenvalues(&r) {
                worst_ricci = worst_ricci.max((l - k0).abs());
            }
        }
        let ball = AdmissibleBall::at_admissible_radius(m, p, 1, epsilon, sampler)?;
        let c = cmt_check(m, &ball, sampler)?;
        if let Some(v) = c.ratio {
            cmt_ratio = cmt_ratio.max(v);
        }
        cmt_violations += c.violation as usize;
        cmt_vacuous += c.vacuous as usize;
    }
    let mut summary = Summary::from_rows(&rows);
    let sectional_ok = rows.iter().all(|r| r.lhs <= tol);
    summary
        .threshold("sectional_tol", tol)
        .threshold("ricci_tol", tol)
        .threshold("cmt_bound", 1.5 * (1.0 + epsilon))
        .note("ricci_trace_residual", worst_trace)
        .note("ricci_deviation", worst_ricci)
        .note("cmt_max_ratio", cmt_ratio)
        .note("cmt_vacuous_points", cmt_vacuous)
        .assert("sectional", sectional_ok)
        .assert("ricci_trace", worst_trace <= tol)
        .assert("ricci", worst_ricci <= tol)
        .assert("cmt", cmt_violations == 0);
    let params = CurvatureParams { points, seed, epsilon, expected_sectional: expected, tolerance: tol };
    Ok(ExperimentReport::new("curvature", m.spec_json(), params, rows, summary))
}
