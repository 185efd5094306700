//! The pointwise Kato inequality |∇|∇^m ω|| ≤ |∇^{m+1} ω|.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{covariant_jets, FormField};
use crate::linalg::{quad_form, spd_inverse};
use crate::manifold::ChartedManifold;
use crate::region::BoxRegion;

use super::report::{ExperimentReport, Row, Summary};

pub const KATO_FD_STEP: f64 = 1e-4;
/// Points where |∇^m ω| is below this are skipped.
pub const KATO_ZERO: f64 = 1e-8;
/// Tolerance relative to the field's largest |∇^{m+1} ω|.
pub const KATO_TOL: f64 = 1e-3;
pub const KATO_MAX_RATE: f64 = 1e-3;

#[derive(Clone, Debug, Serialize)]
struct KatoParams {
    order: usize,
    degree: usize,
    samples_per_field: usize,
    seed: u64,
    fd_step: f64,
}

fn modulus(m: &ChartedManifold, w: &FormField, x: &[f64], order: usize) -> Result<f64> {
    let chart = m.chart();
    let g_inv = spd_inverse(&chart.metric(x)).ok_or_else(|| Error::NotPositiveDefinite(x.to_vec()))?;
    Ok(covariant_jets(chart, w, x, order)?[order].norm(&g_inv))
}

/// Samples points uniformly in each field's support (within the window) and
/// compares |∇|∇^m ω||, by central differences, with |∇^{m+1} ω|.
pub fn check_kato(m: &ChartedManifold, suite: &[FormField], order: usize, samples: usize, seed: u64) -> Result<ExperimentReport> {
    if order > 1 {
        return Err(Error::Unsupported(format!("Kato check for m = {order}")));
    }
    let w = m.window();
    let window = BoxRegion::new(w.lo(), w.hi());
    let chart = m.chart();
    let n = m.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let (mut checked, mut violations) = (0usize, 0usize);
    for (i, om) in suite.iter().enumerate() {
        let support = om.support().and_then(|s| s.intersect(&window)).unwrap_or_else(|| window.clone());
        let pts: Vec<Vec<f64>> =
            (0..samples).map(|_| (0..n).map(|a| rng.random_range(support.lo[a]..=support.hi[a])).collect()).collect();
        let mut data = Vec::with_capacity(pts.len());
        for x in &pts {
            let f = modulus(m, om, x, order)?;
            if f < KATO_ZERO {
                continue;
            }
            let mut df = vec![0.0; n];
            for (k, v) in df.iter_mut().enumerate() {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[k] += KATO_FD_STEP;
                xm[k] -= KATO_FD_STEP;
                *v = (modulus(m, om, &xp, order)? - modulus(m, om, &xm, order)?) / (2.0 * KATO_FD_STEP);
            }
            let g_inv = spd_inverse(&chart.metric(x)).ok_or_else(|| Error::NotPositiveDefinite(x.clone()))?;
            let lhs = quad_form(&g_inv, &df, &df).max(0.0).sqrt();
            let rhs = modulus(m, om, x, order + 1)?;
            data.push((lhs, rhs));
        }
        let scale = data.iter().map(|d| d.1).fold(0.0, f64::max);
        let tol = KATO_TOL * scale;
        let bad = data.iter().filter(|(l, r)| *l > r + tol).count();
        let worst = data
            .iter()
            .copied()
            .max_by(|a, b| (a.0 / (a.1 + tol)).total_cmp(&(b.0 / (b.1 + tol))))
            .unwrap_or((0.0, 0.0));
        checked += data.len();
        violations += bad;
        rows.push(
            Row::new(format!("w{i}"), worst.0, worst.1 + tol)
                .with("violations", bad as f64)
                .with("checked", data.len() as f64)
                .with("tol", tol),
        );
    }
    let rate = if checked == 0 { 0.0 } else { violations as f64 / checked as f64 };
    let mut summary = Summary::from_rows(&rows);
    summary
        .threshold("max_violation_rate", KATO_MAX_RATE)
        .threshold("relative_tol", KATO_TOL)
        .threshold("zero_skip", KATO_ZERO)
        .note("checked", checked)
        .note("violating_points", violations)
        .note("violation_rate", rate)
        .assert("rate", rate < KATO_MAX_RATE);
    let params = KatoParams {
        order,
        degree: suite.first().map(|s| s.degree()).unwrap_or(0),
        samples_per_field: samples,
        seed,
        fd_step: KATO_FD_STEP,
    };
    Ok(ExperimentReport::new("kato", m.spec_json(), params, rows, summary))
}
