use serde::Serialize;

use crate::admissible::{AdmissibleBall, Sampler};
use crate::error::{Error, Result};
use crate::geometry::Christoffel;
use crate::linalg::spd_inverse;
use crate::manifold::ChartedManifold;

/// Below this the metric derivative sum counts as zero.
const FLAT_THRESHOLD: f64 = 1e-12;

/// Christoffel symbols against first metric derivatives in the normalized
/// chart of an admissible ball.
#[derive(Clone, Debug, Serialize)]
pub struct CmtReport {
    /// max over samples of max_kij |Γ^k_ij(x)| / Σ_β max_ij |∂^β g_ij(x)|.
    pub ratio: Option<f64>,
    /// (3/2)(1+ε).
    pub bound: f64,
    pub vacuous: bool,
    pub violation: bool,
    pub max_gamma: f64,
    /// sup over samples of Σ_β max_ij |∂^β g_ij|.
    pub derivative_sum: f64,
    pub samples: usize,
}

pub fn cmt_check(m: &ChartedManifold, ball: &AdmissibleBall, samples: &Sampler) -> Result<CmtReport> {
    if ball.class != 1 {
        return Err(Error::InvalidParams("the CMT check needs a (1, ε)-admissible ball".into()));
    }
    let chart = &m.charts()[ball.center.chart];
    let norm = &ball.normalizer;
    let bound = 1.5 * (1.0 + ball.epsilon);
    let mut ratio: Option<f64> = None;
    let mut max_gamma = 0.0f64;
    let mut derivative_sum = 0.0f64;
    for u in &samples.points {
        let z: Vec<f64> = u.iter().map(|v| v * ball.radius).collect();
        let g = norm.metric(chart, &z);
        let g_inv = spd_inverse(&g).ok_or_else(|| Error::NotPositiveDefinite(norm.to_chart(&z)))?;
        let dg = norm.metric_partials(chart, &z)?;
        let gamma = Christoffel::from_metric(&g_inv, &dg).max_abs();
        let denom: f64 = dg.iter().map(|d| d.amax()).sum();
        max_gamma = max_gamma.max(gamma);
        derivative_sum = derivative_sum.max(denom);
        if denom > FLAT_THRESHOLD {
            let r = gamma / denom;
            ratio = Some(ratio.map_or(r, |q| q.max(r)));
        }
    }
    let vacuous = ratio.is_none();
    Ok(CmtReport {
        violation: ratio.is_some_and(|r| r > bound),
        ratio,
        bound,
        vacuous,
        max_gamma,
        derivative_sum,
        samples: samples.len(),
    })
}
