//! Sobolev embeddings on admissible balls and the weighted global embedding.

use serde::Serialize;

use crate::admissible::{AdmissibleBall, RadiusField};
use crate::error::{Error, Result};
use crate::geometry::FormField;
use crate::manifold::ChartedManifold;
use crate::norms::{jet_norms, Numerics, SobolevParams, Weight};
use crate::region::{BoxRegion, Region};

use super::report::{ExperimentReport, Row, Summary};
use super::scaling::spread;
use super::suites::map_to_ball;

/// Allowed spread of the normalized ball constants across balls.
pub const BALL_SPREAD: f64 = 4.0;
/// Allowed ratio between the max constants of two suites.
pub const SUITE_STABILITY: f64 = 5.0;

#[derive(Clone, Debug, Serialize)]
struct BallParams {
    r: f64,
    s: f64,
    class: u8,
    epsilon: f64,
    centers: Vec<Vec<f64>>,
    radii: Vec<f64>,
    suite_size: usize,
}

/// On each admissible ball B = B(x, R), every unit-ball suite member is
/// transplanted to B and ‖u‖_{L^s(B)} is compared with ‖u‖_{W^{1,r}(B)},
/// 1/s = 1/r - 1/n. Rows report the normalized constant LHS/RHS and
/// C = R²·LHS/RHS; the normalized constants must agree across balls within
/// a factor [`BALL_SPREAD`].
pub fn check_ball_embedding(m: &ChartedManifold, balls: &[AdmissibleBall], r: f64, suite: &[FormField], num: &Numerics) -> Result<ExperimentReport> {
    let n = m.n() as f64;
    let inv_s = 1.0 / r - 1.0 / n;
    if !(r >= 1.0) || !(inv_s > 0.0) {
        return Err(Error::InvalidParams(format!("need 1 ≤ r < n, got r = {r}")));
    }
    let s = 1.0 / inv_s;
    let mut rows = Vec::new();
    let mut per_ball = Vec::new();
    for (b, ball) in balls.iter().enumerate() {
        let region = Region::Ball(ball.region());
        let mut best: f64 = 0.0;
        for (i, v) in suite.iter().enumerate() {
            let u = map_to_ball(v, ball)?;
            let lhs = jet_norms(m, &u, &region, 0, s, &Weight::Unit, num)?[0];
            let j = jet_norms(m, &u, &region, 1, r, &Weight::Unit, num)?;
            let row = Row::new(format!("ball{b}/u{i}"), lhs, j[0] + j[1]);
            if !row.vacuous {
                best = best.max(row.ratio);
            }
            let c = ball.radius * ball.radius * row.ratio;
            rows.push(row.with("radius", ball.radius).with("constant", c));
        }
        per_ball.push(best);
    }
    let mut summary = Summary::from_rows(&rows);
    let sp = spread(&per_ball);
    let finite = rows.iter().all(|r| r.ratio.is_finite());
    summary
        .threshold("max_spread", BALL_SPREAD)
        .note("constant_per_ball", &per_ball)
        .note("spread", sp)
        .assert("finite", finite)
        .assert("spread", sp <= BALL_SPREAD);
    let params = BallParams {
        r,
        s,
        class: balls.first().map(|b| b.class).unwrap_or(0),
        epsilon: balls.first().map(|b| b.epsilon).unwrap_or(0.0),
        centers: balls.iter().map(|b| b.center.coords.clone()).collect(),
        radii: balls.iter().map(|b| b.radius).collect(),
        suite_size: suite.len(),
    };
    Ok(ExperimentReport::new("ball_embedding", m.spec_json(), params, rows, summary))
}

/// Both sides of the weighted embedding for one field.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EmbeddingSides {
    /// ‖u‖_{W^{k,s}(M, R^ν)}.
    pub lhs: f64,
    /// ‖u‖_{W^{m,r}(M, R^γ)}.
    pub rhs: f64,
    /// ‖u‖_{W^{k,s}(M)} (ν = 0 ablation).
    pub lhs_unweighted: f64,
    /// ‖u‖_{W^{m,r}(M)} (γ = 0).
    pub rhs_unweighted: f64,
}

fn window_region(m: &ChartedManifold) -> Region {
    let w = m.window();
    Region::Box(BoxRegion::new(w.lo(), w.hi()))
}

pub fn embedding_sides(m: &ChartedManifold, p: &SobolevParams, field: &RadiusField, u: &FormField, num: &Numerics) -> Result<EmbeddingSides> {
    let region = window_region(m);
    let lhs: f64 = jet_norms(m, u, &region, p.k, p.s, &Weight::power(p.nu, field), num)?.iter().sum();
    let rhs: f64 = jet_norms(m, u, &region, p.m, p.r, &Weight::power(p.gamma, field), num)?.iter().sum();
    let lhs_unweighted: f64 = jet_norms(m, u, &region, p.k, p.s, &Weight::Unit, num)?.iter().sum();
    let rhs_unweighted = if p.gamma == 0.0 {
        rhs
    } else {
        jet_norms(m, u, &region, p.m, p.r, &Weight::Unit, num)?.iter().sum()
    };
    Ok(EmbeddingSides { lhs, rhs, lhs_unweighted, rhs_unweighted })
}

#[derive(Clone, Debug, Serialize)]
struct EmbeddingParams {
    #[serde(flatten)]
    sobolev: SobolevParams,
    class: u8,
    epsilon: f64,
    suites: Vec<(String, usize)>,
}

/// Evaluates ‖u‖_{W^{k,s}(M,w′)} against ‖u‖_{W^{m,r}(M,w)} (w = R^γ,
/// w′ = R^ν) over named suites. Each row also carries the ν = 0 ablation
/// ratio. Asserts that all ratios are finite and that the suite maxima agree
/// within [`SUITE_STABILITY`].
pub fn run_embedding_experiment(
    m: &ChartedManifold,
    params: &SobolevParams,
    field: &RadiusField,
    suites: &[(String, Vec<FormField>)],
    num: &Numerics,
) -> Result<ExperimentReport> {
    if params.n != m.n() {
        return Err(Error::InvalidParams(format!("params for n = {} on a {}-manifold", params.n, m.n())));
    }
    let mut rows = Vec::new();
    let mut maxima = Vec::new();
    for (name, suite) in suites {
        let mut best: f64 = 0.0;
        for (i, u) in suite.iter().enumerate() {
            let sides = embedding_sides(m, params, field, u, num)?;
            let row = Row::new(format!("{name}/u{i}"), sides.lhs, sides.rhs);
            if !row.vacuous {
                best = best.max(row.ratio);
            }
            let ablation = if sides.rhs == 0.0 { 0.0 } else { sides.lhs_unweighted / sides.rhs };
            rows.push(row.with("ratio_unweighted_lhs", ablation));
        }
        maxima.push(best);
    }
    let mut summary = Summary::from_rows(&rows);
    let finite = rows.iter().all(|r| r.ratio.is_finite());
    let stability = spread(&maxima);
    summary
        .threshold("suite_stability", SUITE_STABILITY)
        .note("suite_max_ratio", &maxima)
        .note("stability", stability)
        .assert("finite", finite)
        .assert("stability", stability <= SUITE_STABILITY);
    let p = EmbeddingParams {
        sobolev: *params,
        class: field.class,
        epsilon: field.epsilon,
        suites: suites.iter().map(|(n, s)| (n.clone(), s.len())).collect(),
    };
    Ok(ExperimentReport::new("embedding", m.spec_json(), p, rows, summary))
}

/// Weighted and ν = 0 ratios for bumps placed at increasing depth.
#[derive(Clone, Debug, Serialize)]
pub struct DepthSeries {
    pub depths: Vec<f64>,
    pub weighted: Vec<f64>,
    pub unweighted: Vec<f64>,
    pub unweighted_increasing: bool,
}

pub fn depth_series(
    m: &ChartedManifold,
    params: &SobolevParams,
    field: &RadiusField,
    fields: &[(f64, FormField)],
    num: &Numerics,
) -> Result<DepthSeries> {
    let mut out = DepthSeries { depths: vec![], weighted: vec![], unweighted: vec![], unweighted_increasing: true };
    for (depth, u) in fields {
        let s = embedding_sides(m, params, field, u, num)?;
        out.depths.push(*depth);
        out.weighted.push(s.lhs / s.rhs);
        out.unweighted.push(s.lhs_unweighted / s.rhs_unweighted);
    }
    out.unweighted_increasing = out.unweighted.windows(2).all(|w| w[1] > w[0]);
    Ok(out)
}
