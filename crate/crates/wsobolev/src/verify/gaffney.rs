//! Local and global Gaffney inequalities for p-forms.

use serde::Serialize;

use crate::admissible::{AdmissibleBall, RadiusField};
use crate::error::Result;
use crate::geometry::{codifferential, exterior_derivative, FormField, HodgeFlavor};
use crate::manifold::ChartedManifold;
use crate::norms::{jet_norms, lp_norm, Numerics, Weight};
use crate::region::{BallRegion, BoxRegion, Region};

use super::report::{ExperimentReport, Row, Summary};
use super::scaling::spread;
use super::suites::map_to_ball;

/// Largest C and c tried by the feasibility search.
pub const GRID_MAX: u32 = 64;
/// Allowed max/min spread of the global constants.
pub const GLOBAL_SPREAD: f64 = 10.0;

/// ‖dω‖ and ‖d*ω‖ (metric star) in L^r over a region; 0 when the degree
/// makes the operator vanish.
pub fn d_and_delta(m: &ChartedManifold, w: &FormField, region: &Region, r: f64, weight: &Weight, num: &Numerics) -> Result<(f64, f64)> {
    let (n, p) = (w.n(), w.degree());
    let d = if p < n { lp_norm(m, &exterior_derivative(w)?, region, r, weight, num)? } else { 0.0 };
    let delta = if p >= 1 { lp_norm(m, &codifferential(m, w, HodgeFlavor::Metric)?, region, r, weight, num)? } else { 0.0 };
    Ok((d, delta))
}

/// The four norms of the local inequality on one ball.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LocalTerms {
    /// ‖∇ω‖_{L^r(B¹)}, B¹ the concentric half-radius ball.
    pub grad_half: f64,
    pub d: f64,
    pub delta: f64,
    /// ‖ω‖_{L^r(B)}.
    pub zero: f64,
    pub radius: f64,
}

impl LocalTerms {
    pub fn holds(&self, c_big: f64, c_small: f64) -> bool {
        let rhs = c_big * (self.d + self.delta) + c_small * self.zero / self.radius;
        self.grad_half <= rhs * (1.0 + 1e-12)
    }
}

pub fn local_terms(m: &ChartedManifold, ball: &AdmissibleBall, w: &FormField, r: f64, num: &Numerics) -> Result<LocalTerms> {
    let full = Region::Ball(ball.region());
    let half = Region::Ball(BallRegion { radius: ball.radius / 2.0, ..ball.region() });
    let grad_half = jet_norms(m, w, &half, 1, r, &Weight::Unit, num)?[1];
    let zero = lp_norm(m, w, &full, r, &Weight::Unit, num)?;
    let (d, delta) = d_and_delta(m, w, &full, r, &Weight::Unit, num)?;
    Ok(LocalTerms { grad_half, d, delta, zero, radius: ball.radius })
}

/// Smallest (C, c) ∈ {1..64}² (by C + c, then C) for which every row holds.
pub fn feasible_pair(terms: &[LocalTerms]) -> Option<(u32, u32)> {
    let mut best: Option<(u32, u32)> = None;
    for total in 2..=2 * GRID_MAX {
        for c_big in 1..=GRID_MAX.min(total - 1) {
            let c_small = total - c_big;
            if c_small > GRID_MAX {
                continue;
            }
            if terms.iter().all(|t| t.holds(c_big as f64, c_small as f64)) {
                best = Some((c_big, c_small));
                break;
            }
        }
        if best.is_some() {
            break;
        }
    }
    best
}

#[derive(Clone, Debug, Serialize)]
struct LocalParams {
    r: f64,
    degree: usize,
    epsilon: f64,
    centers: Vec<Vec<f64>>,
    radii: Vec<f64>,
    suite_size: usize,
}

/// Transplants the unit-ball suite to every ball, evaluates
/// ‖∇ω‖_{L^r(B¹)} against (‖dω‖ + ‖d*ω‖)_{L^r(B)} and R⁻¹‖ω‖_{L^r(B)}, and
/// searches the smallest feasible (C, c).
pub fn run_gaffney_local(m: &ChartedManifold, balls: &[AdmissibleBall], suite: &[FormField], r: f64, num: &Numerics) -> Result<ExperimentReport> {
    let mut rows = Vec::new();
    let mut terms = Vec::new();
    for (b, ball) in balls.iter().enumerate() {
        for (i, v) in suite.iter().enumerate() {
            let w = map_to_ball(v, ball)?;
            let t = local_terms(m, ball, &w, r, num)?;
            rows.push(
                Row::new(format!("ball{b}/w{i}"), t.grad_half, t.d + t.delta + t.zero / t.radius)
                    .with("d", t.d)
                    .with("delta", t.delta)
                    .with("zero", t.zero)
                    .with("radius", t.radius),
            );
            terms.push(t);
        }
    }
    let pair = feasible_pair(&terms);
    let mut summary = Summary::from_rows(&rows);
    summary
        .threshold("grid_max", GRID_MAX as f64)
        .note("C", pair.map(|p| p.0))
        .note("c", pair.map(|p| p.1))
        .assert("feasible", pair.is_some());
    let params = LocalParams {
        r,
        degree: suite.first().map(|s| s.degree()).unwrap_or(0),
        epsilon: balls.first().map(|b| b.epsilon).unwrap_or(0.0),
        centers: balls.iter().map(|b| b.center.coords.clone()).collect(),
        radii: balls.iter().map(|b| b.radius).collect(),
        suite_size: suite.len(),
    };
    Ok(ExperimentReport::new("gaffney_local", m.spec_json(), params, rows, summary))
}

#[derive(Clone, Debug, Serialize)]
struct GlobalParams {
    r: f64,
    s: Option<f64>,
    degree: usize,
    class: u8,
    epsilon: f64,
    suite_size: usize,
}

/// ‖ω‖_{W^{1,r}} against ‖dω‖ + ‖d*ω‖ + ‖ω‖_{L^r(M, R^{-r})}; rows also carry
/// the variant with ‖ω‖_{L^s(M, R^{2s})} on the left (1/s = 1/r - 1/n) and
/// the unweighted right-hand side.
pub fn run_gaffney_global(m: &ChartedManifold, suite: &[FormField], r: f64, field: &RadiusField, num: &Numerics) -> Result<ExperimentReport> {
    let n = m.n() as f64;
    let w = m.window();
    let window = Region::Box(BoxRegion::new(w.lo(), w.hi()));
    let inv_s = 1.0 / r - 1.0 / n;
    let s = (inv_s > 0.0).then(|| 1.0 / inv_s);
    let mut rows = Vec::new();
    for (i, om) in suite.iter().enumerate() {
        let j = jet_norms(m, om, &window, 1, r, &Weight::Unit, num)?;
        let (d, delta) = d_and_delta(m, om, &window, r, &Weight::Unit, num)?;
        let weighted = lp_norm(m, om, &window, r, &Weight::power(-r, field), num)?;
        let rhs = d + delta + weighted;
        let mut row = Row::new(format!("w{i}"), j[0] + j[1], rhs).with("d", d).with("delta", delta).with("weighted_zero", weighted);
        let unweighted = d + delta + j[0];
        row = row.with("ratio_unweighted", if unweighted > 0.0 { (j[0] + j[1]) / unweighted } else { 0.0 });
        if let Some(s) = s {
            let cor = lp_norm(m, om, &window, s, &Weight::power(2.0 * s, field), num)?;
            row = row.with("embedded_lhs", cor).with("embedded_ratio", if rhs > 0.0 { cor / rhs } else { 0.0 });
        }
        rows.push(row);
    }
    let ratios: Vec<f64> = rows.iter().filter(|r| !r.vacuous).map(|r| r.ratio).collect();
    let sp = spread(&ratios);
    let mut summary = Summary::from_rows(&rows);
    summary
        .threshold("max_spread", GLOBAL_SPREAD)
        .note("spread", sp)
        .assert("finite", ratios.iter().all(|r| r.is_finite()))
        .assert("spread", sp <= GLOBAL_SPREAD);
    let params = GlobalParams {
        r,
        s,
        degree: suite.first().map(|s| s.degree()).unwrap_or(0),
        class: field.class,
        epsilon: field.epsilon,
        suite_size: suite.len(),
    };
    Ok(ExperimentReport::new("gaffney_global", m.spec_json(), params, rows, summary))
}
