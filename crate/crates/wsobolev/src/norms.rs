//! Quadrature-based (weighted) L^τ and W^{k,r} norms of functions and forms,
//! and the local/global comparison identities between them.

use std::sync::Arc;

use serde::Serialize;

use crate::admissible::{AdmissibleBall, RadiusField};
use crate::covering::Covering;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fields::{Affine, Combination, Scalar};
use crate::geometry::{covariant_jets, FormField, FormSection};
use crate::linalg::{combinations, minor, spd_inverse, unit_ball_volume, Mat};
use crate::manifold::{builtin, sqrt_det, BuiltinKind, Chart, ChartedManifold};
use crate::quadrature::QuadratureGrid;
use crate::region::{BallRegion, BoxRegion, Region};

/// Quadrature nodes are processed in fixed chunks whose partial sums are
/// reduced in order, so results do not depend on the execution policy.
const CHUNK: usize = 256;

/// Quadrature resolution and execution policy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Numerics {
    /// Gauss–Legendre nodes per axis on boxes.
    pub window_nodes: usize,
    /// Radial nodes (and sphere resolution) on balls.
    pub ball_nodes: usize,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics { window_nodes: 48, ball_nodes: 24, exec: Exec::default() }
    }
}

impl Numerics {
    /// `nodes` on boxes and `nodes / 2` on balls.
    pub fn with_nodes(nodes: usize, exec: Exec) -> Self {
        Numerics { window_nodes: nodes.max(2), ball_nodes: (nodes / 2).max(2), exec }
    }

    pub fn doubled(self) -> Self {
        Numerics { window_nodes: 2 * self.window_nodes, ball_nodes: 2 * self.ball_nodes, exec: self.exec }
    }

    pub fn grid(&self, region: &Region) -> QuadratureGrid {
        match region {
            Region::Box(b) => QuadratureGrid::boxed(b, self.window_nodes),
            Region::Ball(b) => QuadratureGrid::ball(b, self.ball_nodes),
        }
    }
}

/// w(x) = R_ε(x)^γ, or w ≡ 1.
#[derive(Clone, Copy, Debug)]
pub enum Weight<'a> {
    Unit,
    Radius { gamma: f64, field: &'a RadiusField },
}

impl<'a> Weight<'a> {
    pub fn power(gamma: f64, field: &'a RadiusField) -> Self {
        Weight::Radius { gamma, field }
    }

    pub fn at(&self, x: &[f64]) -> Result<f64> {
        match self {
            Weight::Unit => Ok(1.0),
            Weight::Radius { gamma, field } => field.weight(x, *gamma),
        }
    }
}

/// Per-node data handed to integrands.
pub struct NodeCtx<'c> {
    /// Node in chart coordinates (not wrapped, so fields see the region's
    /// own parametrization).
    pub x: &'c [f64],
    pub g: Mat,
    pub g_inv: Mat,
    /// quadrature weight · w(x) · √det g.
    pub dv: f64,
    pub chart: &'c Chart,
}

/// Σ_nodes dv · f(node) for `count` integrands at once.
pub fn integrate<F>(
    m: &ChartedManifold,
    region: &Region,
    weight: &Weight,
    num: &Numerics,
    count: usize,
    f: F,
) -> Result<Vec<f64>>
where
    F: Fn(&NodeCtx, &mut [f64]) -> Result<()> + Sync + Send,
{
    let chart = m.chart();
    let q = num.grid(region);
    let chunks = q.len().div_ceil(CHUNK);
    let partials = num.exec.map_range(chunks, |c| -> Result<Vec<f64>> {
        let mut acc = vec![0.0; count];
        let mut vals = vec![0.0; count];
        for i in c * CHUNK..((c + 1) * CHUNK).min(q.len()) {
            let x = q.node(i);
            let y = chart.wrap(x);
            if !chart.contains(&y) {
                return Err(Error::OutsideDomain(y));
            }
            let g = chart.metric(&y);
            let vol = sqrt_det(&g).ok_or_else(|| Error::NotPositiveDefinite(y.clone()))?;
            let w = weight.at(&y)?;
            if w < 0.0 || !w.is_finite() {
                return Err(Error::InvalidParams(format!("weight {w} at {y:?}")));
            }
            let g_inv = spd_inverse(&g).ok_or_else(|| Error::NotPositiveDefinite(y.clone()))?;
            let ctx = NodeCtx { x, g, g_inv, dv: q.weights[i] * w * vol, chart };
            vals.iter_mut().for_each(|v| *v = 0.0);
            f(&ctx, &mut vals)?;
            for (a, v) in acc.iter_mut().zip(&vals) {
                *a += ctx.dv * v;
            }
        }
        Ok(acc)
    });
    let mut total = vec![0.0; count];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p?) {
            *t += v;
        }
    }
    Ok(total)
}

fn restricted(region: &Region, support: Option<BoxRegion>) -> Option<Region> {
    region.restrict(support.as_ref())
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 1.0 && tau.is_finite()) {
        return Err(Error::InvalidParams(format!("exponent must be ≥ 1, got {tau}")));
    }
    Ok(())
}

/// (∫_region |ω|^τ w dv)^{1/τ}.
pub fn lp_norm(m: &ChartedManifold, field: &dyn FormSection, region: &Region, tau: f64, weight: &Weight, num: &Numerics) -> Result<f64> {
    check_tau(tau)?;
    let Some(region) = restricted(region, field.support()) else { return Ok(0.0) };
    let s = integrate(m, &region, weight, num, 1, |c, out| {
        out[0] = field.eval(c.x).norm(&c.g_inv).powf(tau);
        Ok(())
    })?;
    Ok(s[0].powf(1.0 / tau))
}

/// L^τ norm of a scalar function.
pub fn lp_norm_scalar(m: &ChartedManifold, f: &Scalar, region: &Region, tau: f64, weight: &Weight, num: &Numerics) -> Result<f64> {
    lp_norm(m, &FormField::scalar(f.clone()), region, tau, weight, num)
}

/// Riemannian volume of a region (weighted if requested).
pub fn volume(m: &ChartedManifold, region: &Region, weight: &Weight, num: &Numerics) -> Result<f64> {
    Ok(integrate(m, region, weight, num, 1, |_, out| {
        out[0] = 1.0;
        Ok(())
    })?[0])
}

/// [‖∇^j ω‖_{L^r(region, w)}] for j = 0..=k.
pub fn jet_norms(m: &ChartedManifold, field: &FormField, region: &Region, k: usize, r: f64, weight: &Weight, num: &Numerics) -> Result<Vec<f64>> {
    check_tau(r)?;
    if k > 2 {
        return Err(Error::Unsupported(format!("Sobolev order {k} (at most 2)")));
    }
    let Some(region) = restricted(region, field.support().cloned()) else { return Ok(vec![0.0; k + 1]) };
    let s = integrate(m, &region, weight, num, k + 1, |c, out| {
        if k == 0 {
            out[0] = field.value(c.x).norm(&c.g_inv).powf(r);
            return Ok(());
        }
        for (j, t) in covariant_jets(c.chart, field, c.x, k)?.iter().enumerate() {
            out[j] = t.norm(&c.g_inv).powf(r);
        }
        Ok(())
    })?;
    Ok(s.iter().map(|v| v.powf(1.0 / r)).collect())
}

/// Σ_{j≤k} ‖∇^j ω‖_{L^r(region, w)}.
pub fn sobolev_norm(m: &ChartedManifold, field: &FormField, region: &Region, k: usize, r: f64, weight: &Weight, num: &Numerics) -> Result<f64> {
    Ok(jet_norms(m, field, region, k, r, weight, num)?.iter().sum())
}

/// Exponents of the embedding W^{m,r}(M, w) ⊂ W^{k,s}(M, w′), w = R^γ, w′ = R^ν.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SobolevParams {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub r: f64,
    pub s: f64,
    pub gamma: f64,
    pub nu: f64,
}

impl SobolevParams {
    /// 1/s = 1/r - (m-k)/n must be positive; ν = s(2 + γ/r).
    pub fn new(n: usize, m: usize, k: usize, r: f64, gamma: f64) -> Result<Self> {
        if !(r >= 1.0) || m < k || n == 0 {
            return Err(Error::InvalidParams(format!("need r ≥ 1 and m ≥ k, got r = {r}, m = {m}, k = {k}")));
        }
        let inv_s = 1.0 / r - (m - k) as f64 / n as f64;
        if !(inv_s > 0.0) {
            return Err(Error::InvalidParams(format!("1/s = 1/{r} - {}/{n} ≤ 0", m - k)));
        }
        let s = 1.0 / inv_s;
        Ok(SobolevParams { n, m, k, r, s, gamma, nu: s * (2.0 + gamma / r) })
    }
}

/// Pulls ω back through y = x + A⁻¹z (the normalized chart of a ball) to a
/// form on flat ℝⁿ: v_J(z) = Σ_I ω_I(x + A⁻¹z)·det(A⁻¹)_{I,J}.
pub fn pull_back_normalized(field: &FormField, ball: &AdmissibleBall) -> Result<FormField> {
    let (n, p) = (field.n(), field.degree());
    let a_inv = &ball.normalizer.a_inv;
    let offset: Vec<f64> = crate::linalg::mat_vec(&ball.normalizer.a, &ball.center.coords).iter().map(|v| -v).collect();
    let basis = combinations(n, p);
    let composed: Vec<Scalar> =
        field.coeffs().iter().map(|c| Arc::new(Affine::new(c.clone(), offset.clone(), a_inv.clone())) as Scalar).collect();
    let coeffs = basis
        .iter()
        .map(|j| {
            Combination::new(
                n,
                basis.iter().zip(&composed).map(|(i, f)| (minor(a_inv, i, j), f.clone())).collect(),
            )
        })
        .collect();
    FormField::new(n, p, coeffs)
}

/// Flat ℝⁿ with a window around the origin of the given half-width.
pub fn flat_space(n: usize, halfwidth: f64) -> Result<ChartedManifold> {
    builtin(BuiltinKind::Euclidean, n, &[], &vec![0.0; n], &vec![halfwidth; n])
}

/// Norms of ω on an admissible ball against those of its pull-back on flat
/// coordinate balls.
#[derive(Clone, Debug, Serialize)]
pub struct ChartComparison {
    pub radius: f64,
    pub r: f64,
    /// ‖ω‖_{L^r(B(x,R))}, ‖ω‖_{W^{1,r}(B(x,R))}.
    pub manifold_lp: f64,
    pub manifold_w1: f64,
    /// Pull-back norms on B_e(0, R).
    pub flat_lp: f64,
    pub flat_w1: f64,
    /// Pull-back norms on B_e(0, (1-ε)R).
    pub inner_lp: f64,
    pub inner_w1: f64,
    /// manifold / flat on the same ball.
    pub ratio_lp: f64,
    pub ratio_w1: f64,
    /// [(1-ε)^{n/2+1}, (1+ε)^{n/2+1}].
    pub band: (f64, f64),
    /// Smallest C with ‖∇ω‖ ≤ (1 + Cε)(‖∂v‖ + R⁻¹‖v‖) on the ball.
    pub derivative_constant: f64,
    pub within_band: bool,
}

pub fn chart_comparison(m: &ChartedManifold, field: &FormField, ball: &AdmissibleBall, r: f64, num: &Numerics) -> Result<ChartComparison> {
    check_tau(r)?;
    let n = m.n();
    let eps = ball.epsilon;
    let region = Region::Ball(ball.region());
    let mj = jet_norms(m, field, &region, 1, r, &Weight::Unit, num)?;
    let v = pull_back_normalized(field, ball)?;
    let flat = flat_space(n, 2.0 * ball.radius)?;
    let outer = Region::Ball(BallRegion::coordinate(vec![0.0; n], ball.radius));
    let inner = Region::Ball(BallRegion::coordinate(vec![0.0; n], (1.0 - eps) * ball.radius));
    let fj = jet_norms(&flat, &v, &outer, 1, r, &Weight::Unit, num)?;
    let ij = jet_norms(&flat, &v, &inner, 1, r, &Weight::Unit, num)?;
    let ratio = |a: f64, b: f64| if b == 0.0 { if a == 0.0 { 1.0 } else { f64::INFINITY } } else { a / b };
    let band = ((1.0 - eps).powf(n as f64 / 2.0 + 1.0), (1.0 + eps).powf(n as f64 / 2.0 + 1.0));
    let ratio_lp = ratio(mj[0], fj[0]);
    let flat_rhs = fj[1] + fj[0] / ball.radius;
    let derivative_constant = if flat_rhs == 0.0 { 0.0 } else { ((mj[1] / flat_rhs - 1.0) / eps).max(0.0) };
    Ok(ChartComparison {
        radius: ball.radius,
        r,
        manifold_lp: mj[0],
        manifold_w1: mj[0] + mj[1],
        flat_lp: fj[0],
        flat_w1: fj[0] + fj[1],
        inner_lp: ij[0],
        inner_w1: ij[0] + ij[1],
        ratio_lp,
        ratio_w1: ratio(mj[0] + mj[1], fj[0] + fj[1]),
        band,
        derivative_constant,
        within_band: ratio_lp >= band.0 && ratio_lp <= band.1,
    })
}

/// ∫|f|^τ R^μ dv against Σ_x R(x)^μ ∫_{B(x)}|f|^τ dv over the covering balls
/// B(x) = B(x, R_ε(x)/2).
#[derive(Clone, Debug, Serialize)]
pub struct LocalizationReport {
    pub tau: f64,
    pub mu: f64,
    pub global: f64,
    pub covering_sum: f64,
    pub ratio: f64,
    pub balls_used: usize,
    /// [2^{-|μ|}, 2^{|μ|}·T].
    pub band: (f64, f64),
    pub within_band: bool,
}

pub fn localization_check(
    m: &ChartedManifold,
    field: &FormField,
    cover: &Covering,
    tau: f64,
    mu: f64,
    radius: &RadiusField,
    num: &Numerics,
) -> Result<LocalizationReport> {
    check_tau(tau)?;
    let w = m.window();
    let window = Region::Box(BoxRegion::new(w.lo(), w.hi()));
    let global = lp_norm(m, field, &window, tau, &Weight::power(mu, radius), num)?.powf(tau);
    let support = field.support().cloned();
    let mut used = Vec::new();
    for i in 0..cover.len() {
        let ball = cover.normalizers[i].ball_region(cover.radii[i] / 2.0);
        let meets = match &support {
            Some(s) => ball.bounding_box().overlaps(s),
            None => true,
        };
        if meets {
            used.push((i, ball));
        }
    }
    let local = num.exec.try_map(&used, |(i, ball)| -> Result<f64> {
        let inner = Numerics { exec: Exec::Sequential, ..*num };
        let v = lp_norm(m, field, &Region::Ball(ball.clone()), tau, &Weight::Unit, &inner)?.powf(tau);
        Ok(cover.radii[*i].powf(mu) * v)
    })?;
    let covering_sum: f64 = local.iter().sum();
    let t = cover.stats.as_ref().map(|s| s.t).unwrap_or_else(|| crate::covering::overlap_bound(m.n(), cover.epsilon).0);
    let band = (2f64.powf(-mu.abs()), 2f64.powf(mu.abs()) * t);
    let ratio = if global == 0.0 { 1.0 } else { covering_sum / global };
    Ok(LocalizationReport {
        tau,
        mu,
        global,
        covering_sum,
        ratio,
        balls_used: used.len(),
        band,
        within_band: ratio >= band.0 && ratio <= band.1,
    })
}

/// For r ≥ s: Σ a^r ≤ (Σ a^s)^{r/s}, compared as ℓ^r vs ℓ^s norms after
/// scaling by the largest entry (rounding slack 8 machine epsilons).
pub fn lp_sequence_compare(values: &[f64], r: f64, s: f64) -> Result<bool> {
    if !(r >= 1.0 && s >= 1.0) || r < s {
        return Err(Error::InvalidParams(format!("need r ≥ s ≥ 1, got r = {r}, s = {s}")));
    }
    if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParams("sequence entries must be finite and nonnegative".into()));
    }
    let top = values.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(true);
    }
    let lr = values.iter().map(|v| (v / top).powf(r)).sum::<f64>().powf(1.0 / r);
    let ls = values.iter().map(|v| (v / top).powf(s)).sum::<f64>().powf(1.0 / s);
    Ok(lr <= ls * (1.0 + 8.0 * f64::EPSILON))
}

/// ‖ω‖_{L^r(B)} ≤ c R^{n/r - n/s} ‖ω‖_{L^s(B)} on an admissible ball.
#[derive(Clone, Debug, Serialize)]
pub struct HolderReport {
    pub r: f64,
    pub s: f64,
    pub lhs: f64,
    pub rhs_norm: f64,
    /// lhs / (R^{n/r-n/s}·rhs_norm).
    pub constant: Option<f64>,
    /// ((1+ε)^{n/2} ν_n)^{1/r - 1/s}.
    pub bound: f64,
    pub slack: f64,
    pub vacuous: bool,
    pub passed: bool,
}

pub fn holder_ball_check(m: &ChartedManifold, field: &FormField, ball: &AdmissibleBall, r: f64, s: f64, num: &Numerics) -> Result<HolderReport> {
    if !(r >= 1.0) || s < r {
        return Err(Error::InvalidParams(format!("need s ≥ r ≥ 1, got r = {r}, s = {s}")));
    }
    let n = m.n() as f64;
    let region = Region::Ball(ball.region());
    let lhs = lp_norm(m, field, &region, r, &Weight::Unit, num)?;
    let rhs_norm = lp_norm(m, field, &region, s, &Weight::Unit, num)?;
    let e = 1.0 / r - 1.0 / s;
    let bound = ((1.0 + ball.epsilon).powf(n / 2.0) * unit_ball_volume(m.n())).powf(e);
    let slack = 0.1;
    let constant = (rhs_norm > 0.0).then(|| lhs / (ball.radius.powf(n * e) * rhs_norm));
    Ok(HolderReport {
        r,
        s,
        lhs,
        rhs_norm,
        constant,
        bound,
        slack,
        vacuous: constant.is_none(),
        passed: constant.is_none_or(|c| c <= (1.0 + slack) * bound),
    })
}
