//! ε-admissible balls, the admissible radius R_ε and radius fields.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{mat_vec, norm2, sym_eigenvalues, sym_sqrt_pair, Mat};
use crate::manifold::{Chart, ChartedManifold, Point, Window};
use crate::region::BallRegion;
use crate::sampling::{halton, sphere_point};

/// Upper end of the bisection interval for R′.
pub const RADIUS_CAP: f64 = 4.0;
/// Relative tolerance of the bisection.
pub const BISECTION_TOL: f64 = 1e-3;
pub const BISECTION_MAX_ITER: usize = 30;
/// Below this R′ a point is declared degenerate.
pub const DEGENERATE_RADIUS: f64 = 1e-6;
/// Default log₂ of the number of quasi-random samples per ball.
pub const DEFAULT_SAMPLER_LOG2: u32 = 9;

fn check_class_eps(class: u8, epsilon: f64) -> Result<()> {
    if class > 1 {
        return Err(Error::InvalidParams(format!("class must be 0 or 1, got {class}")));
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidParams(format!("epsilon must lie in (0, 1/2), got {epsilon}")));
    }
    Ok(())
}

/// Unit-ball sample pattern: 2^k low-discrepancy points (half on the
/// boundary sphere, half inside) plus the center and the 2n axis points.
#[derive(Clone, Debug)]
pub struct Sampler {
    pub n: usize,
    pub log2: u32,
    pub points: Vec<Vec<f64>>,
}

impl Sampler {
    pub fn new(n: usize, log2: u32) -> Self {
        let total = 1usize << log2;
        let half = total / 2;
        let mut points = vec![vec![0.0; n]];
        for i in 0..n {
            for s in [-1.0, 1.0] {
                let mut e = vec![0.0; n];
                e[i] = s;
                points.push(e);
            }
        }
        let d = n.max(2) - 1;
        for i in 0..half {
            let u = if n == 2 {
                vec![(i as f64 + 0.5) / half as f64]
            } else {
                halton(i as u64 + 1, d, 0)
            };
            let p = if n == 1 {
                vec![if i % 2 == 0 { -1.0 } else { 1.0 }]
            } else {
                sphere_point(n, &u)
            };
            points.push(p);
        }
        for i in 0..total - half {
            let u = halton(i as u64 + 1, d + 1, 3);
            let r = u[d].powf(1.0 / n as f64);
            let dir = if n == 1 { vec![if u[0] < 0.5 { -1.0 } else { 1.0 }] } else { sphere_point(n, &u[..d]) };
            points.push(dir.iter().map(|v| v * r).collect());
        }
        Sampler { n, log2, points }
    }

    pub fn standard(n: usize) -> Self {
        Self::new(n, DEFAULT_SAMPLER_LOG2)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The normalized chart φ(y) = A(y - x) with A = g(x)^{1/2}, so that the
/// pulled-back metric is the identity at the center.
#[derive(Clone, Debug)]
pub struct Normalizer {
    pub center: Vec<f64>,
    pub a: Mat,
    pub a_inv: Mat,
}

impl Normalizer {
    pub fn at(chart: &Chart, x: &[f64]) -> Result<Self> {
        let g = chart.metric(x);
        let (a, a_inv) = sym_sqrt_pair(&g).ok_or_else(|| Error::NotPositiveDefinite(x.to_vec()))?;
        Ok(Normalizer { center: x.to_vec(), a, a_inv })
    }

    /// Chart coordinates of the normalized point z (not wrapped).
    pub fn to_chart(&self, z: &[f64]) -> Vec<f64> {
        mat_vec(&self.a_inv, z).iter().zip(&self.center).map(|(a, b)| a + b).collect()
    }

    pub fn to_normalized(&self, chart: &Chart, y: &[f64]) -> Vec<f64> {
        let mut d: Vec<f64> = y.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        chart.min_image(&mut d);
        mat_vec(&self.a, &d)
    }

    /// Normalized-chart distance from the center.
    pub fn distance(&self, chart: &Chart, y: &[f64]) -> f64 {
        norm2(&self.to_normalized(chart, y))
    }

    /// g̃(z) = A⁻¹ g(x + A⁻¹z) A⁻¹.
    pub fn metric(&self, chart: &Chart, z: &[f64]) -> Mat {
        let y = chart.wrap(&self.to_chart(z));
        &self.a_inv * chart.metric(&y) * &self.a_inv
    }

    /// ∂_{z_k} g̃ = A⁻¹ (Σ_l (A⁻¹)_{lk} ∂_l g) A⁻¹.
    pub fn metric_partials(&self, chart: &Chart, z: &[f64]) -> Result<Vec<Mat>> {
        let y = chart.wrap(&self.to_chart(z));
        let dg = chart.metric_partials(&y)?;
        let n = z.len();
        Ok((0..n)
            .map(|k| {
                let mut s = Mat::zeros(n, n);
                for (l, d) in dg.iter().enumerate() {
                    let c = self.a_inv[(l, k)];
                    if c != 0.0 {
                        s += d * c;
                    }
                }
                &self.a_inv * s * &self.a_inv
            })
            .collect())
    }

    /// The coordinate ellipsoid of normalized radius R.
    pub fn ball_region(&self, radius: f64) -> BallRegion {
        BallRegion { center: self.center.clone(), radius, shape: self.a_inv.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Failure {
    LeavesChart,
    MetricBounds,
    DerivativeBound,
}

/// Outcome of an admissibility test with its worst margins.
#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityCheck {
    pub admissible: bool,
    pub reason: Option<Failure>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// R · Σ_k max_samples max_ij |∂_k g̃_ij|.
    pub derivative_term: f64,
    /// Largest R keeping the normalized ball inside the chart.
    pub room: f64,
}

fn eigen_range(m: &Mat) -> (f64, f64) {
    if crate::linalg::is_diagonal(m) {
        let d: Vec<f64> = (0..m.nrows()).map(|i| m[(i, i)]).collect();
        (d.iter().copied().fold(f64::INFINITY, f64::min), d.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    } else {
        let ev = sym_eigenvalues(m);
        (ev[0], ev[ev.len() - 1])
    }
}

/// Full evaluation of conditions (*) and (**) over the samples.
fn evaluate(
    chart: &Chart,
    norm: &Normalizer,
    radius: f64,
    class: u8,
    epsilon: f64,
    sampler: &Sampler,
    early_exit: bool,
) -> Result<AdmissibilityCheck> {
    let n = norm.center.len();
    let room = chart.room(&norm.center, &norm.a_inv);
    let mut check = AdmissibilityCheck {
        admissible: true,
        reason: None,
        min_eigenvalue: f64::INFINITY,
        max_eigenvalue: f64::NEG_INFINITY,
        derivative_term: 0.0,
        room,
    };
    if radius >= room {
        check.admissible = false;
        check.reason = Some(Failure::LeavesChart);
        if early_exit {
            return Ok(check);
        }
    }
    let mut sup = vec![0.0f64; n];
    let mut z = vec![0.0; n];
    for u in &sampler.points {
        for i in 0..n {
            z[i] = radius * u[i];
        }
        let (lo, hi) = eigen_range(&norm.metric(chart, &z));
        check.min_eigenvalue = check.min_eigenvalue.min(lo);
        check.max_eigenvalue = check.max_eigenvalue.max(hi);
        if lo < 1.0 - epsilon || hi > 1.0 + epsilon {
            if check.admissible {
                check.admissible = false;
                check.reason = Some(Failure::MetricBounds);
            }
            if early_exit {
                return Ok(check);
            }
        }
        if class == 1 {
            for (k, d) in norm.metric_partials(chart, &z)?.iter().enumerate() {
                sup[k] = sup[k].max(d.amax());
            }
            check.derivative_term = radius * sup.iter().sum::<f64>();
            if check.derivative_term > epsilon {
                if check.admissible {
                    check.admissible = false;
                    check.reason = Some(Failure::DerivativeBound);
                }
                if early_exit {
                    return Ok(check);
                }
            }
        }
    }
    Ok(check)
}

/// Tests whether B(x, R) is (class, ε)-admissible in the normalized chart at x.
pub fn is_admissible(
    m: &ChartedManifold,
    x: &Point,
    radius: f64,
    class: u8,
    epsilon: f64,
    sampler: &Sampler,
) -> Result<AdmissibilityCheck> {
    check_class_eps(class, epsilon)?;
    if !(radius > 0.0) {
        return Err(Error::InvalidParams(format!("radius must be positive, got {radius}")));
    }
    let chart = &m.charts()[x.chart];
    if !chart.contains(&x.coords) {
        return Err(Error::OutsideDomain(x.coords.clone()));
    }
    let norm = Normalizer::at(chart, &x.coords)?;
    evaluate(chart, &norm, radius, class, epsilon, sampler, false)
}

/// R_ε(x) = min(1, R′/2) together with the bisection trace.
#[derive(Clone, Debug, Serialize)]
pub struct RadiusSample {
    pub radius: f64,
    pub r_prime: f64,
    pub room: f64,
    /// (tested radius, admissible) in evaluation order.
    pub trace: Vec<(f64, bool)>,
}

fn radius_in_chart(chart: &Chart, x: &[f64], class: u8, epsilon: f64, sampler: &Sampler) -> Result<RadiusSample> {
    let norm = Normalizer::at(chart, x)?;
    let room = chart.room(x, &norm.a_inv);
    let r_max = (room * (1.0 - 1e-9)).min(RADIUS_CAP);
    if r_max < DEGENERATE_RADIUS {
        return Err(Error::DegeneratePoint(x.to_vec()));
    }
    let mut trace = Vec::new();
    let admits = |r: f64, trace: &mut Vec<(f64, bool)>| -> Result<bool> {
        let ok = evaluate(chart, &norm, r, class, epsilon, sampler, true)?.admissible;
        trace.push((r, ok));
        Ok(ok)
    };
    let r_prime = if admits(r_max, &mut trace)? {
        r_max
    } else {
        let (mut lo, mut hi) = (0.0, r_max);
        for _ in 0..BISECTION_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if admits(mid, &mut trace)? {
                lo = mid;
            } else {
                hi = mid;
            }
            if lo > 0.0 && hi - lo <= BISECTION_TOL * lo {
                break;
            }
        }
        lo
    };
    if r_prime < DEGENERATE_RADIUS {
        return Err(Error::DegeneratePoint(x.to_vec()));
    }
    Ok(RadiusSample { radius: (0.5 * r_prime).min(1.0), r_prime, room, trace })
}

/// The admissible radius R_ε(x) = min(1, R′(x)/2), R′ found by bisection.
pub fn admissible_radius(m: &ChartedManifold, x: &Point, class: u8, epsilon: f64, sampler: &Sampler) -> Result<RadiusSample> {
    check_class_eps(class, epsilon)?;
    let chart = &m.charts()[x.chart];
    if !chart.contains(&x.coords) {
        return Err(Error::OutsideDomain(x.coords.clone()));
    }
    radius_in_chart(chart, &chart.wrap(&x.coords), class, epsilon, sampler)
}

/// A regular grid with `counts[i]` nodes per axis, endpoints included.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Grid {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, counts: Vec<usize>) -> Self {
        assert!(counts.iter().all(|&c| c >= 1));
        Grid { lo, hi, counts }
    }

    pub fn over_window(w: &Window, counts: Vec<usize>) -> Self {
        Grid::new(w.lo(), w.hi(), counts)
    }

    pub fn uniform(w: &Window, count: usize) -> Self {
        Self::over_window(w, vec![count; w.center.len()])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pitch(&self, axis: usize) -> f64 {
        if self.counts[axis] <= 1 {
            0.0
        } else {
            (self.hi[axis] - self.lo[axis]) / (self.counts[axis] - 1) as f64
        }
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        if self.counts[axis] <= 1 {
            0.5 * (self.lo[axis] + self.hi[axis])
        } else {
            self.lo[axis] + self.pitch(axis) * i as f64
        }
    }

    /// Node `flat` in row-major order (last axis fastest).
    pub fn point(&self, mut flat: usize) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for axis in (0..n).rev() {
            out[axis] = self.coord(axis, flat % self.counts[axis]);
            flat /= self.counts[axis];
        }
        out
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Index of the node nearest to x (clamped to the grid).
    pub fn nearest(&self, x: &[f64]) -> usize {
        let mut flat = 0;
        for axis in 0..self.dim() {
            let c = self.counts[axis];
            let i = if c <= 1 {
                0
            } else {
                let t = ((x[axis] - self.lo[axis]) / self.pitch(axis)).round();
                t.clamp(0.0, (c - 1) as f64) as usize
            };
            flat = flat * c + i;
        }
        flat
    }

    /// The grid refined by `factor` (pitch divided by `factor`).
    pub fn refined(&self, factor: usize) -> Grid {
        Grid {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            counts: self.counts.iter().map(|&c| if c <= 1 { 1 } else { (c - 1) * factor + 1 }).collect(),
        }
    }
}

fn key(x: &[f64]) -> Vec<u64> {
    x.iter().map(|v| v.to_bits()).collect()
}

/// Memoized admissible radii over a set of points, optionally on a grid
/// (which enables lookups between nodes).
#[derive(Clone, Debug)]
pub struct RadiusField {
    pub class: u8,
    pub epsilon: f64,
    pub resolution: u32,
    grid: Option<Grid>,
    chart: Chart,
    points: Vec<Vec<f64>>,
    samples: Vec<RadiusSample>,
    index: HashMap<Vec<u64>, usize>,
}

impl RadiusField {
    fn build(
        m: &ChartedManifold,
        points: Vec<Vec<f64>>,
        grid: Option<Grid>,
        class: u8,
        epsilon: f64,
        sampler: &Sampler,
        exec: Exec,
    ) -> Result<Self> {
        check_class_eps(class, epsilon)?;
        let chart = m.chart().clone();
        let points: Vec<Vec<f64>> = points.iter().map(|p| chart.wrap(p)).collect();
        for p in &points {
            if !chart.contains(p) {
                return Err(Error::OutsideDomain(p.clone()));
            }
        }
        let samples = exec.try_map(&points, |p| radius_in_chart(&chart, p, class, epsilon, sampler))?;
        let index = points.iter().enumerate().map(|(i, p)| (key(p), i)).collect();
        Ok(RadiusField { class, epsilon, resolution: sampler.log2, grid, chart, points, samples, index })
    }

    pub fn on_grid(m: &ChartedManifold, grid: &Grid, class: u8, epsilon: f64, sampler: &Sampler, exec: Exec) -> Result<Self> {
        Self::build(m, grid.points(), Some(grid.clone()), class, epsilon, sampler, exec)
    }

    pub fn at_points(m: &ChartedManifold, points: &[Vec<f64>], class: u8, epsilon: f64, sampler: &Sampler, exec: Exec) -> Result<Self> {
        Self::build(m, points.to_vec(), None, class, epsilon, sampler, exec)
    }

    pub fn grid(&self) -> Option<&Grid> {
        self.grid.as_ref()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn samples(&self) -> &[RadiusSample] {
        &self.samples
    }

    pub fn get(&self, x: &[f64]) -> Option<&RadiusSample> {
        self.index.get(&key(&self.chart.wrap(x))).map(|&i| &self.samples[i])
    }

    /// Multilinear interpolation of ln R (or ln R′) on the grid, clamped to
    /// the grid box.
    fn interpolate(&self, x: &[f64], pick: impl Fn(&RadiusSample) -> f64) -> Result<f64> {
        if let Some(s) = self.get(x) {
            return Ok(pick(s));
        }
        let Some(g) = &self.grid else { return Err(Error::MissingRadius(x.to_vec())) };
        let x = self.chart.wrap(x);
        let n = g.dim();
        let mut base = vec![0usize; n];
        let mut frac = vec![0.0; n];
        for a in 0..n {
            let c = g.counts[a];
            if c <= 1 {
                continue;
            }
            let t = ((x[a] - g.lo[a]) / g.pitch(a)).clamp(0.0, (c - 1) as f64);
            let i = (t.floor() as usize).min(c - 2);
            base[a] = i;
            frac[a] = t - i as f64;
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << n) {
            let mut w = 1.0;
            let mut flat = 0;
            for a in 0..n {
                let up = corner >> a & 1 == 1;
                let c = g.counts[a];
                let i = if up && c > 1 { base[a] + 1 } else { base[a] };
                w *= if c <= 1 {
                    if up { 0.0 } else { 1.0 }
                } else if up {
                    frac[a]
                } else {
                    1.0 - frac[a]
                };
                flat = flat * c + i;
            }
            if w != 0.0 {
                acc += w * pick(&self.samples[flat]).ln();
            }
        }
        Ok(acc.exp())
    }

    /// R_ε at x: the memoized value at computed points, otherwise log-linear
    /// interpolation between grid nodes.
    pub fn radius(&self, x: &[f64]) -> Result<f64> {
        self.interpolate(x, |s| s.radius)
    }

    pub fn r_prime(&self, x: &[f64]) -> Result<f64> {
        self.interpolate(x, |s| s.r_prime)
    }

    pub fn weight(&self, x: &[f64], gamma: f64) -> Result<f64> {
        let r = self.radius(x)?;
        Ok(if gamma == 0.0 { 1.0 } else { r.powf(gamma) })
    }

    pub fn min_radius(&self) -> f64 {
        self.samples.iter().map(|s| s.radius).fold(f64::INFINITY, f64::min)
    }

    pub fn max_radius(&self) -> f64 {
        self.samples.iter().map(|s| s.radius).fold(0.0, f64::max)
    }
}

/// Memoized admissible radius over arbitrary points.
pub fn radius_field(m: &ChartedManifold, points: &[Point], class: u8, epsilon: f64, sampler: &Sampler, exec: Exec) -> Result<RadiusField> {
    let coords: Vec<Vec<f64>> = points.iter().map(|p| p.coords.clone()).collect();
    RadiusField::at_points(m, &coords, class, epsilon, sampler, exec)
}

/// Relative slack applied to both slow-variation checks.
pub const SLOW_VARIATION_SLACK: f64 = 0.05;

#[derive(Clone, Debug, Serialize)]
pub struct SlowVariationReport {
    pub pairs: usize,
    pub band_violations: usize,
    pub lipschitz_violations: usize,
    /// max over pairs of max(R(y)/(2R(x)), R(x)/(2R(y))); ≤ 1 inside the band.
    pub worst_band: f64,
    /// max over pairs of |R′(y) - R′(x)| / allowance; ≤ 1 when Lipschitz.
    pub worst_lipschitz: f64,
    pub slack: f64,
}

impl SlowVariationReport {
    pub fn passed(&self) -> bool {
        self.band_violations == 0 && self.lipschitz_violations == 0
    }
}

/// Random pairs (x, y) with x in the window and y in the normalized ball
/// B(x, R(x)/(1+ε)), with the radius field evaluated at all of them.
pub fn slow_variation_pairs(
    m: &ChartedManifold,
    class: u8,
    epsilon: f64,
    sampler: &Sampler,
    count: usize,
    seed: u64,
    exec: Exec,
) -> Result<(RadiusField, Vec<(Point, Point)>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = m.window();
    let (lo, hi) = (w.lo(), w.hi());
    let xs: Vec<Vec<f64>> =
        (0..count).map(|_| (0..m.n()).map(|i| rng.random_range(lo[i]..=hi[i])).collect()).collect();
    let fx = RadiusField::at_points(m, &xs, class, epsilon, sampler, exec)?;
    let chart = m.chart();
    let mut ys = Vec::with_capacity(count);
    for x in &xs {
        let r = fx.radius(x)?;
        let norm = Normalizer::at(chart, x)?;
        let u: Vec<f64> = (0..m.n()).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let dir = if norm2(&u) > 1e-12 { u.clone() } else { vec![1.0; m.n()] };
        let scale = rng.random::<f64>().powf(1.0 / m.n() as f64) * r / (1.0 + epsilon) / norm2(&dir);
        let z: Vec<f64> = dir.iter().map(|v| v * scale).collect();
        ys.push(chart.wrap(&norm.to_chart(&z)));
    }
    let mut all = xs.clone();
    all.extend(ys.iter().cloned());
    let field = RadiusField::at_points(m, &all, class, epsilon, sampler, exec)?;
    let pairs = xs.into_iter().zip(ys).map(|(x, y)| (Point::new(x), Point::new(y))).collect();
    Ok((field, pairs))
}

/// Checks R(x)/2 ≤ R(y) ≤ 2R(x) and |R′(y) - R′(x)| ≤ (1+ε) d(x, y), both with
/// 5% slack; the Lipschitz allowance also absorbs the bisection tolerance of
/// both radii.
pub fn verify_slow_variation(m: &ChartedManifold, field: &RadiusField, pairs: &[(Point, Point)]) -> Result<SlowVariationReport> {
    let chart = m.chart();
    let s = SLOW_VARIATION_SLACK;
    let mut rep = SlowVariationReport {
        pairs: pairs.len(),
        band_violations: 0,
        lipschitz_violations: 0,
        worst_band: 0.0,
        worst_lipschitz: 0.0,
        slack: s,
    };
    for (x, y) in pairs {
        let sx = field.get(&x.coords).ok_or_else(|| Error::MissingRadius(x.coords.clone()))?;
        let sy = field.get(&y.coords).ok_or_else(|| Error::MissingRadius(y.coords.clone()))?;
        let band = (sy.radius / (2.0 * sx.radius)).max(sx.radius / (2.0 * sy.radius));
        rep.worst_band = rep.worst_band.max(band);
        if band > 1.0 + s {
            rep.band_violations += 1;
        }
        let d = Normalizer::at(chart, &x.coords)?.distance(chart, &y.coords);
        let allowance = (1.0 + field.epsilon) * d * (1.0 + s) + 2.0 * BISECTION_TOL * sx.r_prime.max(sy.r_prime);
        let lip = (sy.r_prime - sx.r_prime).abs() / allowance;
        rep.worst_lipschitz = rep.worst_lipschitz.max(lip);
        if lip > 1.0 {
            rep.lipschitz_violations += 1;
        }
    }
    Ok(rep)
}

/// An admissible ball with its normalized chart.
#[derive(Clone, Debug)]
pub struct AdmissibleBall {
    pub center: Point,
    pub radius: f64,
    pub class: u8,
    pub epsilon: f64,
    pub normalizer: Normalizer,
}

impl AdmissibleBall {
    /// Verifies admissibility at the given radius.
    pub fn new(m: &ChartedManifold, center: Point, radius: f64, class: u8, epsilon: f64, sampler: &Sampler) -> Result<Self> {
        let check = is_admissible(m, &center, radius, class, epsilon, sampler)?;
        if !check.admissible {
            return Err(Error::NotAdmissible(format!(
                "radius {radius} at {:?} fails: {:?}",
                center.coords, check.reason
            )));
        }
        let normalizer = Normalizer::at(&m.charts()[center.chart], &center.coords)?;
        Ok(AdmissibleBall { center, radius, class, epsilon, normalizer })
    }

    /// The ball of radius R_ε(x) at x.
    pub fn at_admissible_radius(m: &ChartedManifold, center: Point, class: u8, epsilon: f64, sampler: &Sampler) -> Result<Self> {
        let r = admissible_radius(m, &center, class, epsilon, sampler)?;
        Self::new(m, center, r.radius, class, epsilon, sampler)
    }

    pub fn region(&self) -> BallRegion {
        self.normalizer.ball_region(self.radius)
    }

    /// The concentric ball of radius R/2.
    pub fn half(&self) -> BallRegion {
        self.normalizer.ball_region(0.5 * self.radius)
    }
}

/// Points uniformly spread on the window for sampling-based checks.
pub fn random_window_points(w: &Window, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (w.lo(), w.hi());
    (0..count).map(|_| (0..lo.len()).map(|i| rng.random_range(lo[i]..=hi[i])).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{builtin, BuiltinKind};

    #[test]
    fn sampler_layout() {
        let s = Sampler::standard(2);
        assert_eq!(s.len(), 512 + 1 + 4);
        assert!(s.points.iter().all(|p| norm2(p) <= 1.0 + 1e-12));
        let s3 = Sampler::new(3, 6);
        assert_eq!(s3.len(), 64 + 1 + 6);
    }

    #[test]
    fn euclidean_radius_is_one() {
        let m = builtin(BuiltinKind::Euclidean, 2, &[], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let s = Sampler::standard(2);
        for class in [0, 1] {
            let r = admissible_radius(&m, &Point::new(vec![0.9, -0.9]), class, 0.1, &s).unwrap();
            assert_eq!(r.radius, 1.0);
            assert_eq!(r.r_prime, RADIUS_CAP);
        }
    }

    #[test]
    fn interpolation_is_exact_at_nodes_and_log_linear_between() {
        let m = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.0, 0.0], &[0.3, 0.3]).unwrap();
        let s = Sampler::new(2, 6);
        let g = Grid::new(vec![-0.3, -0.3], vec![0.3, 0.3], vec![3, 3]);
        let f = RadiusField::on_grid(&m, &g, 0, 0.1, &s, Exec::Sequential).unwrap();
        let (a, b) = (f.samples()[3].radius, f.samples()[4].radius);
        assert_eq!(f.radius(&[0.0, -0.3]).unwrap(), a);
        let mid = f.radius(&[0.0, -0.15]).unwrap();
        assert!((mid - (a * b).sqrt()).abs() < 1e-12 * mid);
    }

    #[test]
    fn grid_nearest() {
        let g = Grid::new(vec![0.0, 0.0], vec![1.0, 2.0], vec![3, 5]);
        assert_eq!(g.len(), 15);
        assert_eq!(g.point(7), vec![0.5, 1.0]);
        assert_eq!(g.nearest(&[0.45, 1.1]), 7);
        assert_eq!(g.nearest(&[-3.0, 9.0]), 4);
        assert_eq!(g.refined(4).counts, vec![9, 17]);
    }
}
