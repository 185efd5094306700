//! Vitali-type ε-admissible coverings and their overlap.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::admissible::{Grid, Normalizer, RadiusField, Sampler};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{mat_vec, norm2};
use crate::manifold::{Chart, ChartedManifold, Point};

/// Base radius r(x) = R_ε(x) / BASE_DIVISOR.
pub const BASE_DIVISOR: f64 = 10.0;
/// Dilated balls have radius DILATION · r(x) = R_ε(x)/2.
pub const DILATION: f64 = 5.0;
/// Probe grids refine the candidate grid by this factor.
pub const PROBE_REFINEMENT: usize = 4;

/// The overlap bounds T = ((1+ε)/(1-ε))^{n/2}·100ⁿ and T₁ = T·2ⁿ.
pub fn overlap_bound(n: usize, epsilon: f64) -> (f64, f64) {
    let t = ((1.0 + epsilon) / (1.0 - epsilon)).powf(n as f64 / 2.0) * 100f64.powi(n as i32);
    (t, t * 2f64.powi(n as i32))
}

/// R_ε(x)^γ read from the radius field.
pub fn weight_at(x: &[f64], gamma: f64, field: &RadiusField) -> Result<f64> {
    field.weight(x, gamma)
}

fn extents(norm: &Normalizer) -> Vec<f64> {
    let n = norm.a_inv.nrows();
    (0..n).map(|i| (0..n).map(|j| norm.a_inv[(i, j)].powi(2)).sum::<f64>().sqrt()).collect()
}

fn normalized_distance(chart: &Chart, norm: &Normalizer, y: &[f64]) -> f64 {
    let n = y.len();
    if n > 4 {
        let mut d: Vec<f64> = y.iter().zip(&norm.center).map(|(a, b)| a - b).collect();
        chart.min_image(&mut d);
        return norm2(&mat_vec(&norm.a, &d));
    }
    let mut d = [0.0; 4];
    for i in 0..n {
        d[i] = y[i] - norm.center[i];
    }
    chart.min_image(&mut d[..n]);
    let mut s = 0.0;
    for i in 0..n {
        let mut v = 0.0;
        for j in 0..n {
            v += norm.a[(i, j)] * d[j];
        }
        s += v * v;
    }
    s.sqrt()
}

/// Uniform bucket grid with wrap-around on periodic axes.
struct SpatialHash {
    origin: Vec<f64>,
    cell: Vec<f64>,
    wrap: Vec<Option<i64>>,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
}

impl SpatialHash {
    fn new(chart: &Chart, origin: Vec<f64>, reach: &[f64]) -> Self {
        let n = origin.len();
        let mut cell = Vec::with_capacity(n);
        let mut wrap = Vec::with_capacity(n);
        for i in 0..n {
            let r = reach[i].max(1e-300);
            match chart.periods[i] {
                Some(l) => {
                    let c = ((l / r).floor() as i64).max(1);
                    cell.push(l / c as f64);
                    wrap.push(Some(c));
                }
                None => {
                    cell.push(r);
                    wrap.push(None);
                }
            }
        }
        SpatialHash { origin, cell, wrap, buckets: HashMap::new() }
    }

    fn key(&self, x: &[f64]) -> Vec<i64> {
        (0..x.len())
            .map(|i| {
                let k = ((x[i] - self.origin[i]) / self.cell[i]).floor() as i64;
                match self.wrap[i] {
                    Some(c) => k.rem_euclid(c),
                    None => k,
                }
            })
            .collect()
    }

    fn insert(&mut self, x: &[f64], id: usize) {
        let k = self.key(x);
        self.buckets.entry(k).or_default().push(id);
    }

    /// Ids in the 3ⁿ neighbourhood of x's bucket.
    fn near(&self, x: &[f64]) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_near(x, |id| out.push(id));
        out
    }

    fn for_near(&self, x: &[f64], mut f: impl FnMut(usize)) {
        let base = self.key(x);
        let n = base.len();
        let mut keys: Vec<Vec<i64>> = vec![Vec::new()];
        for i in 0..n {
            let mut next = Vec::with_capacity(keys.len() * 3);
            for k in &keys {
                for d in -1..=1 {
                    let mut c = base[i] + d;
                    if let Some(w) = self.wrap[i] {
                        c = c.rem_euclid(w);
                    }
                    let mut kk = k.clone();
                    kk.push(c);
                    next.push(kk);
                }
            }
            next.sort();
            next.dedup();
            keys = next;
        }
        for k in &keys {
            if let Some(ids) = self.buckets.get(k) {
                ids.iter().for_each(|&id| f(id));
            }
        }
    }
}

/// Overlap counts over a probe set, with the T and T1 bounds.
#[derive(Clone, Debug, Serialize)]
pub struct OverlapStats {
    pub probes: usize,
    /// Probes inside no dilated ball.
    pub uncovered: usize,
    pub first_uncovered: Option<Vec<f64>>,
    /// Max number of dilated balls B(x, R_ε(x)/2) containing a probe.
    pub max_overlap: usize,
    pub mean_overlap: f64,
    /// Max number of full balls B(x, R_ε(x)) containing a probe.
    pub max_full_overlap: usize,
    /// Max number of base balls containing a probe (1 for disjoint bases).
    pub max_base_overlap: usize,
    /// overlap count -> number of probes.
    pub histogram: BTreeMap<usize, usize>,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "T1")]
    pub t1: f64,
}

impl OverlapStats {
    pub fn within_bounds(&self) -> bool {
        (self.max_overlap as f64) <= self.t && (self.max_full_overlap as f64) <= self.t1
    }
}

/// The selected family 𝒟(ε) with its base radii R_ε/10.
#[derive(Clone, Debug)]
pub struct Covering {
    pub class: u8,
    pub epsilon: f64,
    pub centers: Vec<Point>,
    /// R_ε at each center.
    pub radii: Vec<f64>,
    pub normalizers: Vec<Normalizer>,
    pub candidates: usize,
    pub stats: Option<OverlapStats>,
    chart: Chart,
    extents: Vec<Vec<f64>>,
}

impl Covering {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn base_radius(&self, i: usize) -> f64 {
        self.radii[i] / BASE_DIVISOR
    }

    pub fn dilated_radius(&self, i: usize) -> f64 {
        DILATION * self.base_radius(i)
    }

    /// Normalized-chart distance from center i to y.
    pub fn distance(&self, i: usize, y: &[f64]) -> f64 {
        normalized_distance(&self.chart, &self.normalizers[i], y)
    }

    /// Base-ball disjointness under the conservative (1-ε) test, all pairs.
    pub fn bases_disjoint(&self) -> bool {
        let k = self.len();
        (0..k).all(|i| {
            (i + 1..k).all(|j| {
                let d = self.distance(i, &self.centers[j].coords).min(self.distance(j, &self.centers[i].coords));
                (1.0 - self.epsilon) * d >= self.base_radius(i) + self.base_radius(j)
            })
        })
    }

    fn probe_hash(&self, factor: f64) -> SpatialHash {
        let n = self.chart.dim();
        let reach: Vec<f64> = (0..n)
            .map(|a| {
                (0..self.len()).map(|i| self.extents[i][a] * self.base_radius(i)).fold(0.0, f64::max) * factor
                    / (1.0 - self.epsilon)
            })
            .collect();
        let origin = self.centers.first().map(|c| c.coords.clone()).unwrap_or_else(|| vec![0.0; n]);
        let mut h = SpatialHash::new(&self.chart, origin, &reach);
        for (i, c) in self.centers.iter().enumerate() {
            h.insert(&c.coords, i);
        }
        h
    }

    /// Counts, at each probe, the dilated, full and base balls containing it.
    /// Coverage is tested with the expanded distance (1+ε)d, overlap with the
    /// shrunk distance (1-ε)d.
    pub fn overlap_stats(&self, probes: &[Vec<f64>], exec: Exec) -> OverlapStats {
        let n = self.chart.dim();
        let eps = self.epsilon;
        let hash = self.probe_hash(2.0 * DILATION);
        let counts = exec.map(probes, |p| {
            let p = self.chart.wrap(p);
            let (mut covered, mut dil, mut full, mut base) = (false, 0usize, 0usize, 0usize);
            hash.for_near(&p, |i| {
                let d = self.distance(i, &p);
                let r = self.base_radius(i);
                if (1.0 - eps) * d > 2.0 * DILATION * r {
                    return;
                }
                full += 1;
                if (1.0 - eps) * d <= DILATION * r {
                    dil += 1;
                }
                if (1.0 + eps) * d <= DILATION * r {
                    covered = true;
                }
                if d <= r {
                    base += 1;
                }
            });
            (covered, dil, full, base)
        });
        let (t, t1) = overlap_bound(n, eps);
        let mut stats = OverlapStats {
            probes: probes.len(),
            uncovered: 0,
            first_uncovered: None,
            max_overlap: 0,
            mean_overlap: 0.0,
            max_full_overlap: 0,
            max_base_overlap: 0,
            histogram: BTreeMap::new(),
            t,
            t1,
        };
        let mut sum = 0usize;
        for (p, (covered, dil, full, base)) in probes.iter().zip(counts) {
            if !covered {
                stats.uncovered += 1;
                if stats.first_uncovered.is_none() {
                    stats.first_uncovered = Some(p.clone());
                }
            }
            stats.max_overlap = stats.max_overlap.max(dil);
            stats.max_full_overlap = stats.max_full_overlap.max(full);
            stats.max_base_overlap = stats.max_base_overlap.max(base);
            *stats.histogram.entry(dil).or_default() += 1;
            sum += dil;
        }
        if !probes.is_empty() {
            stats.mean_overlap = sum as f64 / probes.len() as f64;
        }
        stats
    }

    /// Indices of the dilated balls whose coordinate bounding boxes meet `x`'s
    /// neighbourhood; used by the localization sums.
    pub fn balls_near(&self, x: &[f64]) -> Vec<usize> {
        self.probe_hash(2.0 * DILATION).near(&self.chart.wrap(x))
    }
}

/// Greedy Vitali selection: candidates sorted by radius (descending, ties by
/// lexicographic coordinates); a candidate is accepted when its base ball is
/// disjoint from every accepted base ball. Coverage is then verified on
/// `probes`; an uncovered probe is a [`Error::GridTooCoarse`].
pub fn vitali_cover(
    m: &ChartedManifold,
    field: &RadiusField,
    candidates: &[Vec<f64>],
    probes: &[Vec<f64>],
    exec: Exec,
) -> Result<Covering> {
    let cover = select(m, field, candidates, exec)?;
    if probes.is_empty() {
        return Ok(cover);
    }
    let stats = cover.overlap_stats(probes, exec);
    if let Some(p) = &stats.first_uncovered {
        return Err(Error::GridTooCoarse(p.clone()));
    }
    Ok(Covering { stats: Some(stats), ..cover })
}

/// The greedy selection alone, without coverage verification.
pub fn select(m: &ChartedManifold, field: &RadiusField, candidates: &[Vec<f64>], exec: Exec) -> Result<Covering> {
    let chart = m.chart().clone();
    let eps = field.epsilon;
    let n = m.n();
    let mut order: Vec<(Vec<f64>, f64)> = candidates
        .iter()
        .map(|c| {
            let c = chart.wrap(c);
            field.radius(&c).map(|r| (c, r))
        })
        .collect::<Result<_>>()?;
    order.sort_by(|a, b| {
        b.1.total_cmp(&a.1).then_with(|| {
            a.0.iter().zip(&b.0).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    let norms: Vec<Normalizer> = exec.try_map(&order, |(c, _)| Normalizer::at(&chart, c))?;
    let exts: Vec<Vec<f64>> = norms.iter().map(extents).collect();
    let max_r = order.iter().map(|o| o.1).fold(0.0, f64::max) / BASE_DIVISOR;
    let reach: Vec<f64> =
        (0..n).map(|a| 2.0 * exts.iter().map(|e| e[a]).fold(0.0, f64::max) * max_r / (1.0 - eps)).collect();
    let origin = m.window().lo();
    let mut hash = SpatialHash::new(&chart, origin, &reach);
    let mut accepted: Vec<usize> = Vec::new();
    for (k, (c, r)) in order.iter().enumerate() {
        let rb = r / BASE_DIVISOR;
        let clash = hash.near(c).into_iter().any(|j| {
            let a = accepted[j];
            let d = normalized_distance(&chart, &norms[a], c).min(normalized_distance(&chart, &norms[k], &order[a].0));
            (1.0 - eps) * d < rb + order[a].1 / BASE_DIVISOR
        });
        if !clash {
            hash.insert(c, accepted.len());
            accepted.push(k);
        }
    }
    Ok(Covering {
        class: field.class,
        epsilon: eps,
        centers: accepted.iter().map(|&k| Point { chart: m.window().chart, coords: order[k].0.clone() }).collect(),
        radii: accepted.iter().map(|&k| order[k].1).collect(),
        normalizers: accepted.iter().map(|&k| norms[k].clone()).collect(),
        extents: accepted.iter().map(|&k| exts[k].clone()).collect(),
        candidates: candidates.len(),
        stats: None,
        chart,
    })
}

/// Pilot grid resolution used to estimate the candidate pitch.
pub const PILOT_COUNT: usize = 9;

/// Candidate grid over the window with per-axis pitch ≤ min r(x)/(2√g_ii(x)),
/// estimated from a pilot radius field; `pitch` overrides the estimate with
/// pitch_i = pitch · min_x 1/√g_ii(x).
pub fn candidate_grid(
    m: &ChartedManifold,
    class: u8,
    epsilon: f64,
    sampler: &Sampler,
    pitch: Option<f64>,
    exec: Exec,
) -> Result<Grid> {
    let w = m.window();
    let pilot = Grid::uniform(w, PILOT_COUNT);
    let pts = pilot.points();
    let n = m.n();
    let base = match pitch {
        Some(p) if p > 0.0 => vec![p; pts.len()],
        Some(p) => return Err(Error::InvalidParams(format!("grid pitch must be positive, got {p}"))),
        None => {
            let field = RadiusField::on_grid(m, &pilot, class, epsilon, sampler, exec)?;
            field.samples().iter().map(|s| s.radius / BASE_DIVISOR / 2.0).collect()
        }
    };
    let mut step = vec![f64::INFINITY; n];
    for (p, b) in pts.iter().zip(&base) {
        let g = m.chart().metric(p);
        for i in 0..n {
            step[i] = step[i].min(b / g[(i, i)].sqrt());
        }
    }
    let (lo, hi) = (w.lo(), w.hi());
    let counts = (0..n).map(|i| (((hi[i] - lo[i]) / step[i]).ceil() as usize).max(1) + 1).collect();
    Ok(Grid::new(lo, hi, counts))
}

/// Everything `cover` needs: the candidate grid, its radius field, the
/// covering and probe statistics on the refined grid.
pub struct CoverRun {
    pub grid: Grid,
    pub field: RadiusField,
    pub covering: Covering,
}

pub fn cover_window(
    m: &ChartedManifold,
    class: u8,
    epsilon: f64,
    sampler: &Sampler,
    pitch: Option<f64>,
    exec: Exec,
) -> Result<CoverRun> {
    let grid = candidate_grid(m, class, epsilon, sampler, pitch, exec)?;
    let field = RadiusField::on_grid(m, &grid, class, epsilon, sampler, exec)?;
    let probes = grid.refined(PROBE_REFINEMENT).points();
    let covering = vitali_cover(m, &field, field.points(), &probes, exec)?;
    Ok(CoverRun { grid, field, covering })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_closed_form() {
        let (t, t1) = overlap_bound(2, 0.1);
        assert!((t - 1.1 / 0.9 * 1e4).abs() < 1e-8);
        assert!((t1 - 4.0 * t).abs() < 1e-8);
    }
}
