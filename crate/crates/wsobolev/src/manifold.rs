//! Charted manifolds: coordinate charts carrying a metric evaluator, an
//! integration window, and the built-in test family.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_diagonal, Mat};

/// Step of the central differences used when a chart has no analytic partials.
pub const METRIC_FD_STEP: f64 = 1e-5;

/// Minimal distance between a Poincaré window and the unit sphere.
pub const SINGULAR_MARGIN: f64 = 0.05;

/// A metric tensor field on a coordinate domain.
pub trait MetricModel: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn metric(&self, x: &[f64]) -> Mat;
    /// Analytic ∂_k g_ij, indexed `[k][(i, j)]`.
    fn partials(&self, _x: &[f64]) -> Option<Vec<Mat>> {
        None
    }
}

#[derive(Debug, Clone)]
pub struct FlatMetric {
    pub n: usize,
}

impl MetricModel for FlatMetric {
    fn dim(&self) -> usize {
        self.n
    }
    fn metric(&self, _x: &[f64]) -> Mat {
        Mat::identity(self.n, self.n)
    }
    fn partials(&self, _x: &[f64]) -> Option<Vec<Mat>> {
        Some(vec![Mat::zeros(self.n, self.n); self.n])
    }
}

/// g = 4/(1 + σ|x|²)² δ; σ = +1 is the stereographic sphere, σ = -1 the
/// Poincaré ball.
#[derive(Debug, Clone)]
pub struct ConformalMetric {
    pub n: usize,
    pub sigma: f64,
}

impl ConformalMetric {
    fn factor(&self, x: &[f64]) -> (f64, f64) {
        let s: f64 = x.iter().map(|v| v * v).sum();
        let q = 1.0 + self.sigma * s;
        (4.0 / (q * q), q)
    }
}

impl MetricModel for ConformalMetric {
    fn dim(&self) -> usize {
        self.n
    }
    fn metric(&self, x: &[f64]) -> Mat {
        let (f, _) = self.factor(x);
        Mat::identity(self.n, self.n) * f
    }
    fn partials(&self, x: &[f64]) -> Option<Vec<Mat>> {
        let (_, q) = self.factor(x);
        Some(
            (0..self.n)
                .map(|k| Mat::identity(self.n, self.n) * (-16.0 * self.sigma * x[k] / (q * q * q)))
                .collect(),
        )
    }
}

/// dt² + e^{-2t} dθ² (+ Σ dz² for the extra flat axes when n ≥ 3).
#[derive(Debug, Clone)]
pub struct CuspMetric {
    pub n: usize,
}

impl MetricModel for CuspMetric {
    fn dim(&self) -> usize {
        self.n
    }
    fn metric(&self, x: &[f64]) -> Mat {
        let mut g = Mat::identity(self.n, self.n);
        g[(1, 1)] = (-2.0 * x[0]).exp();
        g
    }
    fn partials(&self, x: &[f64]) -> Option<Vec<Mat>> {
        let mut out = vec![Mat::zeros(self.n, self.n); self.n];
        out[0][(1, 1)] = -2.0 * (-2.0 * x[0]).exp();
        Some(out)
    }
}

/// Metric given by a closure, without analytic partials.
pub struct FnMetric {
    pub n: usize,
    pub f: Box<dyn Fn(&[f64]) -> Mat + Send + Sync>,
}

impl fmt::Debug for FnMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnMetric(n = {})", self.n)
    }
}

impl MetricModel for FnMetric {
    fn dim(&self) -> usize {
        self.n
    }
    fn metric(&self, x: &[f64]) -> Mat {
        (self.f)(x)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    /// Axis-aligned box; bounds may be infinite.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub id: usize,
    pub domain: Domain,
    /// Per-axis period; a periodic axis spans `[lo, lo + period)` of a box domain.
    pub periods: Vec<Option<f64>>,
    model: Arc<dyn MetricModel>,
}

impl Chart {
    pub fn new(id: usize, domain: Domain, model: Arc<dyn MetricModel>) -> Self {
        let n = model.dim();
        Chart { id, domain, periods: vec![None; n], model }
    }

    /// Declares `axis` periodic; the box bounds on that axis become `[lo, lo + period]`.
    pub fn with_period(mut self, axis: usize, period: f64) -> Self {
        if let Domain::Box { lo, hi } = &mut self.domain {
            hi[axis] = lo[axis] + period;
        }
        self.periods[axis] = Some(period);
        self
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn model(&self) -> &Arc<dyn MetricModel> {
        &self.model
    }

    fn axis_lo(&self, axis: usize) -> f64 {
        match &self.domain {
            Domain::Box { lo, .. } => lo[axis],
            Domain::Ball { .. } => 0.0,
        }
    }

    /// Maps periodic coordinates into their fundamental interval.
    pub fn wrap(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        self.wrap_in_place(&mut y);
        y
    }

    pub fn wrap_in_place(&self, y: &mut [f64]) {
        for (i, p) in self.periods.iter().enumerate() {
            if let Some(l) = p {
                let lo = self.axis_lo(i);
                y[i] = lo + (y[i] - lo).rem_euclid(*l);
            }
        }
    }

    /// Replaces a coordinate difference by its minimal periodic image.
    pub fn min_image(&self, d: &mut [f64]) {
        for (i, p) in self.periods.iter().enumerate() {
            if let Some(l) = p {
                d[i] -= l * (d[i] / l).round();
            }
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match &self.domain {
            Domain::Box { lo, hi } => {
                (0..x.len()).all(|i| self.periods[i].is_some() || (x[i] >= lo[i] && x[i] <= hi[i]))
            }
            Domain::Ball { center, radius } => {
                let d: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                d.sqrt() < *radius
            }
        }
    }

    pub fn metric(&self, x: &[f64]) -> Mat {
        self.model.metric(x)
    }

    pub fn has_analytic_partials(&self, x: &[f64]) -> bool {
        self.model.partials(x).is_some()
    }

    /// ∂_k g_ij at x: analytic when available, otherwise central differences.
    pub fn metric_partials(&self, x: &[f64]) -> Result<Vec<Mat>> {
        if let Some(p) = self.model.partials(x) {
            return Ok(p);
        }
        self.fd_partials(x)
    }

    /// Central-difference partials (step [`METRIC_FD_STEP`]) regardless of
    /// analytic availability.
    pub fn fd_partials(&self, x: &[f64]) -> Result<Vec<Mat>> {
        let n = self.dim();
        let h = METRIC_FD_STEP;
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[k] += h;
            xm[k] -= h;
            if !self.contains(&xp) || !self.contains(&xm) {
                return Err(Error::NearBoundary(x.to_vec()));
            }
            out.push((self.metric(&xp) - self.metric(&xm)) / (2.0 * h));
        }
        Ok(out)
    }

    /// Largest R such that x + A⁻¹·B(0, R) stays inside the domain.
    pub fn room(&self, x: &[f64], a_inv: &Mat) -> f64 {
        let n = self.dim();
        match &self.domain {
            Domain::Box { lo, hi } => {
                let mut r = f64::INFINITY;
                for i in 0..n {
                    let ext = (0..n).map(|j| a_inv[(i, j)] * a_inv[(i, j)]).sum::<f64>().sqrt();
                    let gap = match self.periods[i] {
                        Some(l) => 0.5 * l,
                        None => (x[i] - lo[i]).min(hi[i] - x[i]),
                    };
                    r = r.min(gap / ext);
                }
                r.max(0.0)
            }
            Domain::Ball { center, radius } => {
                let d: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                let spectral = crate::linalg::sym_eigenvalues(&(a_inv.transpose() * a_inv))
                    .last()
                    .copied()
                    .unwrap_or(0.0)
                    .sqrt();
                ((radius - d) / spectral).max(0.0)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinKind {
    Euclidean,
    SphereStereo,
    PoincareBall,
    HyperbolicCusp,
}

impl BuiltinKind {
    pub fn name(self) -> &'static str {
        match self {
            BuiltinKind::Euclidean => "euclidean",
            BuiltinKind::SphereStereo => "sphere_stereo",
            BuiltinKind::PoincareBall => "poincare_ball",
            BuiltinKind::HyperbolicCusp => "hyperbolic_cusp",
        }
    }
}

impl FromStr for BuiltinKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(BuiltinKind::Euclidean),
            "sphere_stereo" => Ok(BuiltinKind::SphereStereo),
            "poincare_ball" => Ok(BuiltinKind::PoincareBall),
            "hyperbolic_cusp" => Ok(BuiltinKind::HyperbolicCusp),
            other => Err(Error::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub center: Vec<f64>,
    pub halfwidths: Vec<f64>,
}

/// The JSON manifold description accepted by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    pub kind: String,
    pub n: usize,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub window: WindowSpec,
}

impl ManifoldSpec {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn build(&self) -> Result<ChartedManifold> {
        let kind: BuiltinKind = self.kind.parse()?;
        make_builtin(kind, self.n, &self.params, Some(self.window.clone()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    pub chart: usize,
    pub center: Vec<f64>,
    pub halfwidths: Vec<f64>,
}

impl Window {
    pub fn lo(&self) -> Vec<f64> {
        self.center.iter().zip(&self.halfwidths).map(|(c, h)| c - h).collect()
    }
    pub fn hi(&self) -> Vec<f64> {
        self.center.iter().zip(&self.halfwidths).map(|(c, h)| c + h).collect()
    }
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.center.iter().zip(&self.halfwidths))
            .all(|(v, (c, h))| (v - c).abs() <= *h)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub chart: usize,
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point { chart: 0, coords }
    }
}

#[derive(Clone, Debug)]
pub struct ChartedManifold {
    n: usize,
    kind: Option<BuiltinKind>,
    spec: Option<ManifoldSpec>,
    charts: Vec<Chart>,
    window: Window,
}

impl ChartedManifold {
    /// A manifold from an arbitrary chart; the window must lie in its domain.
    pub fn from_chart(chart: Chart, window: WindowSpec) -> Result<Self> {
        let n = chart.dim();
        let m = ChartedManifold {
            n,
            kind: None,
            spec: None,
            charts: vec![chart],
            window: Window { chart: 0, center: window.center, halfwidths: window.halfwidths },
        };
        m.check_window()?;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn kind(&self) -> Option<BuiltinKind> {
        self.kind
    }
    pub fn spec(&self) -> Option<&ManifoldSpec> {
        self.spec.as_ref()
    }
    pub fn window(&self) -> &Window {
        &self.window
    }
    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }
    /// The chart carrying the window.
    pub fn chart(&self) -> &Chart {
        &self.charts[self.window.chart]
    }

    pub fn spec_json(&self) -> serde_json::Value {
        match &self.spec {
            Some(s) => serde_json::to_value(s).unwrap_or(serde_json::Value::Null),
            None => serde_json::json!({ "kind": "custom", "n": self.n }),
        }
    }

    fn check_window(&self) -> Result<()> {
        let w = &self.window;
        if w.center.len() != self.n || w.halfwidths.len() != self.n {
            return Err(Error::InvalidSpec("window dimension does not match n".into()));
        }
        if w.halfwidths.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
            return Err(Error::InvalidSpec("window halfwidths must be positive".into()));
        }
        let chart = self.chart();
        if chart.model.dim() != self.n {
            return Err(Error::InvalidSpec("metric dimension does not match n".into()));
        }
        let (lo, hi) = (w.lo(), w.hi());
        match &chart.domain {
            Domain::Box { lo: dlo, hi: dhi } => {
                for i in 0..self.n {
                    let ok = match chart.periods[i] {
                        Some(_) => lo[i] >= dlo[i] - 1e-12 && hi[i] <= dhi[i] + 1e-12,
                        None => lo[i] > dlo[i] && hi[i] < dhi[i],
                    };
                    if !ok {
                        return Err(Error::InvalidSpec(format!(
                            "window axis {i} [{}, {}] not inside chart domain [{}, {}]",
                            lo[i], hi[i], dlo[i], dhi[i]
                        )));
                    }
                }
            }
            Domain::Ball { center, radius } => {
                let far: f64 = (0..self.n)
                    .map(|i| {
                        let a = (lo[i] - center[i]).abs().max((hi[i] - center[i]).abs());
                        a * a
                    })
                    .sum::<f64>()
                    .sqrt();
                if far >= *radius {
                    return Err(Error::SingularWindow(format!(
                        "window corner at distance {far} from the center, chart radius {radius}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_point(&self, p: &Point) -> Result<&Chart> {
        let chart = self
            .charts
            .get(p.chart)
            .ok_or_else(|| Error::InvalidSpec(format!("no chart with id {}", p.chart)))?;
        if !chart.contains(&p.coords) {
            return Err(Error::OutsideDomain(p.coords.clone()));
        }
        Ok(chart)
    }

    pub fn metric_at(&self, p: &Point) -> Result<Mat> {
        let chart = self.check_point(p)?;
        Ok(chart.metric(&p.coords))
    }

    pub fn metric_partials_at(&self, p: &Point) -> Result<Vec<Mat>> {
        let chart = self.check_point(p)?;
        chart.metric_partials(&p.coords)
    }

    pub fn volume_element(&self, p: &Point) -> Result<f64> {
        let g = self.metric_at(p)?;
        sqrt_det(&g).ok_or_else(|| Error::NotPositiveDefinite(p.coords.clone()))
    }

    /// Named closed-form quantities of the builtins.
    ///
    /// * `sectional_curvature` (argument ignored): the constant curvature, if any.
    /// * `geodesic_ball_radius`: chart radius of the geodesic ball of radius ρ at the origin.
    /// * `geodesic_ball_area`: its area (n = 2).
    pub fn oracle(&self, name: &str, arg: f64) -> Option<f64> {
        match (self.kind?, name) {
            (BuiltinKind::Euclidean, "sectional_curvature") => Some(0.0),
            (BuiltinKind::SphereStereo, "sectional_curvature") => Some(1.0),
            (BuiltinKind::PoincareBall, "sectional_curvature") => Some(-1.0),
            (BuiltinKind::HyperbolicCusp, "sectional_curvature") if self.n == 2 => Some(-1.0),
            (BuiltinKind::PoincareBall, "geodesic_ball_radius") => Some((0.5 * arg).tanh()),
            (BuiltinKind::PoincareBall, "geodesic_ball_area") if self.n == 2 => {
                Some(4.0 * PI * (0.5 * arg).sinh().powi(2))
            }
            (BuiltinKind::Euclidean, "geodesic_ball_radius") => Some(arg),
            _ => None,
        }
    }
}

pub fn sqrt_det(g: &Mat) -> Option<f64> {
    let d = if is_diagonal(g) { (0..g.nrows()).map(|i| g[(i, i)]).product() } else { g.determinant() };
    if d > 0.0 {
        Some(d.sqrt())
    } else {
        None
    }
}

fn param(params: &BTreeMap<String, f64>, allowed: &[&str], key: &str, default: f64) -> Result<f64> {
    for k in params.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::InvalidSpec(format!("unknown parameter `{k}`")));
        }
    }
    let v = params.get(key).copied().unwrap_or(default);
    if !v.is_finite() {
        return Err(Error::InvalidSpec(format!("parameter `{key}` must be finite")));
    }
    Ok(v)
}

fn default_window(kind: BuiltinKind, n: usize, t_max: f64, period: f64) -> WindowSpec {
    match kind {
        BuiltinKind::Euclidean | BuiltinKind::SphereStereo => {
            WindowSpec { center: vec![0.0; n], halfwidths: vec![1.0; n] }
        }
        BuiltinKind::PoincareBall => WindowSpec { center: vec![0.0; n], halfwidths: vec![0.8 / (n as f64).sqrt(); n] },
        BuiltinKind::HyperbolicCusp => {
            let mut center = vec![0.0; n];
            let mut half = vec![0.5; n];
            center[0] = 0.5 * t_max;
            half[0] = 0.3 * t_max;
            center[1] = 0.5 * period;
            half[1] = 0.5 * period;
            WindowSpec { center, halfwidths: half }
        }
    }
}

/// Builds one of the test manifolds.
///
/// Parameters: `sphere_stereo` takes `extent` (chart box `[-extent, extent]ⁿ`,
/// default 3); `poincare_ball` takes `margin` (chart `|x| < 1 - margin`,
/// default and minimum 0.05); `hyperbolic_cusp` takes `t_max` (default 5) and
/// `theta_period` (default 2π). For n ≥ 3 the cusp carries n - 2 extra flat
/// axes (cusp × interval).
pub fn make_builtin(
    kind: BuiltinKind,
    n: usize,
    params: &BTreeMap<String, f64>,
    window: Option<WindowSpec>,
) -> Result<ChartedManifold> {
    if n == 0 || n > 4 {
        return Err(Error::InvalidSpec(format!("dimension {n} outside 1..=4")));
    }
    let inf = f64::INFINITY;
    let (chart, t_max, period) = match kind {
        BuiltinKind::Euclidean => {
            param(params, &[], "", 0.0)?;
            let dom = Domain::Box { lo: vec![-inf; n], hi: vec![inf; n] };
            (Chart::new(0, dom, Arc::new(FlatMetric { n })), 0.0, 0.0)
        }
        BuiltinKind::SphereStereo => {
            let e = param(params, &["extent"], "extent", 3.0)?;
            if !(e > 0.0) {
                return Err(Error::SingularWindow("stereographic chart needs a finite positive extent".into()));
            }
            let dom = Domain::Box { lo: vec![-e; n], hi: vec![e; n] };
            (Chart::new(0, dom, Arc::new(ConformalMetric { n, sigma: 1.0 })), 0.0, 0.0)
        }
        BuiltinKind::PoincareBall => {
            let m = param(params, &["margin"], "margin", SINGULAR_MARGIN)?;
            if !(SINGULAR_MARGIN..1.0).contains(&m) {
                return Err(Error::SingularWindow(format!("margin {m} must lie in [0.05, 1)")));
            }
            let dom = Domain::Ball { center: vec![0.0; n], radius: 1.0 - m };
            (Chart::new(0, dom, Arc::new(ConformalMetric { n, sigma: -1.0 })), 0.0, 0.0)
        }
        BuiltinKind::HyperbolicCusp => {
            if n < 2 {
                return Err(Error::InvalidSpec("hyperbolic_cusp needs n ≥ 2".into()));
            }
            let allowed = ["t_max", "theta_period"];
            let t_max = param(params, &allowed, "t_max", 5.0)?;
            let period = param(params, &allowed, "theta_period", 2.0 * PI)?;
            if !(t_max > 0.0) || !(period > 0.0) {
                return Err(Error::InvalidSpec("t_max and theta_period must be positive".into()));
            }
            let mut lo = vec![-inf; n];
            let mut hi = vec![inf; n];
            lo[0] = 0.0;
            hi[0] = t_max;
            lo[1] = 0.0;
            let chart = Chart::new(0, Domain::Box { lo, hi }, Arc::new(CuspMetric { n })).with_period(1, period);
            (chart, t_max, period)
        }
    };
    let window = window.unwrap_or_else(|| default_window(kind, n, t_max, period));
    let spec = ManifoldSpec { kind: kind.name().to_string(), n, params: params.clone(), window: window.clone() };
    let m = ChartedManifold {
        n,
        kind: Some(kind),
        spec: Some(spec),
        charts: vec![chart],
        window: Window { chart: 0, center: window.center, halfwidths: window.halfwidths },
    };
    m.check_window()?;
    Ok(m)
}

/// Shorthand for a builtin with explicit window.
pub fn builtin(kind: BuiltinKind, n: usize, params: &[(&str, f64)], center: &[f64], halfwidths: &[f64]) -> Result<ChartedManifold> {
    let params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    make_builtin(kind, n, &params, Some(WindowSpec { center: center.to_vec(), halfwidths: halfwidths.to_vec() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_examples() {
        let e = builtin(BuiltinKind::Euclidean, 2, &[], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(e.metric_at(&Point::new(vec![0.3, -0.7])).unwrap(), Mat::identity(2, 2));
        let p = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.0, 0.0], &[0.5, 0.5]).unwrap();
        assert_eq!(p.metric_at(&Point::new(vec![0.0, 0.0])).unwrap(), Mat::identity(2, 2) * 4.0);
        let g = p.metric_at(&Point::new(vec![0.5, 0.0])).unwrap();
        assert!((g[(0, 0)] - 64.0 / 9.0).abs() < 1e-14);
        assert_eq!(p.volume_element(&Point::new(vec![0.0, 0.0])).unwrap(), 4.0);
        let s = builtin(BuiltinKind::SphereStereo, 2, &[], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((s.metric_at(&Point::new(vec![1.0, 0.0])).unwrap() - Mat::identity(2, 2)).norm() < 1e-15);
        let c = builtin(BuiltinKind::HyperbolicCusp, 2, &[("t_max", 5.0)], &[2.5, PI], &[2.0, PI]).unwrap();
        let g = c.metric_at(&Point::new(vec![2.0, 0.0])).unwrap();
        assert_eq!(g[(0, 0)], 1.0);
        assert!((g[(1, 1)] - (-4.0f64).exp()).abs() < 1e-16);
        assert!((c.volume_element(&Point::new(vec![3.0, 1.0])).unwrap() - (-3.0f64).exp()).abs() < 1e-15);
        let d = c.metric_partials_at(&Point::new(vec![1.0, 0.0])).unwrap();
        assert!((d[0][(1, 1)] + 2.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(d[1].norm(), 0.0);
    }

    #[test]
    fn errors() {
        assert!(matches!("torus".parse::<BuiltinKind>(), Err(Error::UnknownKind(_))));
        assert!(matches!(
            builtin(BuiltinKind::PoincareBall, 2, &[], &[0.0, 0.0], &[0.7, 0.7]),
            Err(Error::SingularWindow(_))
        ));
        assert!(builtin(BuiltinKind::HyperbolicCusp, 2, &[("t_max", 5.0)], &[4.5, 1.0], &[1.0, 0.5]).is_err());
        assert!(builtin(BuiltinKind::Euclidean, 2, &[("bogus", 1.0)], &[0.0, 0.0], &[1.0, 1.0]).is_err());
        let p = builtin(BuiltinKind::PoincareBall, 2, &[], &[0.0, 0.0], &[0.5, 0.5]).unwrap();
        assert!(matches!(p.metric_at(&Point::new(vec![0.99, 0.0])), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn periodic_wrap() {
        let c = builtin(BuiltinKind::HyperbolicCusp, 2, &[("theta_period", 0.2)], &[2.0, 0.1], &[1.0, 0.1]).unwrap();
        let ch = c.chart();
        let w = ch.wrap(&[1.0, 0.25]);
        assert!((w[1] - 0.05).abs() < 1e-15);
        let mut d = vec![0.0, 0.19];
        ch.min_image(&mut d);
        assert!((d[1] + 0.01).abs() < 1e-15);
    }
}
