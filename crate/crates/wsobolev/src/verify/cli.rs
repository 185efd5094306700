//! `wsobolev` command line: radius | cover | embed | gaffney | curvature | kato.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::admissible::{random_window_points, AdmissibleBall, Grid, RadiusField, Sampler};
use crate::covering::{candidate_grid, overlap_bound, select, PROBE_REFINEMENT};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::manifold::{ChartedManifold, ManifoldSpec, Point};
use crate::norms::{Numerics, SobolevParams};

use super::report::{CoverReport, ExperimentReport, Row, Summary};
use super::suites::{unit_ball_suite, window_suite};
use super::{check_kato, run_curvature, run_embedding_experiment, run_gaffney_global, run_gaffney_local};

#[derive(Debug, Parser)]
#[command(name = "wsobolev", version, about = "Weighted Sobolev and Gaffney inequalities on test manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Manifold spec (JSON).
    #[arg(long)]
    pub manifold: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Admissibility class, 0 or 1.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub class: u8,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Gauss–Legendre nodes per axis on boxes (half as many on balls).
    #[arg(long, default_value_t = 48)]
    pub nodes: usize,
    /// Record wall-clock time in the report.
    #[arg(long)]
    pub timing: bool,
    /// Disable data parallelism.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Admissible radii R_{0,ε}, R_{1,ε} on a grid over the window.
    Radius {
        #[command(flatten)]
        common: Common,
        /// Grid nodes per axis.
        #[arg(long, default_value_t = 17)]
        grid: usize,
        /// CSV path; stdout when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Vitali covering of the window and its overlap.
    Cover {
        #[command(flatten)]
        common: Common,
        /// Candidate pitch in normalized units (default: derived from R_ε).
        #[arg(long)]
        grid_pitch: Option<f64>,
    },
    /// Weighted embedding W^{m,r}(M, R^γ) ⊂ W^{k,s}(M, R^ν).
    Embed {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.5)]
        r: f64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value_t = 20)]
        suite_size: usize,
        /// Radius-field grid nodes per axis.
        #[arg(long, default_value_t = 9)]
        grid: usize,
    },
    /// Local and global Gaffney inequalities for p-forms.
    Gaffney {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, default_value_t = 8)]
        suite_size: usize,
        /// Number of admissible balls for the local inequality.
        #[arg(long, default_value_t = 3)]
        balls: usize,
        #[arg(long, default_value_t = 9)]
        grid: usize,
    },
    /// Sectional/Ricci curvature and Christoffel bounds at sample points.
    Curvature {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Pointwise Kato inequality.
    Kato {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        suite_size: usize,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Radius { common, .. }
            | Command::Cover { common, .. }
            | Command::Embed { common, .. }
            | Command::Gaffney { common, .. }
            | Command::Curvature { common, .. }
            | Command::Kato { common, .. } => common,
        }
    }
}

fn exec_of(c: &Common) -> Exec {
    if c.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn finish(mut report: ExperimentReport, common: &Common, start: Instant) -> Result<bool> {
    if common.timing {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    write_output(common.out.as_ref(), &report.to_json()?)?;
    Ok(report.passed())
}

#[derive(Serialize)]
struct RadiusParams {
    epsilon: f64,
    grid: Vec<usize>,
    sampler_points: usize,
}

/// CSV table `x1,...,xn,R0,R1`.
pub fn radius_csv(points: &[Vec<f64>], r0: &[f64], r1: &[f64]) -> Result<String> {
    let n = points.first().map(|p| p.len()).unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.extend(["R0".to_string(), "R1".to_string()]);
    w.write_record(&header).map_err(csv_error)?;
    for ((p, a), b) in points.iter().zip(r0).zip(r1) {
        let record: Vec<String> = p.iter().chain([a, b]).map(|v| v.to_string()).collect();
        w.write_record(&record).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn run_radius(m: &ChartedManifold, c: &Common, grid: usize, csv: Option<&PathBuf>, start: Instant) -> Result<bool> {
    let sampler = Sampler::standard(m.n());
    let g = Grid::uniform(m.window(), grid.max(1));
    let exec = exec_of(c);
    let f0 = RadiusField::on_grid(m, &g, 0, c.epsilon, &sampler, exec)?;
    let f1 = RadiusField::on_grid(m, &g, 1, c.epsilon, &sampler, exec)?;
    let r0: Vec<f64> = f0.samples().iter().map(|s| s.radius).collect();
    let r1: Vec<f64> = f1.samples().iter().map(|s| s.radius).collect();
    let text = radius_csv(f0.points(), &r0, &r1)?;
    match csv {
        Some(p) => std::fs::write(p, &text)?,
        None => write_output(None, text.trim_end())?,
    }
    let rows: Vec<Row> = r0
        .iter()
        .zip(&r1)
        .enumerate()
        .map(|(i, (a, b))| Row::new(format!("x{i}"), *b, *a))
        .collect();
    let mut summary = Summary::from_rows(&rows);
    let in_range = r0.iter().chain(&r1).all(|r| *r > 0.0 && *r <= 1.0);
    let ordered = r0.iter().zip(&r1).all(|(a, b)| *b <= a * (1.0 + 2.0 * crate::admissible::BISECTION_TOL));
    summary
        .threshold("max_radius", 1.0)
        .threshold("class_order_slack", 2.0 * crate::admissible::BISECTION_TOL)
        .note("min_R0", f0.min_radius())
        .note("max_R0", f0.max_radius())
        .note("min_R1", f1.min_radius())
        .note("max_R1", f1.max_radius())
        .assert("range", in_range)
        .assert("class_order", ordered);
    let params = RadiusParams { epsilon: c.epsilon, grid: g.counts.clone(), sampler_points: sampler.len() };
    let mut report = ExperimentReport::new("radius", m.spec_json(), params, rows, summary);
    if c.timing {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    if let Some(p) = &c.out {
        std::fs::write(p, report.to_json()?)?;
    }
    Ok(report.passed())
}

#[derive(Serialize)]
struct CoverParams {
    epsilon: f64,
    class: u8,
    grid: Vec<usize>,
    grid_pitch: Option<f64>,
    probes: usize,
}

fn run_cover(m: &ChartedManifold, c: &Common, pitch: Option<f64>, start: Instant) -> Result<bool> {
    let sampler = Sampler::standard(m.n());
    let exec = exec_of(c);
    let grid = candidate_grid(m, c.class, c.epsilon, &sampler, pitch, exec)?;
    let field = RadiusField::on_grid(m, &grid, c.class, c.epsilon, &sampler, exec)?;
    let cover = select(m, &field, field.points(), exec)?;
    let probes = grid.refined(PROBE_REFINEMENT).points();
    let stats = cover.overlap_stats(&probes, exec);
    let (t, t1) = overlap_bound(m.n(), c.epsilon);
    let mut summary = Summary::from_rows(&[]);
    summary
        .threshold("T", t)
        .threshold("T1", t1)
        .note("centers", cover.len())
        .note("candidates", cover.candidates)
        .note("probes", stats.probes)
        .note("uncovered", stats.uncovered)
        .note("first_uncovered", &stats.first_uncovered)
        .note("mean_overlap", stats.mean_overlap)
        .note("max_full_overlap", stats.max_full_overlap)
        .note("max_base_overlap", stats.max_base_overlap)
        .note("histogram", &stats.histogram)
        .assert("disjoint", cover.bases_disjoint())
        .assert("coverage", stats.uncovered == 0)
        .assert("overlap_T", stats.max_overlap as f64 <= t)
        .assert("overlap_T1", stats.max_full_overlap as f64 <= t1);
    summary.max_ratio = stats.max_overlap as f64 / t;
    summary.mean_ratio = stats.mean_overlap / t;
    let report = CoverReport {
        experiment: "cover".into(),
        manifold: m.spec_json(),
        params: serde_json::to_value(CoverParams {
            epsilon: c.epsilon,
            class: c.class,
            grid: grid.counts.clone(),
            grid_pitch: pitch,
            probes: probes.len(),
        })?,
        centers: cover.centers.iter().map(|p| p.coords.clone()).collect(),
        radii: cover.radii.clone(),
        max_overlap: stats.max_overlap,
        t,
        t1,
        summary,
        runtime_ms: c.timing.then(|| start.elapsed().as_millis() as u64),
    };
    write_output(c.out.as_ref(), &report.to_json()?)?;
    Ok(report.summary.passed)
}

/// Support scales (fractions of the window half-width) of the two suites.
pub const SUITE_SCALES: [f64; 2] = [0.5, 0.3];

fn window_field(m: &ChartedManifold, c: &Common, grid: usize, sampler: &Sampler) -> Result<RadiusField> {
    RadiusField::on_grid(m, &Grid::uniform(m.window(), grid.max(2)), c.class, c.epsilon, sampler, exec_of(c))
}

/// Admissible class-1 balls at the window center and at seeded window points.
pub fn sample_balls(m: &ChartedManifold, count: usize, epsilon: f64, seed: u64, sampler: &Sampler) -> Result<Vec<AdmissibleBall>> {
    let mut centers = vec![m.window().center.clone()];
    centers.extend(random_window_points(m.window(), count.saturating_sub(1), seed));
    centers
        .into_iter()
        .take(count)
        .map(|x| AdmissibleBall::at_admissible_radius(m, Point::new(x), 1, epsilon, sampler))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn run_embed(m: &ChartedManifold, c: &Common, r: f64, mm: usize, k: usize, gamma: f64, size: usize, grid: usize, start: Instant) -> Result<bool> {
    let params = SobolevParams::new(m.n(), mm, k, r, gamma)?;
    let sampler = Sampler::standard(m.n());
    let field = window_field(m, c, grid, &sampler)?;
    let degree = if c.class == 0 { 0 } else { 1.min(m.n()) };
    let suites = SUITE_SCALES
        .iter()
        .enumerate()
        .map(|(i, &s)| Ok((format!("scale{s}"), window_suite(m, degree, size, s, c.seed.wrapping_add(i as u64))?)))
        .collect::<Result<Vec<_>>>()?;
    let num = Numerics::with_nodes(c.nodes, exec_of(c));
    let report = run_embedding_experiment(m, &params, &field, &suites, &num)?;
    finish(report, c, start)
}

#[allow(clippy::too_many_arguments)]
fn run_gaffney(m: &ChartedManifold, c: &Common, r: f64, degree: usize, size: usize, balls: usize, grid: usize, start: Instant) -> Result<bool> {
    if degree > m.n() {
        return Err(Error::InvalidDegree(format!("degree {degree} exceeds dimension {}", m.n())));
    }
    let sampler = Sampler::standard(m.n());
    let num = Numerics::with_nodes(c.nodes, exec_of(c));
    let bs = sample_balls(m, balls.max(1), c.epsilon, c.seed, &sampler)?;
    let local = run_gaffney_local(m, &bs, &unit_ball_suite(m.n(), degree, size, c.seed)?, r, &num)?;
    let field = window_field(m, c, grid, &sampler)?;
    let suite = window_suite(m, degree, size, SUITE_SCALES[0], c.seed)?;
    let global = run_gaffney_global(m, &suite, r, &field, &num)?;
    let report = ExperimentReport::merge("gaffney", m.spec_json(), vec![("local", local), ("global", global)]);
    finish(report, c, start)
}

/// Runs the CLI on `args` (including the program name); returns the exit
/// code: 0 all assertions pass, 1 an assertion failed, 2 usage or input error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cmd: &Command) -> Result<bool> {
    let start = Instant::now();
    let c = cmd.common();
    if !(c.epsilon > 0.0 && c.epsilon < 0.5) {
        return Err(Error::InvalidParams(format!("epsilon must lie in (0, 1/2), got {}", c.epsilon)));
    }
    let m = ManifoldSpec::load(&c.manifold)?.build()?;
    match cmd {
        Command::Radius { grid, csv, .. } => run_radius(&m, c, *grid, csv.as_ref(), start),
        Command::Cover { grid_pitch, .. } => run_cover(&m, c, *grid_pitch, start),
        Command::Embed { r, m: mm, k, gamma, suite_size, grid, .. } => {
            run_embed(&m, c, *r, *mm, *k, *gamma, *suite_size, *grid, start)
        }
        Command::Gaffney { r, degree, suite_size, balls, grid, .. } => {
            run_gaffney(&m, c, *r, *degree, *suite_size, *balls, *grid, start)
        }
        Command::Curvature { points, .. } => {
            let report = run_curvature(&m, *points, c.seed, c.epsilon, &Sampler::standard(m.n()))?;
            finish(report, c, start)
        }
        Command::Kato { m: order, degree, samples, suite_size, .. } => {
            if *degree > m.n() {
                return Err(Error::InvalidDegree(format!("degree {degree} exceeds dimension {}", m.n())));
            }
            let suite = window_suite(&m, *degree, *suite_size, SUITE_SCALES[0], c.seed)?;
            let report = check_kato(&m, &suite, *order, *samples, c.seed)?;
            finish(report, c, start)
        }
    }
}
