//! Seeded families of compactly supported test fields.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::admissible::AdmissibleBall;
use crate::error::Result;
use crate::fields::{Affine, AxisProfile, Bump, Combination, Scalar};
use crate::geometry::FormField;
use crate::linalg::{binomial, combinations, minor};
use crate::manifold::ChartedManifold;

/// Window axes that span a full period of the chart get periodic profiles.
fn full_period(m: &ChartedManifold, axis: usize) -> Option<f64> {
    let l = m.chart().periods[axis]?;
    (2.0 * m.window().halfwidths[axis] >= l * (1.0 - 1e-12)).then_some(l)
}

fn random_form<R: Rng>(rng: &mut R, n: usize, degree: usize, axes: &[AxisProfile]) -> Result<FormField> {
    let coeffs: Vec<Scalar> =
        (0..binomial(n, degree)).map(|_| Bump::random_modulated(rng, axes.to_vec()).into_scalar()).collect();
    FormField::new(n, degree, coeffs)
}

/// Axis profiles of a bump at `center` with the given half-widths; full-period
/// axes become periodic modulations.
pub fn window_axes<R: Rng>(m: &ChartedManifold, center: &[f64], halfwidths: &[f64], rng: &mut R) -> Vec<AxisProfile> {
    (0..m.n())
        .map(|i| match full_period(m, i) {
            Some(period) => AxisProfile::Periodic {
                center: center[i],
                period,
                amplitude: rng.random_range(0.2..0.6),
                harmonic: 1,
            },
            None => AxisProfile::Compact { center: center[i], halfwidth: halfwidths[i] },
        })
        .collect()
}

/// `count` random p-forms (functions for p = 0) on the window. Each bump
/// has half-width `scale`·(window half-width) on every bounded axis and a
/// uniformly drawn center keeping the support inside the window.
pub fn window_suite(m: &ChartedManifold, degree: usize, count: usize, scale: f64, seed: u64) -> Result<Vec<FormField>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = m.window();
    let (lo, hi) = (w.lo(), w.hi());
    let half: Vec<f64> = w.halfwidths.iter().map(|h| h * scale).collect();
    (0..count)
        .map(|_| {
            let center: Vec<f64> = (0..m.n())
                .map(|i| {
                    let (a, b) = (lo[i] + half[i], hi[i] - half[i]);
                    if full_period(m, i).is_some() || b <= a {
                        rng.random_range(lo[i]..=hi[i])
                    } else {
                        rng.random_range(a..=b)
                    }
                })
                .collect();
            let axes = window_axes(m, &center, &half, &mut rng);
            random_form(&mut rng, m.n(), degree, &axes)
        })
        .collect()
}

/// A random p-form bump with explicit center and half-widths.
pub fn bump_form_at(m: &ChartedManifold, degree: usize, center: &[f64], halfwidths: &[f64], seed: u64) -> Result<FormField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let axes = window_axes(m, center, halfwidths, &mut rng);
    random_form(&mut rng, m.n(), degree, &axes)
}

/// `count` random p-forms supported in the unit ball of ℝⁿ: centers within
/// 0.25 of the origin, half-widths in [0.25, 0.65]/√n.
pub fn unit_ball_suite(n: usize, degree: usize, count: usize, seed: u64) -> Result<Vec<FormField>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root = (n as f64).sqrt();
    (0..count)
        .map(|_| {
            let dir: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            let rad = 0.25 * rng.random::<f64>();
            let axes: Vec<AxisProfile> = dir
                .iter()
                .map(|d| AxisProfile::Compact {
                    center: d / len * rad,
                    halfwidth: rng.random_range(0.25..0.65) / root,
                })
                .collect();
            random_form(&mut rng, n, degree, &axes)
        })
        .collect()
}

/// Transplants a form on the unit ball to an admissible ball through
/// φ(y) = A(y - x)/R: ω_I(y) = Σ_J v_J(φ(y))·det(A/R)_{J,I}.
pub fn map_to_ball(v: &FormField, ball: &AdmissibleBall) -> Result<FormField> {
    let (n, p) = (v.n(), v.degree());
    let lin = &ball.normalizer.a / ball.radius;
    let composed: Vec<Scalar> = v
        .coeffs()
        .iter()
        .map(|c| {
            let mut a = Affine::new(c.clone(), ball.center.coords.clone(), lin.clone());
            a.periods = vec![None; n];
            Arc::new(a) as Scalar
        })
        .collect();
    let basis = combinations(n, p);
    let coeffs = basis
        .iter()
        .map(|i| Combination::new(n, basis.iter().zip(&composed).map(|(j, f)| (minor(&lin, j, i), f.clone())).collect()))
        .collect();
    FormField::new(n, p, coeffs)
}
