use crate::error::{Error, Result};
use crate::linalg::{spd_inverse, Mat};
use crate::manifold::{Chart, ChartedManifold, Point};

/// Γ^k_ij stored at `k·n² + i·n + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Christoffel {
    pub fn zero(n: usize) -> Self {
        Christoffel { n, data: vec![0.0; n * n * n] }
    }

    /// Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il - ∂_l g_ij).
    pub fn from_metric(g_inv: &Mat, dg: &[Mat]) -> Self {
        let n = g_inv.nrows();
        let mut lowered = vec![0.0; n * n * n];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    lowered[l * n * n + i * n + j] = 0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
            }
        }
        let mut data = vec![0.0; n * n * n];
        for k in 0..n {
            for l in 0..n {
                let gkl = g_inv[(k, l)];
                if gkl == 0.0 {
                    continue;
                }
                for ij in 0..n * n {
                    data[k * n * n + ij] += gkl * lowered[l * n * n + ij];
                }
            }
        }
        Christoffel { n, data }
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.n + i) * self.n + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn christoffel_at(chart: &Chart, x: &[f64]) -> Result<Christoffel> {
    let g = chart.metric(x);
    let g_inv = spd_inverse(&g).ok_or_else(|| Error::NotPositiveDefinite(x.to_vec()))?;
    let dg = chart.metric_partials(x)?;
    Ok(Christoffel::from_metric(&g_inv, &dg))
}

pub fn christoffel(m: &ChartedManifold, p: &Point) -> Result<Christoffel> {
    let chart = &m.charts()[p.chart];
    if !chart.contains(&p.coords) {
        return Err(Error::OutsideDomain(p.coords.clone()));
    }
    christoffel_at(chart, &p.coords)
}
