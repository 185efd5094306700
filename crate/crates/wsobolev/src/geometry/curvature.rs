use crate::error::{Error, Result};
use crate::linalg::{quad_form, sym_eigenvalues, sym_sqrt_pair, Mat};
use crate::manifold::{ChartedManifold, Point};

use super::christoffel::{christoffel_at, Christoffel};

/// Step of the central differences of Christoffel symbols.
pub const CURVATURE_FD_STEP: f64 = 1e-4;

/// R^l_{kij} with R(∂_i, ∂_j)∂_k = R^l_{kij} ∂_l, stored at `((l·n + k)·n + i)·n + j`.
#[derive(Clone, Debug)]
pub struct Riemann {
    pub n: usize,
    pub data: Vec<f64>,
    pub metric: Mat,
}

impl Riemann {
    #[inline]
    pub fn get(&self, l: usize, k: usize, i: usize, j: usize) -> f64 {
        let n = self.n;
        self.data[((l * n + k) * n + i) * n + j]
    }

    /// ⟨R(v, w)w, v⟩.
    pub fn curvature_form(&self, v: &[f64], w: &[f64]) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for a in 0..n {
            for l in 0..n {
                let gal = self.metric[(a, l)];
                if gal == 0.0 {
                    continue;
                }
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            s += gal * self.get(l, k, i, j) * v[a] * w[k] * v[i] * w[j];
                        }
                    }
                }
            }
        }
        s
    }
}

/// Riemann tensor from central differences of the Christoffel symbols.
pub fn riemann_at(m: &ChartedManifold, p: &Point) -> Result<Riemann> {
    let chart = &m.charts()[p.chart];
    let x = &p.coords;
    if !chart.contains(x) {
        return Err(Error::OutsideDomain(x.clone()));
    }
    let n = x.len();
    let h = CURVATURE_FD_STEP;
    let gamma = christoffel_at(chart, x)?;
    let mut dgamma: Vec<Christoffel> = Vec::with_capacity(n);
    for m_ in 0..n {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[m_] += h;
        xm[m_] -= h;
        if !chart.contains(&xp) || !chart.contains(&xm) {
            return Err(Error::NearBoundary(x.clone()));
        }
        let (gp, gm) = (christoffel_at(chart, &xp)?, christoffel_at(chart, &xm)?);
        dgamma.push(Christoffel {
            n,
            data: gp.data.iter().zip(&gm.data).map(|(a, b)| (a - b) / (2.0 * h)).collect(),
        });
    }
    let mut data = vec![0.0; n.pow(4)];
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut r = dgamma[i].get(l, j, k) - dgamma[j].get(l, i, k);
                    for q in 0..n {
                        r += gamma.get(l, i, q) * gamma.get(q, j, k) - gamma.get(l, j, q) * gamma.get(q, i, k);
                    }
                    data[((l * n + k) * n + i) * n + j] = r;
                }
            }
        }
    }
    Ok(Riemann { n, data, metric: chart.metric(x) })
}

/// Gram–Schmidt with respect to g; errors when the vectors are parallel.
fn orthonormal_pair(g: &Mat, v: &[f64], w: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let vv = quad_form(g, v, v);
    let ww = quad_form(g, w, w);
    let vw = quad_form(g, v, w);
    let area2 = vv * ww - vw * vw;
    if !(vv > 0.0) || !(ww > 0.0) || area2 <= 1e-20 * vv * ww {
        return Err(Error::DegeneratePlane);
    }
    let e1: Vec<f64> = v.iter().map(|a| a / vv.sqrt()).collect();
    let proj = vw / vv.sqrt();
    let mut e2: Vec<f64> = w.iter().zip(&e1).map(|(b, a)| b - proj * a).collect();
    let nrm = quad_form(g, &e2, &e2).sqrt();
    e2.iter_mut().for_each(|c| *c /= nrm);
    Ok((e1, e2))
}

/// Sectional curvature of the plane spanned by v and w (sphere +1, hyperbolic -1).
pub fn sectional(m: &ChartedManifold, p: &Point, v: &[f64], w: &[f64]) -> Result<f64> {
    let r = riemann_at(m, p)?;
    sectional_from(&r, v, w)
}

pub fn sectional_from(r: &Riemann, v: &[f64], w: &[f64]) -> Result<f64> {
    let (e1, e2) = orthonormal_pair(&r.metric, v, w)?;
    Ok(r.curvature_form(&e1, &e2))
}

/// Ric_{kj} = R^i_{kij}, symmetrized.
pub fn ricci_from(r: &Riemann) -> Mat {
    let n = r.n;
    let mut ric = Mat::zeros(n, n);
    for k in 0..n {
        for j in 0..n {
            ric[(k, j)] = (0..n).map(|i| r.get(i, k, i, j)).sum();
        }
    }
    (&ric + ric.transpose()) * 0.5
}

pub fn ricci(m: &ChartedManifold, p: &Point) -> Result<Mat> {
    Ok(ricci_from(&riemann_at(m, p)?))
}

/// Eigenvalues of Ric/(n-1) relative to g, i.e. the extreme values of
/// Rc_x(v) = Ric(v, v)/((n-1)|v|²).
pub fn normalized_ricci_eigenvalues(r: &Riemann) -> Vec<f64> {
    let n = r.n;
    if n < 2 {
        return vec![0.0];
    }
    let ric = ricci_from(r);
    let (_, a_inv) = sym_sqrt_pair(&r.metric).expect("metric is SPD");
    let m = &a_inv * ric * &a_inv;
    sym_eigenvalues(&((&m + m.transpose()) * 0.5)).into_iter().map(|l| l / (n as f64 - 1.0)).collect()
}

/// |Rc_x(v) - mean_j K(v, e_j)| for a g-orthonormal completion e_j of v;
/// zero up to discretization by the trace identity behind the Ricci bound.
pub fn ricci_trace_residual(r: &Riemann, v: &[f64]) -> Result<f64> {
    let n = r.n;
    if n < 2 {
        return Ok(0.0);
    }
    let g = &r.metric;
    let vv = quad_form(g, v, v);
    if !(vv > 0.0) {
        return Err(Error::DegeneratePlane);
    }
    let ric = ricci_from(r);
    let rc = quad_form(&ric, v, v) / ((n as f64 - 1.0) * vv);
    let mut basis: Vec<Vec<f64>> = vec![v.iter().map(|a| a / vv.sqrt()).collect()];
    for axis in 0..n {
        let mut e: Vec<f64> = (0..n).map(|i| if i == axis { 1.0 } else { 0.0 }).collect();
        for b in &basis {
            let c = quad_form(g, &e, b);
            e.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let nrm = quad_form(g, &e, &e).sqrt();
        if nrm > 1e-8 && basis.len() < n {
            basis.push(e.iter().map(|a| a / nrm).collect());
        }
    }
    let mean: f64 = basis[1..].iter().map(|e| r.curvature_form(&basis[0], e)).sum::<f64>() / (n as f64 - 1.0);
    Ok((rc - mean).abs())
}
