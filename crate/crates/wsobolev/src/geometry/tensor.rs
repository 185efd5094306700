//! Covariant tensors at a point and covariant derivatives of forms.

use crate::error::{Error, Result};
use crate::linalg::{factorial, is_diagonal, Mat};
use crate::manifold::{Chart, ChartedManifold, Point};

use super::christoffel::{christoffel_at, Christoffel};
use super::forms::{FormField, FormValue};

/// Step of the outer finite-difference layer of ∇².
pub const SECOND_DERIVATIVE_FD_STEP: f64 = 1e-4;

/// A covariant tensor whose first `form_degree` slots are antisymmetric form
/// slots; the remaining slots were added by ∇ (last slot = last derivative).
#[derive(Clone, Debug, PartialEq)]
pub struct TensorValue {
    pub n: usize,
    pub form_degree: usize,
    pub rank: usize,
    pub comps: Vec<f64>,
    pub base: Vec<f64>,
}

impl TensorValue {
    pub fn from_form(value: &FormValue, base: &[f64]) -> Self {
        TensorValue {
            n: value.n,
            form_degree: value.degree,
            rank: value.degree,
            comps: value.full_tensor(),
            base: base.to_vec(),
        }
    }

    /// |T|² = (1/p!) T_{a..} T_{b..} g^{a b}···, so that forms get their
    /// usual norm.
    pub fn norm_sq(&self, g_inv: &Mat) -> f64 {
        let n = self.n;
        let scale = 1.0 / factorial(self.form_degree);
        if is_diagonal(g_inv) {
            let d: Vec<f64> = (0..n).map(|i| g_inv[(i, i)]).collect();
            let mut s = 0.0;
            for (flat, v) in self.comps.iter().enumerate() {
                if *v == 0.0 {
                    continue;
                }
                let mut f = flat;
                let mut w = 1.0;
                for _ in 0..self.rank {
                    w *= d[f % n];
                    f /= n;
                }
                s += w * v * v;
            }
            return scale * s;
        }
        let raised = raise_all(&self.comps, n, self.rank, g_inv);
        scale * self.comps.iter().zip(&raised).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn norm(&self, g_inv: &Mat) -> f64 {
        self.norm_sq(g_inv).max(0.0).sqrt()
    }

    /// The tensor with its last slot fixed to `k`.
    pub fn slice_last(&self, k: usize) -> TensorValue {
        let n = self.n;
        let comps = self.comps.iter().skip(k).step_by(n).copied().collect();
        TensorValue { n, form_degree: self.form_degree, rank: self.rank - 1, comps, base: self.base.clone() }
    }

    pub fn inner(&self, other: &TensorValue, g_inv: &Mat) -> f64 {
        let raised = raise_all(&other.comps, self.n, self.rank, g_inv);
        self.comps.iter().zip(&raised).map(|(a, b)| a * b).sum::<f64>() / factorial(self.form_degree)
    }
}

fn raise_all(t: &[f64], n: usize, rank: usize, g_inv: &Mat) -> Vec<f64> {
    let mut cur = t.to_vec();
    for slot in 0..rank {
        let stride = n.pow((rank - 1 - slot) as u32);
        let mut next = vec![0.0; cur.len()];
        for (flat, out) in next.iter_mut().enumerate() {
            let digit = (flat / stride) % n;
            let base = flat - digit * stride;
            *out = (0..n).map(|l| g_inv[(digit, l)] * cur[base + l * stride]).sum();
        }
        cur = next;
    }
    cur
}

/// (∇T)_{I j} = ∂_j T_I - Σ_s Γ^l_{j i_s} T_{I[i_s → l]}.
pub fn covariant_extend(n: usize, rank: usize, t: &[f64], dt: &[Vec<f64>], gamma: &Christoffel) -> Vec<f64> {
    let size = n.pow(rank as u32);
    let mut out = vec![0.0; size * n];
    for flat in 0..size {
        for j in 0..n {
            let mut v = dt[j][flat];
            for s in 0..rank {
                let stride = n.pow((rank - 1 - s) as u32);
                let digit = (flat / stride) % n;
                let base = flat - digit * stride;
                for l in 0..n {
                    let g = gamma.get(l, j, digit);
                    if g != 0.0 {
                        v -= g * t[base + l * stride];
                    }
                }
            }
            out[flat * n + j] = v;
        }
    }
    out
}

fn first_derivative(chart: &Chart, field: &FormField, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = field.n();
    let p = field.degree();
    let (vals, grads) = field.jet(x);
    let value = FormValue { n, degree: p, comps: vals };
    let t = value.full_tensor();
    let dt: Vec<Vec<f64>> = (0..n)
        .map(|j| FormValue { n, degree: p, comps: grads.iter().map(|g| g[j]).collect() }.full_tensor())
        .collect();
    let gamma = christoffel_at(chart, x)?;
    Ok((t.clone(), covariant_extend(n, p, &t, &dt, &gamma)))
}

/// ∇ω at p as a rank p+1 tensor.
pub fn covariant_derivative(m: &ChartedManifold, field: &FormField, p: &Point) -> Result<TensorValue> {
    let chart = &m.charts()[p.chart];
    if !chart.contains(&p.coords) {
        return Err(Error::OutsideDomain(p.coords.clone()));
    }
    let (_, d) = first_derivative(chart, field, &p.coords)?;
    Ok(TensorValue { n: field.n(), form_degree: field.degree(), rank: field.degree() + 1, comps: d, base: p.coords.clone() })
}

/// [ω, ∇ω, …, ∇^order ω] at x (order ≤ 2); ∇² uses central differences of
/// ∇ω with step [`SECOND_DERIVATIVE_FD_STEP`].
pub fn covariant_jets(chart: &Chart, field: &FormField, x: &[f64], order: usize) -> Result<Vec<TensorValue>> {
    let (n, p) = (field.n(), field.degree());
    let mk = |rank: usize, comps: Vec<f64>| TensorValue { n, form_degree: p, rank, comps, base: x.to_vec() };
    if order == 0 {
        return Ok(vec![mk(p, field.value(x).full_tensor())]);
    }
    let (t0, t1) = first_derivative(chart, field, x)?;
    let mut out = vec![mk(p, t0), mk(p + 1, t1.clone())];
    if order >= 2 {
        let h = SECOND_DERIVATIVE_FD_STEP;
        let mut dt = Vec::with_capacity(n);
        for k in 0..n {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[k] += h;
            xm[k] -= h;
            let (_, a) = first_derivative(chart, field, &xp)?;
            let (_, b) = first_derivative(chart, field, &xm)?;
            dt.push(a.iter().zip(&b).map(|(u, v)| (u - v) / (2.0 * h)).collect::<Vec<f64>>());
        }
        let gamma = christoffel_at(chart, x)?;
        out.push(mk(p + 2, covariant_extend(n, p + 1, &t1, &dt, &gamma)));
    }
    if order > 2 {
        return Err(Error::Unsupported(format!("covariant derivatives of order {order}")));
    }
    Ok(out)
}
