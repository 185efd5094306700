//! Differential forms in coordinates: values, fields, wedge, d, Hodge star
//! and codifferential.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Constant, PartialCombination, Scalar, ScalarField};
use crate::linalg::{combinations, complement, minor, permutation_sign, spd_inverse, Mat};
use crate::manifold::{sqrt_det, Chart, ChartedManifold};
use crate::region::BoxRegion;

/// Components of a p-form at a point, one per increasing multi-index in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct FormValue {
    pub n: usize,
    pub degree: usize,
    pub comps: Vec<f64>,
}

fn index_of(basis: &[Vec<usize>], idx: &[usize]) -> usize {
    basis.iter().position(|b| b == idx).expect("multi-index in basis")
}

impl FormValue {
    pub fn new(n: usize, degree: usize, comps: Vec<f64>) -> Self {
        assert_eq!(comps.len(), crate::linalg::binomial(n, degree), "component count");
        FormValue { n, degree, comps }
    }

    pub fn zero(n: usize, degree: usize) -> Self {
        Self::new(n, degree, vec![0.0; crate::linalg::binomial(n, degree)])
    }

    pub fn basis(&self) -> Vec<Vec<usize>> {
        combinations(self.n, self.degree)
    }

    /// Component of the increasing multi-index `idx`.
    pub fn get(&self, idx: &[usize]) -> f64 {
        self.comps[index_of(&self.basis(), idx)]
    }

    /// Fully antisymmetric components ω_{i1..ip}, n^p entries.
    pub fn full_tensor(&self) -> Vec<f64> {
        let (n, p) = (self.n, self.degree);
        let total = n.pow(p as u32);
        let mut out = vec![0.0; total];
        if p == 0 {
            out[0] = self.comps[0];
            return out;
        }
        let basis = self.basis();
        let mut idx = vec![0usize; p];
        for (flat, slot) in out.iter_mut().enumerate() {
            let mut f = flat;
            for s in (0..p).rev() {
                idx[s] = f % n;
                f /= n;
            }
            let sign = permutation_sign(&idx);
            if sign == 0.0 {
                continue;
            }
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            *slot = sign * self.comps[index_of(&basis, &sorted)];
        }
        out
    }

    /// Σ_{I,J} a_I det(g^{-1}[I, J]) b_J.
    pub fn inner(&self, other: &FormValue, g_inv: &Mat) -> f64 {
        let gm = form_metric(g_inv, self.n, self.degree);
        let c = self.comps.len();
        let mut s = 0.0;
        for i in 0..c {
            for j in 0..c {
                s += self.comps[i] * gm[i * c + j] * other.comps[j];
            }
        }
        s
    }

    pub fn norm(&self, g_inv: &Mat) -> f64 {
        self.inner(self, g_inv).max(0.0).sqrt()
    }

    pub fn scaled(&self, c: f64) -> FormValue {
        FormValue { n: self.n, degree: self.degree, comps: self.comps.iter().map(|v| v * c).collect() }
    }
}

/// The inner product induced on p-forms: G^{IJ} = det(g^{-1}[I, J]).
pub fn form_metric(g_inv: &Mat, n: usize, p: usize) -> Vec<f64> {
    let basis = combinations(n, p);
    let c = basis.len();
    let mut out = vec![0.0; c * c];
    for (a, i) in basis.iter().enumerate() {
        for (b, j) in basis.iter().enumerate() {
            out[a * c + b] = minor(g_inv, i, j);
        }
    }
    out
}

pub fn wedge(a: &FormValue, b: &FormValue) -> FormValue {
    let n = a.n;
    let p = a.degree + b.degree;
    let mut out = FormValue::zero(n, p);
    if p > n {
        return FormValue { n, degree: p, comps: vec![] };
    }
    let out_basis = combinations(n, p);
    for (i, ia) in a.basis().iter().enumerate() {
        for (j, jb) in b.basis().iter().enumerate() {
            let mut cat = ia.clone();
            cat.extend_from_slice(jb);
            let sign = permutation_sign(&cat);
            if sign == 0.0 {
                continue;
            }
            cat.sort_unstable();
            out.comps[index_of(&out_basis, &cat)] += sign * a.comps[i] * b.comps[j];
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HodgeFlavor {
    /// Riemannian star with √det g and index raising.
    Metric,
    /// Coordinate star *(a_J dx^J) = sign(J, J^c) a_J dx^{J^c}.
    FlatChart,
}

/// Matrix S with (*ω)_K = Σ_J S_{KJ} ω_J, mapping p-forms to (n-p)-forms.
pub fn star_matrix(g: &Mat, n: usize, p: usize, flavor: HodgeFlavor) -> Mat {
    let in_basis = combinations(n, p);
    let out_basis = combinations(n, n - p);
    let mut s = Mat::zeros(out_basis.len(), in_basis.len());
    let (vol, g_inv) = match flavor {
        HodgeFlavor::FlatChart => (1.0, Mat::identity(n, n)),
        HodgeFlavor::Metric => (sqrt_det(g).expect("SPD metric"), spd_inverse(g).expect("SPD metric")),
    };
    for (k, kk) in out_basis.iter().enumerate() {
        let ii = complement(n, kk);
        let mut cat = ii.clone();
        cat.extend_from_slice(kk);
        let sign = permutation_sign(&cat);
        for (j, jj) in in_basis.iter().enumerate() {
            let m = if flavor == HodgeFlavor::FlatChart {
                if *jj == ii {
                    1.0
                } else {
                    0.0
                }
            } else {
                minor(&g_inv, &ii, jj)
            };
            s[(k, j)] = vol * sign * m;
        }
    }
    s
}

pub fn hodge_star(value: &FormValue, g: &Mat, flavor: HodgeFlavor) -> FormValue {
    let s = star_matrix(g, value.n, value.degree, flavor);
    let comps = (0..s.nrows()).map(|k| (0..s.ncols()).map(|j| s[(k, j)] * value.comps[j]).sum()).collect();
    FormValue { n: value.n, degree: value.n - value.degree, comps }
}

/// Anything that evaluates to a p-form pointwise.
pub trait FormSection: Send + Sync {
    fn dim(&self) -> usize;
    fn degree(&self) -> usize;
    fn eval(&self, x: &[f64]) -> FormValue;
    fn support(&self) -> Option<BoxRegion>;
}

/// A p-form with scalar coefficient fields and a declared support box.
#[derive(Clone, Debug)]
pub struct FormField {
    n: usize,
    degree: usize,
    coeffs: Vec<Scalar>,
    support: Option<BoxRegion>,
}

impl FormField {
    /// Coefficients in lexicographic multi-index order; support is the hull
    /// of the coefficient supports.
    pub fn new(n: usize, degree: usize, coeffs: Vec<Scalar>) -> Result<Self> {
        if degree > n {
            return Err(Error::InvalidDegree(format!("degree {degree} exceeds dimension {n}")));
        }
        if coeffs.len() != crate::linalg::binomial(n, degree) {
            return Err(Error::InvalidDegree(format!(
                "{} coefficients for C({n}, {degree}) multi-indices",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| c.dim() != n) {
            return Err(Error::InvalidDegree("coefficient dimension mismatch".into()));
        }
        let mut support: Option<BoxRegion> = None;
        let mut bounded = true;
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            match c.support() {
                Some(s) => support = Some(support.map_or(s.clone(), |o: BoxRegion| o.hull(&s))),
                None => bounded = false,
            }
        }
        let support = if !bounded {
            None
        } else {
            Some(support.unwrap_or_else(|| BoxRegion::new(vec![0.0; n], vec![0.0; n])))
        };
        Ok(FormField { n, degree, coeffs, support })
    }

    pub fn scalar(f: Scalar) -> Self {
        let n = f.dim();
        Self::new(n, 0, vec![f]).expect("scalar field")
    }

    pub fn zero(n: usize, degree: usize) -> Self {
        let c = crate::linalg::binomial(n, degree);
        Self::new(n, degree, vec![Constant::new(n, 0.0); c]).expect("zero form")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn support(&self) -> Option<&BoxRegion> {
        self.support.as_ref()
    }

    /// Overrides the declared support (for fields whose coefficients are not
    /// compactly supported but vanish outside a known box).
    pub fn with_support(mut self, support: Option<BoxRegion>) -> Self {
        self.support = support;
        self
    }

    pub fn value(&self, x: &[f64]) -> FormValue {
        FormValue { n: self.n, degree: self.degree, comps: self.coeffs.iter().map(|c| c.value(x)).collect() }
    }

    /// Values and coordinate gradients of all coefficients.
    pub fn jet(&self, x: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let mut vals = Vec::with_capacity(self.coeffs.len());
        let mut grads = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if c.is_zero() {
                vals.push(0.0);
                grads.push(vec![0.0; self.n]);
            } else {
                vals.push(c.value(x));
                grads.push(c.gradient(x));
            }
        }
        (vals, grads)
    }

    pub fn scaled(&self, lambda: f64) -> FormField {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| crate::fields::Combination::new(self.n, vec![(lambda, c.clone())]))
            .collect();
        FormField { n: self.n, degree: self.degree, coeffs, support: self.support.clone() }
    }

    pub fn exterior_derivative(&self) -> Result<FormField> {
        exterior_derivative(self)
    }
}

impl FormSection for FormField {
    fn dim(&self) -> usize {
        self.n
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn eval(&self, x: &[f64]) -> FormValue {
        self.value(x)
    }
    fn support(&self) -> Option<BoxRegion> {
        self.support.clone()
    }
}

/// dω = Σ ∂_j a_J dx^j ∧ dx^J, assembled into increasing multi-indices.
pub fn exterior_derivative(w: &FormField) -> Result<FormField> {
    let (n, p) = (w.n, w.degree);
    if p >= n {
        return Err(Error::InvalidDegree(format!("d of a {p}-form in dimension {n}")));
    }
    let in_basis = combinations(n, p);
    let coeffs = combinations(n, p + 1)
        .iter()
        .map(|k| {
            let terms = (0..k.len())
                .map(|s| {
                    let j = k[s];
                    let rest: Vec<usize> = k.iter().copied().filter(|&v| v != j).collect();
                    let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                    (sign, j, w.coeffs[index_of(&in_basis, &rest)].clone())
                })
                .collect();
            PartialCombination::new(n, terms)
        })
        .collect();
    let field = FormField::new(n, p + 1, coeffs)?;
    Ok(field.with_support(w.support.clone()))
}

/// Σ_s (-1)^s ∂_{L_s} η_{L∖L_s} from coefficient values and gradients.
fn d_of_jet(n: usize, q: usize, grads: &[Vec<f64>]) -> Vec<f64> {
    let in_basis = combinations(n, q);
    combinations(n, q + 1)
        .iter()
        .map(|l| {
            (0..l.len())
                .map(|s| {
                    let j = l[s];
                    let rest: Vec<usize> = l.iter().copied().filter(|&v| v != j).collect();
                    let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                    sign * grads[index_of(&in_basis, &rest)][j]
                })
                .sum()
        })
        .collect()
}

/// d*ω = (-1)^p *⁻¹ d * ω, evaluated pointwise.
#[derive(Clone, Debug)]
pub struct Codifferential {
    field: FormField,
    flavor: HodgeFlavor,
    chart: Chart,
}

pub fn codifferential(m: &ChartedManifold, w: &FormField, flavor: HodgeFlavor) -> Result<Codifferential> {
    if w.degree == 0 {
        return Err(Error::InvalidDegree("codifferential of a 0-form".into()));
    }
    Ok(Codifferential { field: w.clone(), flavor, chart: m.chart().clone() })
}

impl Codifferential {
    fn star_derivatives(&self, x: &[f64], g: &Mat) -> Vec<Mat> {
        let (n, p) = (self.field.n, self.field.degree);
        if self.flavor == HodgeFlavor::FlatChart {
            let c = star_matrix(g, n, p, self.flavor);
            return vec![Mat::zeros(c.nrows(), c.ncols()); n];
        }
        let dg = self.chart.metric_partials(x).expect("metric partials inside the window");
        let scale = g.norm();
        dg.iter()
            .map(|d| {
                let dn = d.norm();
                if dn == 0.0 {
                    let c = crate::linalg::binomial(n, p);
                    return Mat::zeros(crate::linalg::binomial(n, n - p), c);
                }
                let t = 1e-6 * scale / dn;
                let sp = star_matrix(&(g + d * t), n, p, self.flavor);
                let sm = star_matrix(&(g - d * t), n, p, self.flavor);
                (sp - sm) / (2.0 * t)
            })
            .collect()
    }
}

impl FormSection for Codifferential {
    fn dim(&self) -> usize {
        self.field.n
    }
    fn degree(&self) -> usize {
        self.field.degree - 1
    }
    fn eval(&self, x: &[f64]) -> FormValue {
        let (n, p) = (self.field.n, self.field.degree);
        let q = n - p;
        let g = self.chart.metric(x);
        let s = star_matrix(&g, n, p, self.flavor);
        let ds = self.star_derivatives(x, &g);
        let (vals, grads) = self.field.jet(x);
        let star_grads: Vec<Vec<f64>> = (0..s.nrows())
            .map(|k| {
                (0..n)
                    .map(|j| (0..s.ncols()).map(|i| ds[j][(k, i)] * vals[i] + s[(k, i)] * grads[i][j]).sum())
                    .collect()
            })
            .collect();
        let d_star = FormValue { n, degree: q + 1, comps: d_of_jet(n, q, &star_grads) };
        let back = hodge_star(&d_star, &g, self.flavor);
        let deg = q + 1;
        let sign_inv = if (deg * (n - deg)) % 2 == 0 { 1.0 } else { -1.0 };
        let sign_p = if p % 2 == 0 { 1.0 } else { -1.0 };
        back.scaled(sign_inv * sign_p)
    }
    fn support(&self) -> Option<BoxRegion> {
        self.field.support.clone()
    }
}

/// Helper for building forms from coefficient closures in tests and suites.
pub fn form_from(n: usize, degree: usize, coeffs: Vec<Arc<dyn ScalarField>>) -> Result<FormField> {
    FormField::new(n, degree, coeffs)
}
