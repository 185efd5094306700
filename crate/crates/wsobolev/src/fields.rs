//! Scalar test fields with analytic first and second derivatives.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::linalg::Mat;
use crate::region::BoxRegion;

/// Step of the central differences used for Hessians of derived fields.
pub const HESSIAN_FD_STEP: f64 = 1e-5;

pub trait ScalarField: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    /// Row-major n×n Hessian.
    fn hessian(&self, x: &[f64]) -> Vec<f64>;
    /// Box outside which the field vanishes identically; None if unbounded.
    fn support(&self) -> Option<BoxRegion> {
        None
    }
    fn is_zero(&self) -> bool {
        false
    }
}

pub type Scalar = Arc<dyn ScalarField>;

#[derive(Clone, Debug)]
pub struct Constant {
    pub n: usize,
    pub value: f64,
}

impl Constant {
    pub fn new(n: usize, value: f64) -> Scalar {
        Arc::new(Constant { n, value })
    }
}

impl ScalarField for Constant {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, _x: &[f64]) -> f64 {
        self.value
    }
    fn gradient(&self, _x: &[f64]) -> Vec<f64> {
        vec![0.0; self.n]
    }
    fn hessian(&self, _x: &[f64]) -> Vec<f64> {
        vec![0.0; self.n * self.n]
    }
    fn is_zero(&self) -> bool {
        self.value == 0.0
    }
}

/// Σ c · x^e over monomials.
#[derive(Clone, Debug)]
pub struct Polynomial {
    pub n: usize,
    pub terms: Vec<(f64, Vec<u32>)>,
}

impl Polynomial {
    pub fn new(n: usize, terms: Vec<(f64, Vec<u32>)>) -> Scalar {
        Arc::new(Polynomial { n, terms })
    }

    fn monomial(x: &[f64], e: &[u32], d1: Option<usize>, d2: Option<usize>) -> f64 {
        let mut e: Vec<i64> = e.iter().map(|&v| v as i64).collect();
        let mut c = 1.0;
        for d in [d1, d2].into_iter().flatten() {
            c *= e[d] as f64;
            e[d] -= 1;
        }
        if c == 0.0 {
            return 0.0;
        }
        c * x.iter().zip(&e).map(|(v, &k)| v.powi(k as i32)).product::<f64>()
    }
}

impl ScalarField for Polynomial {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, e)| c * Self::monomial(x, e, None, None)).sum()
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|k| self.terms.iter().map(|(c, e)| c * Self::monomial(x, e, Some(k), None)).sum())
            .collect()
    }
    fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut h = vec![0.0; n * n];
        for k in 0..n {
            for l in 0..n {
                h[k * n + l] = self.terms.iter().map(|(c, e)| c * Self::monomial(x, e, Some(k), Some(l))).sum();
            }
        }
        h
    }
}

/// φ(s) = exp(1 - 1/(1 - s²)) for |s| < 1, else 0; returns (φ, φ', φ'').
pub fn bump_profile(s: f64) -> (f64, f64, f64) {
    let q = 1.0 - s * s;
    if q <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let v = (1.0 - 1.0 / q).exp();
    if v == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let h1 = -2.0 * s / (q * q);
    let h2 = -2.0 / (q * q) - 8.0 * s * s / (q * q * q);
    (v, v * h1, v * (h1 * h1 + h2))
}

/// One-dimensional factor of a tensor-product bump.
#[derive(Clone, Debug, PartialEq)]
pub enum AxisProfile {
    /// φ((x - center)/halfwidth).
    Compact { center: f64, halfwidth: f64 },
    /// 1 + amplitude·cos(2πk(x - center)/period); never vanishes for |amplitude| < 1.
    Periodic { center: f64, period: f64, amplitude: f64, harmonic: u32 },
    Flat,
}

impl AxisProfile {
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        match *self {
            AxisProfile::Compact { center, halfwidth } => {
                let (v, d1, d2) = bump_profile((x - center) / halfwidth);
                (v, d1 / halfwidth, d2 / (halfwidth * halfwidth))
            }
            AxisProfile::Periodic { center, period, amplitude, harmonic } => {
                let w = 2.0 * PI * harmonic as f64 / period;
                let (s, c) = (w * (x - center)).sin_cos();
                (1.0 + amplitude * c, -amplitude * w * s, -amplitude * w * w * c)
            }
            AxisProfile::Flat => (1.0, 0.0, 0.0),
        }
    }

    /// Normalized offset s and ds/dx used by the polynomial modulation.
    fn local(&self, x: f64) -> (f64, f64) {
        match *self {
            AxisProfile::Compact { center, halfwidth } => ((x - center) / halfwidth, 1.0 / halfwidth),
            _ => (0.0, 0.0),
        }
    }
}

/// amplitude · Π_i f_i(x_i) · (1 + Σ b_i s_i + Σ q_i s_i²), s_i the normalized
/// offset on compact axes.
#[derive(Clone, Debug, PartialEq)]
pub struct Bump {
    pub amplitude: f64,
    pub axes: Vec<AxisProfile>,
    pub linear: Vec<f64>,
    pub quadratic: Vec<f64>,
}

impl Bump {
    pub fn plain(amplitude: f64, axes: Vec<AxisProfile>) -> Self {
        let n = axes.len();
        Bump { amplitude, axes, linear: vec![0.0; n], quadratic: vec![0.0; n] }
    }

    /// Compact on every axis.
    pub fn compact(amplitude: f64, center: &[f64], halfwidths: &[f64]) -> Self {
        Self::plain(
            amplitude,
            center
                .iter()
                .zip(halfwidths)
                .map(|(&c, &h)| AxisProfile::Compact { center: c, halfwidth: h })
                .collect(),
        )
    }

    /// Same profile, random amplitude and modulation.
    pub fn random_modulated<R: Rng>(rng: &mut R, axes: Vec<AxisProfile>) -> Self {
        let n = axes.len();
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        Bump {
            amplitude: sign * rng.random_range(0.5..1.5),
            axes,
            linear: (0..n).map(|_| rng.random_range(-0.4..0.4)).collect(),
            quadratic: (0..n).map(|_| rng.random_range(-0.3..0.3)).collect(),
        }
    }

    pub fn into_scalar(self) -> Scalar {
        Arc::new(self)
    }

    fn parts(&self, x: &[f64]) -> (Vec<(f64, f64, f64)>, f64, Vec<f64>, Vec<f64>) {
        let n = self.axes.len();
        let f: Vec<_> = self.axes.iter().zip(x).map(|(a, &v)| a.eval(v)).collect();
        let mut p = 1.0;
        let mut dp = vec![0.0; n];
        let mut ddp = vec![0.0; n];
        for i in 0..n {
            let (s, ds) = self.axes[i].local(x[i]);
            p += self.linear[i] * s + self.quadratic[i] * s * s;
            dp[i] = (self.linear[i] + 2.0 * self.quadratic[i] * s) * ds;
            ddp[i] = 2.0 * self.quadratic[i] * ds * ds;
        }
        (f, p, dp, ddp)
    }
}

fn product_except(f: &[(f64, f64, f64)], skip: &[usize]) -> f64 {
    f.iter().enumerate().filter(|(i, _)| !skip.contains(i)).map(|(_, v)| v.0).product()
}

impl ScalarField for Bump {
    fn dim(&self) -> usize {
        self.axes.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let mut g = self.amplitude;
        for (a, &v) in self.axes.iter().zip(x) {
            g *= a.eval(v).0;
            if g == 0.0 {
                return 0.0;
            }
        }
        let p: f64 = 1.0
            + (0..x.len())
                .map(|i| {
                    let s = self.axes[i].local(x[i]).0;
                    self.linear[i] * s + self.quadratic[i] * s * s
                })
                .sum::<f64>();
        g * p
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let (f, p, dp, _) = self.parts(x);
        let g = product_except(&f, &[]);
        (0..n).map(|k| self.amplitude * (f[k].1 * product_except(&f, &[k]) * p + g * dp[k])).collect()
    }

    fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let (f, p, dp, ddp) = self.parts(x);
        let g = product_except(&f, &[]);
        let gk: Vec<f64> = (0..n).map(|k| f[k].1 * product_except(&f, &[k])).collect();
        let mut h = vec![0.0; n * n];
        for k in 0..n {
            for l in 0..n {
                let gkl = if k == l {
                    f[k].2 * product_except(&f, &[k])
                } else {
                    f[k].1 * f[l].1 * product_except(&f, &[k, l])
                };
                let pkl = if k == l { ddp[k] } else { 0.0 };
                h[k * n + l] = self.amplitude * (gkl * p + gk[k] * dp[l] + gk[l] * dp[k] + g * pkl);
            }
        }
        h
    }

    fn support(&self) -> Option<BoxRegion> {
        let mut b = BoxRegion::unbounded(self.axes.len());
        for (i, a) in self.axes.iter().enumerate() {
            if let AxisProfile::Compact { center, halfwidth } = a {
                b.lo[i] = center - halfwidth;
                b.hi[i] = center + halfwidth;
            }
        }
        Some(b)
    }

    fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }
}

/// amplitude · exp(1 - 1/(1 - |x - c|²/ρ²)).
#[derive(Clone, Debug)]
pub struct RadialBump {
    pub center: Vec<f64>,
    pub radius: f64,
    pub amplitude: f64,
}

impl RadialBump {
    fn q(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let y: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let q = 1.0 - y.iter().map(|v| v * v).sum::<f64>() / (self.radius * self.radius);
        (q, y)
    }
}

impl ScalarField for RadialBump {
    fn dim(&self) -> usize {
        self.center.len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        let (q, _) = self.q(x);
        if q <= 0.0 {
            0.0
        } else {
            self.amplitude * (1.0 - 1.0 / q).exp()
        }
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let (q, y) = self.q(x);
        let psi = if q > 0.0 { (1.0 - 1.0 / q).exp() } else { 0.0 };
        if psi == 0.0 {
            return vec![0.0; x.len()];
        }
        let r2 = self.radius * self.radius;
        y.iter().map(|v| self.amplitude * psi / (q * q) * (-2.0 * v / r2)).collect()
    }
    fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let (q, y) = self.q(x);
        let psi = if q > 0.0 { (1.0 - 1.0 / q).exp() } else { 0.0 };
        let mut h = vec![0.0; n * n];
        if psi == 0.0 {
            return h;
        }
        let r2 = self.radius * self.radius;
        let dq: Vec<f64> = y.iter().map(|v| -2.0 * v / r2).collect();
        let a = q.powi(-4) - 2.0 * q.powi(-3);
        for k in 0..n {
            for l in 0..n {
                let ddq = if k == l { -2.0 / r2 } else { 0.0 };
                h[k * n + l] = self.amplitude * psi * (a * dq[k] * dq[l] + ddq / (q * q));
            }
        }
        h
    }
    fn support(&self) -> Option<BoxRegion> {
        Some(BoxRegion::around(&self.center, &vec![self.radius; self.center.len()]))
    }
}

/// x ↦ inner(L·(x - offset)), with the difference taken modulo the given
/// periods.
#[derive(Clone, Debug)]
pub struct Affine {
    pub inner: Scalar,
    pub offset: Vec<f64>,
    pub linear: Mat,
    pub periods: Vec<Option<f64>>,
}

impl Affine {
    pub fn new(inner: Scalar, offset: Vec<f64>, linear: Mat) -> Self {
        let n = offset.len();
        Affine { inner, offset, linear, periods: vec![None; n] }
    }

    /// x ↦ inner(x / scale).
    pub fn rescaled(inner: Scalar, scale: f64) -> Scalar {
        let n = inner.dim();
        Arc::new(Affine::new(inner, vec![0.0; n], Mat::identity(n, n) / scale))
    }

    fn pull(&self, x: &[f64]) -> Vec<f64> {
        let mut d: Vec<f64> = x.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        for (i, p) in self.periods.iter().enumerate() {
            if let Some(l) = p {
                d[i] -= l * (d[i] / l).round();
            }
        }
        crate::linalg::mat_vec(&self.linear, &d)
    }
}

impl ScalarField for Affine {
    fn dim(&self) -> usize {
        self.offset.len()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.inner.value(&self.pull(x))
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let g = self.inner.gradient(&self.pull(x));
        let n = x.len();
        (0..n).map(|k| (0..n).map(|i| self.linear[(i, k)] * g[i]).sum()).collect()
    }
    fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let h = self.inner.hessian(&self.pull(x));
        let n = x.len();
        let mut out = vec![0.0; n * n];
        for k in 0..n {
            for l in 0..n {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += self.linear[(i, k)] * h[i * n + j] * self.linear[(j, l)];
                    }
                }
                out[k * n + l] = s;
            }
        }
        out
    }
    fn support(&self) -> Option<BoxRegion> {
        let s = self.inner.support()?;
        if !s.is_bounded() || self.periods.iter().any(|p| p.is_some()) {
            return None;
        }
        let inv = self.linear.clone().try_inverse()?;
        let n = self.offset.len();
        let mut out: Option<BoxRegion> = None;
        for mask in 0..(1usize << n) {
            let corner: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { s.hi[i] } else { s.lo[i] }).collect();
            let y: Vec<f64> = crate::linalg::mat_vec(&inv, &corner).iter().zip(&self.offset).map(|(a, b)| a + b).collect();
            let b = BoxRegion::new(y.clone(), y);
            out = Some(match out {
                None => b,
                Some(o) => o.hull(&b),
            });
        }
        out
    }
    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }
}

/// Σ c_i f_i.
#[derive(Clone, Debug)]
pub struct Combination {
    pub n: usize,
    pub terms: Vec<(f64, Scalar)>,
}

impl Combination {
    pub fn new(n: usize, terms: Vec<(f64, Scalar)>) -> Scalar {
        let terms: Vec<_> = terms.into_iter().filter(|(c, f)| *c != 0.0 && !f.is_zero()).collect();
        if terms.is_empty() {
            return Constant::new(n, 0.0);
        }
        Arc::new(Combination { n, terms })
    }
}

fn hull_supports(n: usize, supports: impl Iterator<Item = Option<BoxRegion>>) -> Option<BoxRegion> {
    let mut out: Option<BoxRegion> = None;
    for s in supports {
        let s = s?;
        out = Some(match out {
            None => s,
            Some(o) => o.hull(&s),
        });
    }
    Some(out.unwrap_or_else(|| BoxRegion::new(vec![0.0; n], vec![0.0; n])))
}

impl ScalarField for Combination {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, f)| c * f.value(x)).sum()
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.n];
        for (c, f) in &self.terms {
            for (a, b) in g.iter_mut().zip(f.gradient(x)) {
                *a += c * b;
            }
        }
        g
    }
    fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let mut h = vec![0.0; self.n * self.n];
        for (c, f) in &self.terms {
            for (a, b) in h.iter_mut().zip(f.hessian(x)) {
                *a += c * b;
            }
        }
        h
    }
    fn support(&self) -> Option<BoxRegion> {
        hull_supports(self.n, self.terms.iter().map(|(_, f)| f.support()))
    }
}

/// Σ c · ∂_j f, the coefficient shape produced by the exterior derivative.
/// The Hessian is a central difference of the analytic gradient.
#[derive(Clone, Debug)]
pub struct PartialCombination {
    pub n: usize,
    pub terms: Vec<(f64, usize, Scalar)>,
}

impl PartialCombination {
    pub fn new(n: usize, terms: Vec<(f64, usize, Scalar)>) -> Scalar {
        let terms: Vec<_> = terms.into_iter().filter(|(c, _, f)| *c != 0.0 && !f.is_zero()).collect();
        if terms.is_empty() {
            return Constant::new(n, 0.0);
        }
        Arc::new(PartialCombination { n, terms })
    }
}

impl ScalarField for PartialCombination {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, j, f)| c * f.gradient(x)[*j]).sum()
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut g = vec![0.0; n];
        for (c, j, f) in &self.terms {
            let h = f.hessian(x);
            for k in 0..n {
                g[k] += c * h[j * n + k];
            }
        }
        g
    }
    fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let h = HESSIAN_FD_STEP;
        let mut out = vec![0.0; n * n];
        for l in 0..n {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[l] += h;
            xm[l] -= h;
            let (gp, gm) = (self.gradient(&xp), self.gradient(&xm));
            for k in 0..n {
                out[k * n + l] = (gp[k] - gm[k]) / (2.0 * h);
            }
        }
        for k in 0..n {
            for l in k + 1..n {
                let m = 0.5 * (out[k * n + l] + out[l * n + k]);
                out[k * n + l] = m;
                out[l * n + k] = m;
            }
        }
        out
    }
    fn support(&self) -> Option<BoxRegion> {
        hull_supports(self.n, self.terms.iter().map(|(_, _, f)| f.support()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(f: &dyn ScalarField, x: &[f64], tol: f64) {
        let n = x.len();
        let h = 1e-6;
        let g = f.gradient(x);
        let hess = f.hessian(x);
        for k in 0..n {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[k] += h;
            xm[k] -= h;
            let fd = (f.value(&xp) - f.value(&xm)) / (2.0 * h);
            assert!((fd - g[k]).abs() < tol * (1.0 + g[k].abs()), "grad {k}: {fd} vs {}", g[k]);
            let (gp, gm) = (f.gradient(&xp), f.gradient(&xm));
            for l in 0..n {
                let fd = (gp[l] - gm[l]) / (2.0 * h);
                assert!((fd - hess[l * n + k]).abs() < tol * (1.0 + fd.abs()), "hess {l}{k}");
            }
        }
    }

    #[test]
    fn bump_derivatives() {
        let b = Bump {
            amplitude: 1.3,
            axes: vec![
                AxisProfile::Compact { center: 0.1, halfwidth: 0.5 },
                AxisProfile::Periodic { center: 0.2, period: 0.7, amplitude: 0.4, harmonic: 1 },
                AxisProfile::Compact { center: -0.2, halfwidth: 0.3 },
            ],
            linear: vec![0.3, 0.0, -0.2],
            quadratic: vec![0.1, 0.0, 0.25],
        };
        fd_check(&b, &[0.25, 0.33, -0.1], 1e-5);
        assert_eq!(b.value(&[0.7, 0.0, 0.0]), 0.0);
        let s = b.support().unwrap();
        assert_eq!(s.lo[0], -0.4);
        assert!(s.hi[1].is_infinite());
    }

    #[test]
    fn radial_and_affine_derivatives() {
        let r = RadialBump { center: vec![0.1, -0.2], radius: 0.8, amplitude: 2.0 };
        fd_check(&r, &[0.3, 0.1], 1e-5);
        let a = Affine::new(Arc::new(r), vec![0.5, 0.5], Mat::from_row_slice(2, 2, &[2.0, 0.3, 0.0, 1.5]));
        fd_check(&a, &[0.6, 0.45], 1e-4);
        let p = Polynomial { n: 2, terms: vec![(1.5, vec![2, 1]), (-0.5, vec![0, 3])] };
        fd_check(&p, &[0.7, -0.4], 1e-6);
        assert!((p.value(&[2.0, 1.0]) - (1.5 * 4.0 - 0.5)).abs() < 1e-14);
    }
}
