//! Gauss–Legendre tensor grids on boxes and polar-type grids on ellipsoids.

use std::f64::consts::PI;

use crate::region::{BallRegion, BoxRegion, Region};

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(count > 0, "at least one node");
    let nf = count as f64;
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let legendre = |x: f64| {
        let (mut p1, mut p2) = (1.0, 0.0);
        for j in 1..=count {
            let p3 = p2;
            p2 = p1;
            let jf = j as f64;
            p1 = ((2.0 * jf - 1.0) * x * p2 - (jf - 1.0) * p3) / jf;
        }
        let dp = nf * (x * p1 - p2) / (x * x - 1.0);
        (p1, dp)
    };
    for i in 0..count.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[count - 1 - i] = x;
        weights[i] = w;
        weights[count - 1 - i] = w;
    }
    (nodes, weights)
}

/// Nodes (flattened, n per node) and coordinate-measure weights.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    pub region: Region,
    pub resolution: usize,
    n: usize,
    coords: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn for_region(region: &Region, resolution: usize) -> Self {
        match region {
            Region::Box(b) => Self::boxed(b, resolution),
            Region::Ball(b) => Self::ball(b, resolution),
        }
    }

    /// Tensor-product rule with `resolution` nodes per axis.
    pub fn boxed(b: &BoxRegion, resolution: usize) -> Self {
        assert!(b.is_bounded(), "box quadrature needs finite bounds");
        let n = b.dim();
        let (x, w) = gauss_legendre(resolution);
        let total = resolution.pow(n as u32);
        let mut coords = Vec::with_capacity(total * n);
        let mut weights = Vec::with_capacity(total);
        let half: Vec<f64> = (0..n).map(|i| 0.5 * (b.hi[i] - b.lo[i])).collect();
        let mid: Vec<f64> = (0..n).map(|i| 0.5 * (b.hi[i] + b.lo[i])).collect();
        let mut idx = vec![0usize; n];
        for _ in 0..total {
            let mut wt = 1.0;
            for i in 0..n {
                coords.push(mid[i] + half[i] * x[idx[i]]);
                wt *= half[i] * w[idx[i]];
            }
            weights.push(wt);
            for i in (0..n).rev() {
                idx[i] += 1;
                if idx[i] < resolution {
                    break;
                }
                idx[i] = 0;
            }
        }
        QuadratureGrid { region: Region::Box(b.clone()), resolution, n, coords, weights }
    }

    /// Radial Gauss–Legendre rule times a unit-sphere rule, mapped through
    /// the ball's shape matrix.
    pub fn ball(b: &BallRegion, resolution: usize) -> Self {
        let n = b.dim();
        let (rx, rw) = gauss_legendre(resolution);
        let sphere = sphere_rule(n, resolution);
        let det = b.shape.determinant().abs();
        let mut coords = Vec::with_capacity(resolution * sphere.len() * n);
        let mut weights = Vec::with_capacity(resolution * sphere.len());
        for (xr, wr) in rx.iter().zip(&rw) {
            let rho = 0.5 * b.radius * (xr + 1.0);
            let wrho = 0.5 * b.radius * wr * rho.powi(n as i32 - 1);
            for (u, wu) in &sphere {
                for i in 0..n {
                    let s: f64 = (0..n).map(|j| b.shape[(i, j)] * u[j]).sum();
                    coords.push(b.center[i] + rho * s);
                }
                weights.push(wrho * wu * det);
            }
        }
        QuadratureGrid { region: Region::Ball(b.clone()), resolution, n, coords, weights }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.coords[i * self.n..(i + 1) * self.n]
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Points and weights on the unit sphere S^{n-1}, exact on constants.
fn sphere_rule(n: usize, resolution: usize) -> Vec<(Vec<f64>, f64)> {
    let m = resolution.max(2);
    let circle: Vec<(f64, f64)> = (0..2 * m)
        .map(|j| (2.0 * PI * (j as f64 + 0.5) / (2 * m) as f64, 2.0 * PI / (2 * m) as f64))
        .collect();
    match n {
        1 => vec![(vec![-1.0], 1.0), (vec![1.0], 1.0)],
        2 => circle.iter().map(|&(a, w)| (vec![a.cos(), a.sin()], w)).collect(),
        3 => {
            let (mu, wmu) = gauss_legendre(m);
            let mut out = Vec::new();
            for (z, wz) in mu.iter().zip(&wmu) {
                let s = (1.0 - z * z).sqrt();
                for &(a, w) in &circle {
                    out.push((vec![s * a.cos(), s * a.sin(), *z], wz * w));
                }
            }
            out
        }
        4 => {
            let (xe, we) = gauss_legendre(m);
            let coarse: Vec<(f64, f64)> =
                (0..m).map(|j| (2.0 * PI * (j as f64 + 0.5) / m as f64, 2.0 * PI / m as f64)).collect();
            let mut out = Vec::new();
            for (x, w) in xe.iter().zip(&we) {
                // u = sin²η makes the Hopf area element ½ du dξ₁ dξ₂ uniform.
                let u = 0.5 * (x + 1.0);
                let (s, c) = (u.sqrt(), (1.0 - u).sqrt());
                let weta = 0.25 * w;
                for &(a, wa) in &coarse {
                    for &(b, wb) in &coarse {
                        out.push((
                            vec![s * a.cos(), s * a.sin(), c * b.cos(), c * b.sin()],
                            weta * wa * wb,
                        ));
                    }
                }
            }
            out
        }
        _ => panic!("sphere rule for n = {n} not supported"),
    }
}
