//! Low-discrepancy point sets.

use std::f64::consts::PI;

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Van der Corput radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    r
}

/// The i-th Halton point in [0,1)^d using primes starting at `first_prime`.
pub fn halton(i: u64, d: usize, first_prime: usize) -> Vec<f64> {
    (0..d).map(|k| radical_inverse(i, PRIMES[first_prime + k])).collect()
}

/// Maps d = n - 1 uniform numbers to a point of S^{n-1} (area-uniform).
pub fn sphere_point(n: usize, u: &[f64]) -> Vec<f64> {
    match n {
        1 => vec![if u[0] < 0.5 { -1.0 } else { 1.0 }],
        2 => {
            let a = 2.0 * PI * u[0];
            vec![a.cos(), a.sin()]
        }
        3 => {
            let z = 1.0 - 2.0 * u[0];
            let s = (1.0 - z * z).max(0.0).sqrt();
            let a = 2.0 * PI * u[1];
            vec![s * a.cos(), s * a.sin(), z]
        }
        4 => {
            let (se, ce) = (u[0].sqrt(), (1.0 - u[0]).sqrt());
            let (a, b) = (2.0 * PI * u[1], 2.0 * PI * u[2]);
            vec![se * a.cos(), se * a.sin(), ce * b.cos(), ce * b.sin()]
        }
        _ => panic!("sphere points for n = {n} not supported"),
    }
}

/// Quasi-random points in a box.
pub fn halton_box(lo: &[f64], hi: &[f64], count: usize, offset: u64) -> Vec<Vec<f64>> {
    let d = lo.len();
    (0..count as u64)
        .map(|i| {
            halton(i + 1 + offset, d, 0)
                .iter()
                .enumerate()
                .map(|(k, u)| lo[k] + u * (hi[k] - lo[k]))
                .collect()
        })
        .collect()
}
