//! Small dense helpers for n ≤ 4 matrices and multi-index bookkeeping.

use nalgebra::DMatrix;

pub type Mat = DMatrix<f64>;

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn sym_eigenvalues(m: &Mat) -> Vec<f64> {
    let n = m.nrows();
    if n == 1 {
        return vec![m[(0, 0)]];
    }
    if n == 2 {
        let (a, b, d) = (m[(0, 0)], 0.5 * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)]);
        let mean = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        return vec![mean - rad, mean + rad];
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Returns (g^{1/2}, g^{-1/2}) for a symmetric positive definite g, or None.
pub fn sym_sqrt_pair(g: &Mat) -> Option<(Mat, Mat)> {
    let n = g.nrows();
    if is_diagonal(g) {
        let mut s = Mat::zeros(n, n);
        let mut si = Mat::zeros(n, n);
        for i in 0..n {
            let v = g[(i, i)];
            if !(v > 0.0) {
                return None;
            }
            s[(i, i)] = v.sqrt();
            si[(i, i)] = 1.0 / v.sqrt();
        }
        return Some((s, si));
    }
    let eig = g.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return None;
    }
    let q = &eig.eigenvectors;
    let d = Mat::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let di = Mat::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    Some((q * d * q.transpose(), q * di * q.transpose()))
}

pub fn is_diagonal(m: &Mat) -> bool {
    let n = m.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == 0.0))
}

/// Inverse of an SPD matrix (diagonal fast path).
pub fn spd_inverse(g: &Mat) -> Option<Mat> {
    let n = g.nrows();
    if is_diagonal(g) {
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            if !(g[(i, i)] > 0.0) {
                return None;
            }
            out[(i, i)] = 1.0 / g[(i, i)];
        }
        return Some(out);
    }
    g.clone().cholesky().map(|c| c.inverse())
}

/// Determinant of the submatrix with the given rows and columns.
pub fn minor(m: &Mat, rows: &[usize], cols: &[usize]) -> f64 {
    let p = rows.len();
    match p {
        0 => 1.0,
        1 => m[(rows[0], cols[0])],
        2 => m[(rows[0], cols[0])] * m[(rows[1], cols[1])] - m[(rows[0], cols[1])] * m[(rows[1], cols[0])],
        _ => Mat::from_fn(p, p, |i, j| m[(rows[i], cols[j])]).determinant(),
    }
}

/// Sign (+1/-1) of the permutation that sorts `seq`; 0 if it has repeats.
pub fn permutation_sign(seq: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] == seq[j] {
                return 0.0;
            }
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Strictly increasing multi-indices of length p in {0..n}, lexicographic.
pub fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, &mut Vec::new(), &mut out);
    }
    out
}

/// Complement of an increasing multi-index in {0..n}.
pub fn complement(n: usize, idx: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !idx.contains(i)).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Volume of the Euclidean unit ball in ℝⁿ.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2),
    }
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn mat_vec(m: &Mat, v: &[f64]) -> Vec<f64> {
    let n = m.nrows();
    (0..n).map(|i| (0..v.len()).map(|j| m[(i, j)] * v[j]).sum()).collect()
}

pub fn quad_form(m: &Mat, u: &[f64], v: &[f64]) -> f64 {
    let n = u.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += u[i] * m[(i, j)] * v[j];
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinatorics() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1.0);
        assert_eq!(permutation_sign(&[2, 0, 1]), 1.0);
        assert_eq!(complement(4, &[1, 3]), vec![0, 2]);
        assert!((unit_ball_volume(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn sqrt_pair_general() {
        let g = Mat::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let (s, si) = sym_sqrt_pair(&g).unwrap();
        assert!((&s * &s - &g).norm() < 1e-12);
        assert!((&s * &si - Mat::identity(2, 2)).norm() < 1e-12);
        let ev = sym_eigenvalues(&g);
        assert!((ev[0] * ev[1] - g.determinant()).abs() < 1e-12);
    }
}
