//! Small dense matrices over generic scalars and matrix functions on so(n) / SO(n).

use nalgebra::DMatrix;

use crate::dual::{k, Scalar};

pub type Mat<D> = Vec<Vec<D>>;

pub fn zeros<D: Scalar>(r: usize, c: usize) -> Mat<D> {
    vec![vec![k(0.0); c]; r]
}

pub fn eye<D: Scalar>(n: usize) -> Mat<D> {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = k(1.0);
    }
    m
}

pub fn matmul<D: Scalar>(a: &Mat<D>, b: &Mat<D>) -> Mat<D> {
    let (r, inner, c) = (a.len(), b.len(), b[0].len());
    let mut out = zeros(r, c);
    for i in 0..r {
        for l in 0..inner {
            let x = a[i][l];
            for j in 0..c {
                out[i][j] += x * b[l][j];
            }
        }
    }
    out
}

pub fn transpose<D: Scalar>(a: &Mat<D>) -> Mat<D> {
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn add<D: Scalar>(a: &Mat<D>, b: &Mat<D>) -> Mat<D> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| *p + *q).collect()).collect()
}

pub fn scale<D: Scalar>(a: &Mat<D>, s: f64) -> Mat<D> {
    a.iter().map(|row| row.iter().map(|x| *x * s).collect()).collect()
}

/// Scaling target for the exponential; the degree-8 remainder is below 1e-16 there.
const SCALE_TO: f64 = 1.0 / 16.0;

/// Matrix exponential by scaling and squaring with a degree-8 Taylor series.
pub fn expm<D: Scalar>(a: &Mat<D>) -> Mat<D> {
    let n = a.len();
    let norm = a.iter().flatten().map(|x| x.re() * x.re()).sum::<f64>().sqrt();
    let s = if norm > SCALE_TO { (norm / SCALE_TO).log2().ceil() as i32 } else { 0 };
    let b = scale(a, 0.5f64.powi(s));
    let mut term = eye::<D>(n);
    let mut sum = eye::<D>(n);
    for j in 1..=8 {
        term = scale(&matmul(&term, &b), 1.0 / j as f64);
        sum = add(&sum, &term);
    }
    for _ in 0..s {
        sum = matmul(&sum, &sum);
    }
    sum
}

pub fn to_dmatrix(a: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.len(), a[0].len(), |i, j| a[i][j])
}

pub fn from_dmatrix(a: &DMatrix<f64>) -> Mat<f64> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect()).collect()
}

pub fn skew_part(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a - a.transpose()) * 0.5
}

/// `exp` on so(n) for numeric matrices.
pub fn expm_f64(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.norm();
    let s = if norm > SCALE_TO { (norm / SCALE_TO).log2().ceil() as i32 } else { 0 };
    let b = a * 0.5f64.powi(s);
    let mut term = DMatrix::identity(n, n);
    let mut sum = DMatrix::identity(n, n);
    for j in 1..=8 {
        term = &term * &b / j as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Principal logarithm of a rotation away from `-I`. Square roots (Denman-Beavers)
/// bring the argument near the identity before the series is summed.
pub fn logm_near_identity(u: &DMatrix<f64>) -> DMatrix<f64> {
    let n = u.nrows();
    let id = DMatrix::identity(n, n);
    let mut y = u.clone();
    let mut halvings = 0;
    while (&y - &id).norm() > 0.25 && halvings < 30 {
        let mut z = id.clone();
        for _ in 0..50 {
            let (yi, zi) = match (y.clone().try_inverse(), z.clone().try_inverse()) {
                (Some(a), Some(b)) => (a, b),
                _ => break,
            };
            let y2 = (&y + zi) * 0.5;
            let z2 = (&z + yi) * 0.5;
            let done = (&y2 - &y).norm() < 1e-15;
            y = y2;
            z = z2;
            if done {
                break;
            }
        }
        halvings += 1;
    }
    let x = &y - &id;
    let mut p = x.clone();
    let mut sum = x.clone();
    for j in 2..=60 {
        p = &p * &x;
        let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
        let t = &p * (sign / j as f64);
        let small = t.norm() < 1e-18;
        sum += t;
        if small {
            break;
        }
    }
    skew_part(&sum) * 2f64.powi(halvings)
}

/// Orthogonal polar factor `Q` of `M = Q S` with `S` symmetric positive.
pub fn polar_factor(m: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = m.clone().svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut q = &u * &vt;
    if q.determinant() < 0.0 {
        let mut u2 = u.clone();
        let last = u2.ncols() - 1;
        u2.column_mut(last).scale_mut(-1.0);
        q = u2 * vt;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_plane_rotation() {
        let a = vec![vec![0.0, 1.3], vec![-1.3, 0.0]];
        let r = expm(&a);
        assert!((r[0][0] - 1.3f64.cos()).abs() < 1e-13);
        assert!((r[0][1] - 1.3f64.sin()).abs() < 1e-13);
    }

    #[test]
    fn log_inverts_exp() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 0.1, -0.2, -0.1, 0.0, 0.05, 0.2, -0.05, 0.0]);
        let b = logm_near_identity(&expm_f64(&a));
        assert!((b - a).norm() < 1e-14);
    }

    #[test]
    fn log_of_large_rotation() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 1.1, -0.9, -1.1, 0.0, 0.7, 0.9, -0.7, 0.0]);
        let b = logm_near_identity(&expm_f64(&a));
        assert!((b - a).norm() < 1e-12);
    }
}
