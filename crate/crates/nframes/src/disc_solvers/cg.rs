use rayon::prelude::*;

pub struct CgOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
}

/// Fixed-size chunks keep the summation order independent of the thread count.
fn dotp(a: &[f64], b: &[f64]) -> f64 {
    let partial: Vec<f64> =
        a.par_chunks(4096).zip(b.par_chunks(4096)).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum()).collect();
    partial.iter().sum()
}

fn remove_mean(x: &mut [f64]) {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= m);
}

/// Jacobi-preconditioned conjugate gradients for a symmetric positive
/// (semi)definite operator. With `project`, iterates are kept orthogonal to
/// the constant vector.
pub fn pcg(
    op: impl Fn(&[f64], &mut [f64]),
    diag: &[f64],
    b: &[f64],
    tol: f64,
    max_iter: usize,
    project: bool,
) -> CgOutcome {
    let n = b.len();
    let mut x = vec![0.0; n];
    let bnorm = dotp(b, b).sqrt();
    if bnorm == 0.0 {
        return CgOutcome { x, iterations: 0, relative_residual: 0.0, converged: true };
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(a, d)| a / d).collect();
    if project {
        remove_mean(&mut z);
    }
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dotp(&r, &z);
    let mut res = 1.0;
    for it in 1..=max_iter {
        op(&p, &mut ap);
        let alpha = rz / dotp(&p, &ap);
        x.par_iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
        r.par_iter_mut().zip(&ap).for_each(|(ri, api)| *ri -= alpha * api);
        if project {
            remove_mean(&mut r);
        }
        res = dotp(&r, &r).sqrt() / bnorm;
        if res <= tol {
            if project {
                remove_mean(&mut x);
            }
            return CgOutcome { x, iterations: it, relative_residual: res, converged: true };
        }
        z.par_iter_mut().zip(&r).zip(diag).for_each(|((zi, ri), d)| *zi = ri / d);
        if project {
            remove_mean(&mut z);
        }
        let rz_new = dotp(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        p.par_iter_mut().zip(&z).for_each(|(pi, zi)| *pi = zi + beta * *pi);
    }
    CgOutcome { x, iterations: max_iter, relative_residual: res, converged: false }
}
