use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::son::{expm, to_dmatrix, zeros, Mat};
use crate::disc_solvers::{fd::gradient, PolarGrid};
use crate::dual::{k, seed_uv, Scalar};
use crate::surface_catalog::Poly2;
use crate::{Error, Result};

/// Smooth real function of the parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SmoothFn {
    Poly(Poly2),
    /// `Σ a sin(k_u u + k_v v + phase)`
    Fourier(Vec<(f64, f64, f64, f64)>),
}

impl SmoothFn {
    pub fn eval<D: Scalar>(&self, u: D, v: D) -> D {
        match self {
            SmoothFn::Poly(p) => p.eval(u, v),
            SmoothFn::Fourier(modes) => modes
                .iter()
                .fold(k(0.0), |acc, (a, ku, kv, ph)| acc + (u * *ku + v * *kv + *ph).sin() * *a),
        }
    }

    pub fn monomial(c: f64, i: u32, j: u32) -> Self {
        SmoothFn::Poly(Poly2 { terms: vec![(c, i, j)] })
    }

    pub fn random(rng: &mut ChaCha8Rng, amplitude: f64, modes: usize) -> Self {
        SmoothFn::Fourier(
            (0..modes)
                .map(|_| {
                    (
                        rng.random_range(-amplitude..amplitude),
                        rng.random_range(-2.0..2.0),
                        rng.random_range(-2.0..2.0),
                        rng.random_range(0.0..2.0 * PI),
                    )
                })
                .collect(),
        )
    }
}

/// Rotation field `R = exp(A)` with `A ∈ so(n)` given entrywise above the
/// diagonal in lexicographic pair order. For `n = 2` this is
/// `[[cos φ, sin φ], [-sin φ, cos φ]]` with `φ = A_12`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticRotation {
    pub n: usize,
    pub generator: Vec<SmoothFn>,
}

impl AnalyticRotation {
    pub fn new(n: usize, generator: Vec<SmoothFn>) -> Result<Self> {
        if generator.len() != n * (n - 1) / 2 {
            return Err(Error::Codimension(format!(
                "so({n}) needs {} generator entries, got {}",
                n * (n - 1) / 2,
                generator.len()
            )));
        }
        Ok(AnalyticRotation { n, generator })
    }

    /// Plane rotation by the angle field `phi` acting in `span(N_a, N_b)`.
    pub fn plane(n: usize, a: usize, b: usize, phi: SmoothFn) -> Self {
        let mut generator = vec![SmoothFn::Poly(Poly2::default()); n * (n - 1) / 2];
        generator[pair_index(n, a.min(b), a.max(b))] = if a < b { phi } else { negate(phi) };
        AnalyticRotation { n, generator }
    }

    pub fn angle(phi: SmoothFn) -> Self {
        AnalyticRotation::plane(2, 0, 1, phi)
    }

    pub fn random(n: usize, seed: u64, amplitude: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let generator = (0..n * (n - 1) / 2).map(|_| SmoothFn::random(&mut rng, amplitude, 3)).collect();
        AnalyticRotation { n, generator }
    }

    pub fn generator_at<D: Scalar>(&self, u: D, v: D) -> Mat<D> {
        let mut a = zeros(self.n, self.n);
        let mut idx = 0;
        for s in 0..self.n {
            for t in s + 1..self.n {
                let x = self.generator[idx].eval(u, v);
                a[s][t] = x;
                a[t][s] = -x;
                idx += 1;
            }
        }
        a
    }

    pub fn eval<D: Scalar>(&self, u: D, v: D) -> Mat<D> {
        expm(&self.generator_at(u, v))
    }

    /// `(R, R_u, R_v)` at a point.
    pub fn eval_derivs<D: Scalar>(&self, u: D, v: D) -> (Mat<D>, Mat<D>, Mat<D>) {
        let (a, b) = seed_uv(u, v);
        let r = self.eval(a, b);
        let pick = |f: &dyn Fn(&num_dual::HyperDual<D>) -> D| -> Mat<D> {
            r.iter().map(|row| row.iter().map(f).collect()).collect()
        };
        (pick(&|c| c.re), pick(&|c| c.eps1), pick(&|c| c.eps2))
    }
}

fn negate(f: SmoothFn) -> SmoothFn {
    match f {
        SmoothFn::Poly(p) => SmoothFn::Poly(Poly2 { terms: p.terms.into_iter().map(|(c, i, j)| (-c, i, j)).collect() }),
        SmoothFn::Fourier(m) => SmoothFn::Fourier(m.into_iter().map(|(a, x, y, p)| (-a, x, y, p)).collect()),
    }
}

pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    (0..a).map(|s| n - 1 - s).sum::<usize>() + (b - a - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativePath {
    Analytic,
    FiniteDifference,
}

/// Per-node rotations with derivative access.
#[derive(Clone, Debug)]
pub struct RotationField {
    pub grid: PolarGrid,
    pub n: usize,
    pub r: Vec<DMatrix<f64>>,
    pub du: Vec<DMatrix<f64>>,
    pub dv: Vec<DMatrix<f64>>,
    pub path: DerivativePath,
    pub analytic: Option<AnalyticRotation>,
}

impl RotationField {
    pub fn from_analytic(rot: &AnalyticRotation, grid: PolarGrid) -> Self {
        let mut r = Vec::with_capacity(grid.node_count());
        let mut du = Vec::with_capacity(grid.node_count());
        let mut dv = Vec::with_capacity(grid.node_count());
        for (u, v) in grid.points() {
            let (a, b, c) = rot.eval_derivs(u, v);
            r.push(to_dmatrix(&a));
            du.push(to_dmatrix(&b));
            dv.push(to_dmatrix(&c));
        }
        RotationField { grid, n: rot.n, r, du, dv, path: DerivativePath::Analytic, analytic: Some(rot.clone()) }
    }

    /// Nodal rotations; derivatives by grid finite differences.
    pub fn from_nodal(grid: PolarGrid, r: Vec<DMatrix<f64>>) -> Result<Self> {
        let n = r[0].nrows();
        let field = RotationField {
            grid,
            n,
            du: Vec::new(),
            dv: Vec::new(),
            r,
            path: DerivativePath::FiniteDifference,
            analytic: None,
        };
        field.check()?;
        let (du, dv) = fd_matrix_gradient(&grid, &field.r);
        Ok(RotationField { du, dv, ..field })
    }

    pub fn identity(grid: PolarGrid, n: usize) -> Self {
        let id = DMatrix::identity(n, n);
        let z = DMatrix::zeros(n, n);
        RotationField {
            grid,
            n,
            r: vec![id; grid.node_count()],
            du: vec![z.clone(); grid.node_count()],
            dv: vec![z; grid.node_count()],
            path: DerivativePath::Analytic,
            analytic: None,
        }
    }

    pub fn check(&self) -> Result<()> {
        for (kk, r) in self.r.iter().enumerate() {
            let e = (r * r.transpose() - DMatrix::identity(self.n, self.n)).amax();
            if e > 1e-10 || (r.determinant() - 1.0).abs() > 1e-8 {
                let (u, v) = self.grid.point(kk);
                return Err(Error::Gauge(format!("node ({u:.4}, {v:.4}): |R R^t - I| = {e:e}")));
            }
        }
        Ok(())
    }
}

/// Entrywise finite-difference gradient of a field of equally sized matrices.
pub fn fd_matrix_gradient(grid: &PolarGrid, m: &[DMatrix<f64>]) -> (Vec<DMatrix<f64>>, Vec<DMatrix<f64>>) {
    let (rows, cols) = m[0].shape();
    let mut du = vec![DMatrix::zeros(rows, cols); m.len()];
    let mut dv = vec![DMatrix::zeros(rows, cols); m.len()];
    let mut buf = vec![0.0; m.len()];
    for a in 0..rows {
        for b in 0..cols {
            for (x, mm) in buf.iter_mut().zip(m) {
                *x = mm[(a, b)];
            }
            let (gu, gv) = gradient(grid, &buf);
            for kk in 0..m.len() {
                du[kk][(a, b)] = gu[kk];
                dv[kk][(a, b)] = gv[kk];
            }
        }
    }
    (du, dv)
}
