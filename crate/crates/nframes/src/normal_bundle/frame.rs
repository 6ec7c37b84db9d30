use nalgebra::DMatrix;
use rayon::prelude::*;

use super::rotation::{fd_matrix_gradient, AnalyticRotation, DerivativePath, RotationField};
use super::son::{matmul, to_dmatrix, Mat};
use crate::disc_solvers::PolarGrid;
use crate::dual::{dot, k, seed_uv, Scalar};
use crate::surface_catalog::ImmersionSpec;
use crate::{Error, Result};

/// Orthonormalizes a spanning set of the normal space: each vector is first
/// projected off the tangent plane, then off the earlier normals. The order is
/// fixed, there is no pivoting.
pub fn gram_schmidt<D: Scalar>(span: Vec<Vec<D>>, xu: &[D], xv: &[D]) -> std::result::Result<Vec<Vec<D>>, String> {
    let (g11, g12, g22) = (dot(xu, xu), dot(xu, xv), dot(xv, xv));
    let det = g11 * g22 - g12 * g12;
    let mut out: Vec<Vec<D>> = Vec::with_capacity(span.len());
    for (idx, mut s) in span.into_iter().enumerate() {
        let (c1, c2) = (dot(&s, xu), dot(&s, xv));
        let a = (g22 * c1 - g12 * c2) / det;
        let b = (g11 * c2 - g12 * c1) / det;
        for c in 0..s.len() {
            s[c] -= a * xu[c] + b * xv[c];
        }
        for n in &out {
            let p = dot(&s, n);
            for c in 0..s.len() {
                s[c] -= p * n[c];
            }
        }
        let norm = dot(&s, &s).sqrt();
        if norm.re() < 1e-8 {
            return Err(format!("spanning vector {idx} has projection norm {:e}", norm.re()));
        }
        out.push(s.iter().map(|c| *c / norm).collect());
    }
    Ok(out)
}

pub fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|x, y| a[*x][c].abs().total_cmp(&a[*y][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for j in c..n {
                a[r][j] -= f * a[c][j];
            }
        }
    }
    det
}

/// `det(X_u, X_v, N_1, ..., N_n)`.
pub fn orientation<D: Scalar>(xu: &[D], xv: &[D], frame: &[Vec<D>]) -> f64 {
    let mut rows = vec![xu.iter().map(|c| c.re()).collect::<Vec<_>>(), xv.iter().map(|c| c.re()).collect()];
    rows.extend(frame.iter().map(|n| n.iter().map(|c| c.re()).collect()));
    determinant(rows)
}

/// Analytic description of a frame: the surface's Gram-Schmidt frame followed
/// by analytic rotations `N <- R N`, applied in order.
#[derive(Clone, Debug)]
pub struct FrameRecipe {
    pub spec: ImmersionSpec,
    pub rotations: Vec<AnalyticRotation>,
}

impl FrameRecipe {
    pub fn base(spec: ImmersionSpec) -> Self {
        FrameRecipe { spec, rotations: Vec::new() }
    }

    pub fn rotated(&self, rot: AnalyticRotation) -> Self {
        let mut r = self.clone();
        r.rotations.push(rot);
        r
    }

    pub fn base_frame<D: Scalar>(&self, u: D, v: D) -> Result<Mat<D>> {
        let (_, xu, xv) = self.spec.first(u, v);
        let m = self.spec.ambient_dim();
        let n = self.spec.codimension();
        let span = self.spec.spanning(u, v, &xu, &xv).unwrap_or_else(|| {
            (0..n)
                .map(|s| {
                    let mut e = vec![k::<D>(0.0); m];
                    e[2 + s] = k(1.0);
                    e
                })
                .collect()
        });
        let mut frame =
            gram_schmidt(span, &xu, &xv).map_err(|reason| Error::Frame { u: u.re(), v: v.re(), reason })?;
        if orientation(&xu, &xv, &frame) < 0.0 {
            let last = frame.len() - 1;
            frame[last].iter_mut().for_each(|c| *c = -*c);
        }
        Ok(frame)
    }

    pub fn frame<D: Scalar>(&self, u: D, v: D) -> Result<Mat<D>> {
        let mut f = self.base_frame(u, v)?;
        for r in &self.rotations {
            f = matmul(&r.eval(u, v), &f);
        }
        Ok(f)
    }

    /// `(N, N_u, N_v)` with rows `N_σ`.
    pub fn frame_derivs<D: Scalar>(&self, u: D, v: D) -> Result<(Mat<D>, Mat<D>, Mat<D>)> {
        let (a, b) = seed_uv(u, v);
        let f = self.frame(a, b)?;
        let pick = |g: fn(&num_dual::HyperDual<D>) -> D| -> Mat<D> { f.iter().map(|row| row.iter().map(g).collect()).collect() };
        Ok((pick(|c| c.re), pick(|c| c.eps1), pick(|c| c.eps2)))
    }

    /// Torsion matrices `T_i[σ][ϑ] = N_{σ,i} · N_ϑ`, skew by construction.
    pub fn torsion<D: Scalar>(&self, u: D, v: D) -> Result<[Mat<D>; 2]> {
        let (n, nu, nv) = self.frame_derivs(u, v)?;
        let c = n.len();
        let build = |d: &Mat<D>| -> Mat<D> {
            let mut t = vec![vec![k::<D>(0.0); c]; c];
            for s in 0..c {
                for r in s + 1..c {
                    let x = (dot(&d[s], &n[r]) - dot(&d[r], &n[s])) * 0.5;
                    t[s][r] = x;
                    t[r][s] = -x;
                }
            }
            t
        };
        Ok([build(&nu), build(&nv)])
    }
}

/// Per-node orthonormal frames (rows `N_σ`) with derivative access.
#[derive(Clone, Debug)]
pub struct FrameField {
    pub grid: PolarGrid,
    pub n: usize,
    pub m: usize,
    pub frames: Vec<DMatrix<f64>>,
    pub du: Vec<DMatrix<f64>>,
    pub dv: Vec<DMatrix<f64>>,
    pub path: DerivativePath,
    pub recipe: Option<FrameRecipe>,
}

impl FrameField {
    pub fn from_recipe(recipe: &FrameRecipe, grid: PolarGrid) -> Result<Self> {
        let samples: Vec<Result<(Mat<f64>, Mat<f64>, Mat<f64>)>> =
            grid.points().par_iter().map(|(u, v)| recipe.frame_derivs(*u, *v)).collect();
        let mut frames = Vec::with_capacity(samples.len());
        let mut du = Vec::with_capacity(samples.len());
        let mut dv = Vec::with_capacity(samples.len());
        for s in samples {
            let (a, b, c) = s?;
            frames.push(to_dmatrix(&a));
            du.push(to_dmatrix(&b));
            dv.push(to_dmatrix(&c));
        }
        Ok(FrameField {
            grid,
            n: recipe.spec.codimension(),
            m: recipe.spec.ambient_dim(),
            frames,
            du,
            dv,
            path: DerivativePath::Analytic,
            recipe: Some(recipe.clone()),
        })
    }

    /// Nodal frames only; derivatives by grid finite differences.
    pub fn from_nodal(grid: PolarGrid, frames: Vec<DMatrix<f64>>) -> Self {
        let (du, dv) = fd_matrix_gradient(&grid, &frames);
        let (n, m) = frames[0].shape();
        FrameField { grid, n, m, frames, du, dv, path: DerivativePath::FiniteDifference, recipe: None }
    }

    /// Recomputes derivatives by finite differences, dropping analytic access.
    pub fn with_fd_derivatives(&self) -> Self {
        FrameField::from_nodal(self.grid, self.frames.clone())
    }

    /// Largest deviation from orthonormality, tangency and the sign of the
    /// orientation determinant (negative means violated).
    pub fn validate(&self, spec: &ImmersionSpec) -> FrameCheck {
        let mut c = FrameCheck { orthonormality: 0.0, tangency: 0.0, min_orientation: f64::INFINITY };
        for (kk, f) in self.frames.iter().enumerate() {
            let (u, v) = self.grid.point(kk);
            let (_, xu, xv) = spec.first(u, v);
            let gram = f * f.transpose() - DMatrix::identity(self.n, self.n);
            c.orthonormality = c.orthonormality.max(gram.amax());
            let rows: Vec<Vec<f64>> = (0..self.n).map(|s| f.row(s).iter().copied().collect()).collect();
            for r in &rows {
                c.tangency = c.tangency.max(dot(r, &xu).abs()).max(dot(r, &xv).abs());
            }
            c.min_orientation = c.min_orientation.min(orientation(&xu, &xv, &rows));
        }
        c
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FrameCheck {
    pub orthonormality: f64,
    pub tangency: f64,
    pub min_orientation: f64,
}

pub fn euler_gram_schmidt_frame(spec: &ImmersionSpec, grid: PolarGrid) -> Result<FrameField> {
    FrameField::from_recipe(&FrameRecipe::base(spec.clone()), grid)
}

/// `Ñ_σ = Σ_ϑ R_σ^ϑ N_ϑ`, with `Ñ_i = R_i N + R N_i`.
pub fn rotate_frame(frame: &FrameField, rot: &RotationField) -> Result<FrameField> {
    if frame.grid != rot.grid || frame.n != rot.n {
        return Err(Error::Gauge("rotation field does not match the frame".into()));
    }
    rot.check()?;
    if let (Some(recipe), Some(a)) = (&frame.recipe, &rot.analytic) {
        if frame.path == DerivativePath::Analytic {
            return FrameField::from_recipe(&recipe.rotated(a.clone()), frame.grid);
        }
    }
    let mut frames = Vec::with_capacity(frame.frames.len());
    let mut du = Vec::with_capacity(frame.frames.len());
    let mut dv = Vec::with_capacity(frame.frames.len());
    for kk in 0..frame.frames.len() {
        let (r, n) = (&rot.r[kk], &frame.frames[kk]);
        frames.push(r * n);
        du.push(&rot.du[kk] * n + r * &frame.du[kk]);
        dv.push(&rot.dv[kk] * n + r * &frame.dv[kk]);
    }
    let path = if frame.path == DerivativePath::Analytic && rot.path == DerivativePath::Analytic {
        DerivativePath::Analytic
    } else {
        DerivativePath::FiniteDifference
    };
    Ok(FrameField { grid: frame.grid, n: frame.n, m: frame.m, frames, du, dv, path, recipe: None })
}
