//! Finite-volume Laplacian on the polar grid and the Poisson solvers built on it.
//!
//! Radial faces use two-point fluxes. Angular faces use the compact
//! fourth-order flux, i.e. the edge mass matrix `(-1, 14, -1) / 12` applied to
//! two-point differences. The outer face at `r = 1` either carries a prescribed
//! flux (Neumann) or the one-sided derivative through `(1, 1 - h/2, 1 - 3h/2)`
//! (Dirichlet). In the Dirichlet case the last ring is row-scaled so the
//! discrete operator stays symmetric.

use rayon::prelude::*;

use super::cg::{pcg, CgOutcome};
use super::field::{quadrature, ScalarField};
use super::fd::polar_derivs;
use super::grid::PolarGrid;
use super::stencil::fd_weights;
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    None,
    MeanZero,
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct LinearSolveStats {
    pub iterations: usize,
    pub relative_residual: f64,
    pub constraint: Constraint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    Dirichlet,
    Neumann,
}

/// Compact angular flux weights applied to neighbouring edge quantities.
pub const EDGE_MASS: [f64; 3] = [-1.0 / 12.0, 14.0 / 12.0, -1.0 / 12.0];

pub(crate) fn dirichlet_row_scale(grid: &PolarGrid) -> f64 {
    let rm = 1.0 - grid.dr();
    rm / (rm + 1.0 / 3.0)
}

/// Cell-integrated operator on interior unknowns (`x.len() == nr * ntheta`);
/// boundary values are taken as zero, Neumann flux as zero.
pub fn apply_operator(grid: &PolarGrid, closure: Closure, x: &[f64], out: &mut [f64]) {
    let nt = grid.ntheta();
    let nr = grid.nr();
    let h = grid.dr();
    let dt = grid.dtheta();
    let s = dirichlet_row_scale(grid);
    out.par_chunks_mut(nt).enumerate().for_each(|(i, row)| {
        let ri = grid.radius(i);
        let ca = h / (ri * dt) / 12.0;
        for j in 0..nt {
            let k = i * nt + j;
            let at = |sj: isize| x[i * nt + grid.wrap(j as isize + sj)];
            let mut acc = ca * (-at(2) + 16.0 * at(1) - 30.0 * x[k] + 16.0 * at(-1) - at(-2));
            if i + 1 < nr {
                acc += dt * grid.face_radius(i) * (x[k + nt] - x[k]) / h;
            } else if closure == Closure::Dirichlet {
                acc += dt * (-3.0 * x[k] + x[k - nt] / 3.0) / h;
            }
            if i > 0 {
                acc -= dt * grid.face_radius(i - 1) * (x[k] - x[k - nt]) / h;
            }
            if i + 1 == nr && closure == Closure::Dirichlet {
                acc *= s;
            }
            row[j] = acc;
        }
    });
}

fn operator_diagonal(grid: &PolarGrid, closure: Closure) -> Vec<f64> {
    let nt = grid.ntheta();
    let nr = grid.nr();
    let h = grid.dr();
    let dt = grid.dtheta();
    let s = dirichlet_row_scale(grid);
    let mut d = vec![0.0; grid.interior_count()];
    for i in 0..nr {
        let mut a = -30.0 * h / (grid.radius(i) * dt) / 12.0;
        if i + 1 < nr {
            a -= dt * grid.face_radius(i) / h;
        } else if closure == Closure::Dirichlet {
            a -= 3.0 * dt / h;
        }
        if i > 0 {
            a -= dt * grid.face_radius(i - 1) / h;
        }
        if i + 1 == nr && closure == Closure::Dirichlet {
            a *= s;
        }
        d[i * nt..(i + 1) * nt].iter_mut().for_each(|x| *x = a);
    }
    d
}

/// Discrete Laplacian of a nodal field. Interior nodes use the finite-volume
/// balance divided by the cell measure; boundary nodes use one-sided radial
/// differences `f_rr + f_r + f_thth`.
pub fn laplacian_apply(f: &ScalarField) -> ScalarField {
    let grid = f.grid;
    let nt = grid.ntheta();
    let nr = grid.nr();
    let h = grid.dr();
    let dt = grid.dtheta();
    let mut out = vec![0.0; grid.node_count()];
    apply_operator(&grid, Closure::Neumann, &f.values[..grid.interior_count()], &mut out[..grid.interior_count()]);
    let w = fd_weights(1.0, &[1.0, 1.0 - 0.5 * h, 1.0 - 1.5 * h], 1);
    for j in 0..nt {
        let k = grid.index(nr - 1, j);
        let flux = w[1][0] * f.values[grid.index(nr, j)] + w[1][1] * f.values[k] + w[1][2] * f.values[k - nt];
        out[k] += dt * flux;
    }
    for i in 0..nr {
        let a = grid.cell_area(i);
        out[i * nt..(i + 1) * nt].iter_mut().for_each(|x| *x /= a);
    }
    let wb = fd_weights(1.0, &[1.0, 1.0 - 0.5 * h, 1.0 - 1.5 * h, 1.0 - 2.5 * h], 2);
    for j in 0..nt {
        let col = [
            f.values[grid.index(nr, j)],
            f.values[grid.index(nr - 1, j)],
            f.values[grid.index(nr - 2, j)],
            f.values[grid.index(nr - 3, j)],
        ];
        let frr: f64 = col.iter().zip(&wb[2]).map(|(a, b)| a * b).sum();
        let fr: f64 = col.iter().zip(&wb[1]).map(|(a, b)| a * b).sum();
        let at = |s: isize| f.values[grid.index(nr, grid.wrap(j as isize + s))];
        let ftt = (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) / (12.0 * dt * dt);
        out[grid.index(nr, j)] = frr + fr + ftt;
    }
    ScalarField { grid, values: out }
}

/// Line averages of a nodal Cartesian vector field `(a, b)` over the grid edges,
/// with the compact angular mass already applied.
///
/// Returns `(radial, angular)`: `radial[i * nt + j]` is the face between rings
/// `i` and `i + 1` (for `i < nr - 1`), `angular[i * nt + j]` the face between
/// sectors `j` and `j + 1` on ring `i`.
pub fn edge_fluxes(grid: &PolarGrid, a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let nt = grid.ntheta();
    let nr = grid.nr();
    let n = grid.node_count();
    let mut vr = vec![0.0; n];
    let mut vt = vec![0.0; n];
    for k in 0..n {
        let (_, j) = grid.ring(k);
        let t = grid.theta(j);
        vr[k] = a[k] * t.cos() + b[k] * t.sin();
        vt[k] = -a[k] * t.sin() + b[k] * t.cos();
    }
    let mut radial = vec![0.0; grid.interior_count()];
    for i in 0..nr - 1 {
        for j in 0..nt {
            let k = i * nt + j;
            radial[k] = 0.5 * (vr[k] + vr[k + nt]);
        }
    }
    let mut avg = vec![0.0; grid.interior_count()];
    for i in 0..nr {
        for j in 0..nt {
            let at = |s: isize| vt[i * nt + grid.wrap(j as isize + s)];
            avg[i * nt + j] = (-at(-1) + 13.0 * at(0) + 13.0 * at(1) - at(2)) / 24.0;
        }
    }
    let angular = apply_edge_mass(grid, &avg);
    (radial, angular)
}

pub fn apply_edge_mass(grid: &PolarGrid, e: &[f64]) -> Vec<f64> {
    let nt = grid.ntheta();
    let mut out = vec![0.0; e.len()];
    for i in 0..e.len() / nt {
        for j in 0..nt {
            let at = |s: isize| e[i * nt + grid.wrap(j as isize + s)];
            out[i * nt + j] = EDGE_MASS[0] * at(-1) + EDGE_MASS[1] * at(0) + EDGE_MASS[2] * at(1);
        }
    }
    out
}

/// Cell-integrated divergence from radial and (mass-weighted) angular edge values
/// plus the outward flux `g` on the boundary ring.
pub fn cell_divergence(grid: &PolarGrid, radial: &[f64], angular: &[f64], g: &[f64]) -> Vec<f64> {
    let nt = grid.ntheta();
    let nr = grid.nr();
    let h = grid.dr();
    let dt = grid.dtheta();
    let mut d = vec![0.0; grid.interior_count()];
    for i in 0..nr {
        for j in 0..nt {
            let k = i * nt + j;
            let outer = if i + 1 < nr { grid.face_radius(i) * radial[k] } else { g[j] };
            let inner = if i > 0 { grid.face_radius(i - 1) * radial[k - nt] } else { 0.0 };
            let jm = i * nt + grid.wrap(j as isize - 1);
            d[k] = dt * (outer - inner) + h * (angular[k] - angular[jm]);
        }
    }
    d
}

/// Finite-volume divergence density of a nodal Cartesian vector field, with the
/// outer flux read from the boundary nodes. Returns `(cell integrals, boundary flux)`.
pub fn fv_divergence(grid: &PolarGrid, a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (radial, angular) = edge_fluxes(grid, a, b);
    let g: Vec<f64> = grid
        .boundary_nodes()
        .map(|k| {
            let t = grid.theta(grid.ring(k).1);
            a[k] * t.cos() + b[k] * t.sin()
        })
        .collect();
    (cell_divergence(grid, &radial, &angular, &g), g)
}

fn max_iterations(grid: &PolarGrid) -> usize {
    (20.0 * (grid.node_count() as f64).sqrt() * 10.0) as usize
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::Param { field: "tol".into(), reason: "must be positive".into() });
    }
    Ok(())
}

/// `Δφ = f` in B, `φ = 0` on the boundary ring.
pub fn solve_dirichlet_zero(f: &ScalarField, tol: f64) -> Result<(ScalarField, LinearSolveStats)> {
    check_tol(tol)?;
    let grid = f.grid;
    let nt = grid.ntheta();
    let nr = grid.nr();
    let s = dirichlet_row_scale(&grid);
    let mut rhs: Vec<f64> = (0..grid.interior_count()).map(|k| -f.values[k] * grid.cell_area(k / nt)).collect();
    rhs[(nr - 1) * nt..].iter_mut().for_each(|x| *x *= s);
    let (x, stats) = solve_spd(&grid, Closure::Dirichlet, &rhs, tol, false)?;
    let mut values = x;
    values.resize(grid.node_count(), 0.0);
    Ok((ScalarField { grid, values }, stats))
}

pub fn compat_tol_default(f: &ScalarField) -> f64 {
    1e-6 * (1.0 + f.interior_sup())
}

/// `Δφ = f` in B, `∂φ/∂ν = g` on the boundary ring (`g` indexed by the boundary
/// nodes, i.e. a field whose interior entries are ignored), area-mean zero.
pub fn solve_neumann(f: &ScalarField, g: &ScalarField, tol: f64) -> Result<(ScalarField, LinearSolveStats)> {
    solve_neumann_with(f, g, tol, compat_tol_default(f))
}

pub fn solve_neumann_with(
    f: &ScalarField,
    g: &ScalarField,
    tol: f64,
    compat_tol: f64,
) -> Result<(ScalarField, LinearSolveStats)> {
    check_tol(tol)?;
    let grid = f.grid;
    if g.grid != grid {
        return Err(Error::Grid("Neumann data on different grids".into()));
    }
    let defect = f.quadrature() - g.boundary_integral();
    if defect.abs() > compat_tol {
        return Err(Error::Compatibility { defect, tol: compat_tol });
    }
    let nt = grid.ntheta();
    let gb = &g.values[grid.interior_count()..];
    let cells: Vec<f64> = (0..grid.interior_count()).map(|k| f.values[k] * grid.cell_area(k / nt)).collect();
    solve_neumann_cells(&grid, &cells, gb, tol)
}

/// Neumann solve from cell-integrated sources; `g` holds one flux per boundary node.
pub(crate) fn solve_neumann_cells(
    grid: &PolarGrid,
    cells: &[f64],
    g: &[f64],
    tol: f64,
) -> Result<(ScalarField, LinearSolveStats)> {
    let nt = grid.ntheta();
    let nr = grid.nr();
    let h = grid.dr();
    let dt = grid.dtheta();
    let mut rhs: Vec<f64> = cells.iter().map(|x| -x).collect();
    for j in 0..nt {
        rhs[(nr - 1) * nt + j] += dt * g[j];
    }
    let mean = rhs.iter().sum::<f64>() / rhs.len() as f64;
    rhs.iter_mut().for_each(|x| *x -= mean);
    let (mut x, stats) = solve_spd(grid, Closure::Neumann, &rhs, tol, true)?;
    let area_mean = quadrature(grid, &x) / area_total(grid);
    x.iter_mut().for_each(|v| *v -= area_mean);
    let mut values = x;
    values.resize(grid.node_count(), 0.0);
    for j in 0..nt {
        let x1 = values[grid.index(nr - 1, j)];
        let x2 = values[grid.index(nr - 2, j)];
        values[grid.index(nr, j)] = 0.375 * (g[j] * h + 3.0 * x1 - x2 / 3.0);
    }
    Ok((ScalarField { grid: *grid, values }, stats))
}

fn area_total(grid: &PolarGrid) -> f64 {
    (0..grid.nr()).map(|i| grid.cell_area(i)).sum::<f64>() * grid.ntheta() as f64
}

/// Solves `-A x = rhs` (already sign-flipped by the caller).
fn solve_spd(
    grid: &PolarGrid,
    closure: Closure,
    rhs: &[f64],
    tol: f64,
    project: bool,
) -> Result<(Vec<f64>, LinearSolveStats)> {
    let diag: Vec<f64> = operator_diagonal(grid, closure).iter().map(|d| -d).collect();
    let g = *grid;
    let op = move |x: &[f64], y: &mut [f64]| {
        apply_operator(&g, closure, x, y);
        y.iter_mut().for_each(|v| *v = -*v);
    };
    let CgOutcome { x, iterations, relative_residual, converged } =
        pcg(op, &diag, rhs, tol, max_iterations(grid), project);
    if !converged {
        return Err(Error::Solver { iterations, residual: relative_residual });
    }
    let constraint = if project { Constraint::MeanZero } else { Constraint::None };
    Ok((x, LinearSolveStats { iterations, relative_residual, constraint }))
}

/// Radial profile check helper: `∂_r f` on the boundary ring from the nodal stencil.
pub fn boundary_normal_derivative(f: &ScalarField) -> Vec<f64> {
    let p = polar_derivs(&f.grid, &f.values);
    p.dr[f.grid.interior_count()..].to_vec()
}
