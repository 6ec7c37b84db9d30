//! Nodal finite differences on the polar grid.
//!
//! Radial derivatives are three-point: the innermost ring reaches across the
//! origin to the antipodal node, the last interior ring uses the unequal spacing
//! to `r = 1`, and the boundary ring is one-sided. Angular derivatives are
//! fourth-order periodic central differences.

use super::grid::PolarGrid;
use super::stencil::fd_weights;

pub struct PolarDerivs {
    pub dr: Vec<f64>,
    pub dtheta: Vec<f64>,
}

fn radial_weights(grid: &PolarGrid) -> ([f64; 3], [f64; 3]) {
    let h = grid.dr();
    let nr = grid.nr();
    let last = fd_weights(grid.radius(nr - 1), &[grid.radius(nr - 2), grid.radius(nr - 1), 1.0], 1);
    let bnd = fd_weights(1.0, &[1.0, 1.0 - 0.5 * h, 1.0 - 1.5 * h], 1);
    ([last[1][0], last[1][1], last[1][2]], [bnd[1][0], bnd[1][1], bnd[1][2]])
}

pub fn polar_derivs(grid: &PolarGrid, f: &[f64]) -> PolarDerivs {
    let nt = grid.ntheta();
    let nr = grid.nr();
    let h = grid.dr();
    let dt = grid.dtheta();
    let (wl, wb) = radial_weights(grid);
    let mut dr = vec![0.0; grid.node_count()];
    let mut dth = vec![0.0; grid.node_count()];
    for i in 0..=nr {
        for j in 0..nt {
            let k = grid.index(i, j);
            dr[k] = if i == 0 {
                (f[grid.index(1, j)] - f[grid.index(0, (j + nt / 2) % nt)]) / (2.0 * h)
            } else if i < nr - 1 {
                (f[grid.index(i + 1, j)] - f[grid.index(i - 1, j)]) / (2.0 * h)
            } else if i == nr - 1 {
                wl[0] * f[grid.index(nr - 2, j)] + wl[1] * f[k] + wl[2] * f[grid.index(nr, j)]
            } else {
                wb[0] * f[k] + wb[1] * f[grid.index(nr - 1, j)] + wb[2] * f[grid.index(nr - 2, j)]
            };
            let at = |s: isize| f[grid.index(i, grid.wrap(j as isize + s))];
            dth[k] = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * dt);
        }
    }
    PolarDerivs { dr, dtheta: dth }
}

/// Cartesian gradient `(f_u, f_v)` at every node.
pub fn gradient(grid: &PolarGrid, f: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let p = polar_derivs(grid, f);
    let mut fu = vec![0.0; grid.node_count()];
    let mut fv = vec![0.0; grid.node_count()];
    for k in 0..grid.node_count() {
        let (i, j) = grid.ring(k);
        let (r, t) = (grid.radius(i), grid.theta(j));
        let (c, s) = (t.cos(), t.sin());
        fu[k] = c * p.dr[k] - s / r * p.dtheta[k];
        fv[k] = s * p.dr[k] + c / r * p.dtheta[k];
    }
    (fu, fv)
}

/// Divergence `a_u + b_v` of a nodal vector field.
pub fn divergence(grid: &PolarGrid, a: &[f64], b: &[f64]) -> Vec<f64> {
    let (au, _) = gradient(grid, a);
    let (_, bv) = gradient(grid, b);
    au.iter().zip(&bv).map(|(x, y)| x + y).collect()
}

/// Scalar curl `b_u - a_v`.
pub fn curl(grid: &PolarGrid, a: &[f64], b: &[f64]) -> Vec<f64> {
    let (_, av) = gradient(grid, a);
    let (bu, _) = gradient(grid, b);
    bu.iter().zip(&av).map(|(x, y)| x - y).collect()
}
