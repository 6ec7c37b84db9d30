//! Descent over SO(n)-valued rotation fields.
//!
//! The functional is discretized on the grid edges: the transport of the start
//! frame along an edge `e = (a, b)` of length `L` is `U_e = exp(L T_e)`, and a
//! rotation field `R` changes it to `R_b U_e R_a^t`. The edge torsion is
//! `log(R_b U_e R_a^t) / L`. Radial edges carry the weight `r Δθ h`; angular edges
//! on ring `i` the weight `h r_i Δθ` together with the compact mass `(-1, 14, -1)/12`,
//! so for `n = 2` the minimizer solves the same finite-volume Neumann problem as
//! the codimension-two route.
//!
//! Steps are preconditioned by the Neumann Laplacian, one solve per rotation
//! plane, and the step length is controlled by backtracking.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::functional::{el_residual, total_torsion};
use super::neumann::require_conformal;
use super::{GaugeMethod, GaugeResult};
use crate::disc_solvers::laplace::solve_neumann_cells;
use crate::disc_solvers::{LinearSolveStats, PolarGrid, DEFAULT_TOL};
use crate::normal_bundle::{
    expm_f64, logm_near_identity, polar_factor, rotate_frame, skew_part, torsion_coefficients, transform_torsions,
    FrameField, RotationField, TorsionField,
};
use crate::surface_catalog::ImmersionSpec;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DescentOptions {
    /// Initial step length; `1` is a full preconditioned step.
    pub step: f64,
    pub max_iter: usize,
    /// Stop when the discrete Euler-Lagrange residual falls below this.
    pub tol: f64,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions { step: 1.0, max_iter: 5000, tol: 1e-8 }
    }
}

const ACCEPTS_BEFORE_RESET: usize = 3;
const MIN_STEP: f64 = 1e-12;

/// `dexp^{-1}_X (Y) = Σ B_k / k! ad_X^k Y`, truncated after `ad^8`.
fn dexp_inv(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    const C: [f64; 9] = [1.0, -0.5, 1.0 / 12.0, 0.0, -1.0 / 720.0, 0.0, 1.0 / 30240.0, 0.0, -1.0 / 1209600.0];
    let mut term = y.clone();
    let mut out = y.clone();
    for c in C.iter().skip(1) {
        term = x * &term - &term * x;
        if *c != 0.0 {
            out += &term * *c;
        }
    }
    out
}

struct Lattice {
    grid: PolarGrid,
    n: usize,
    radial_u0: Vec<DMatrix<f64>>,
    angular_u0: Vec<DMatrix<f64>>,
}

struct Evaluation {
    energy: f64,
    radial_x: Vec<DMatrix<f64>>,
    angular_x: Vec<DMatrix<f64>>,
}

fn mass(e: &[DMatrix<f64>], i: usize, j: usize, grid: &PolarGrid) -> DMatrix<f64> {
    let nt = grid.ntheta();
    let at = |s: isize| &e[i * nt + grid.wrap(j as isize + s)];
    (at(-1) * -1.0 + at(0) * 14.0 - at(1)) / 12.0
}

impl Lattice {
    fn new(t0: &TorsionField) -> Self {
        let grid = t0.grid;
        let (nr, nt) = (grid.nr(), grid.ntheta());
        let h = grid.dr();
        let dt = grid.dtheta();
        let along = |k: usize, radial: bool| -> DMatrix<f64> {
            let th = grid.theta(grid.ring(k).1);
            if radial {
                &t0.t1[k] * th.cos() + &t0.t2[k] * th.sin()
            } else {
                &t0.t1[k] * -th.sin() + &t0.t2[k] * th.cos()
            }
        };
        let radial_u0 = (0..(nr - 1) * nt)
            .into_par_iter()
            .map(|k| expm_f64(&((along(k, true) + along(k + nt, true)) * (0.5 * h))))
            .collect();
        let angular_u0 = (0..nr * nt)
            .into_par_iter()
            .map(|k| {
                let (i, j) = grid.ring(k);
                let at = |s: isize| along(grid.index(i, grid.wrap(j as isize + s)), false);
                let avg = (at(-1) * -1.0 + at(0) * 13.0 + at(1) * 13.0 - at(2)) / 24.0;
                expm_f64(&(avg * (grid.radius(i) * dt)))
            })
            .collect();
        Lattice { grid, n: t0.n, radial_u0, angular_u0 }
    }

    fn evaluate(&self, r: &[DMatrix<f64>]) -> Evaluation {
        let grid = &self.grid;
        let nt = grid.ntheta();
        let h = grid.dr();
        let dt = grid.dtheta();
        let radial_x: Vec<DMatrix<f64>> = (0..self.radial_u0.len())
            .into_par_iter()
            .map(|k| logm_near_identity(&(&r[k + nt] * &self.radial_u0[k] * r[k].transpose())))
            .collect();
        let angular_x: Vec<DMatrix<f64>> = (0..self.angular_u0.len())
            .into_par_iter()
            .map(|k| {
                let (i, j) = grid.ring(k);
                let b = grid.index(i, (j + 1) % nt);
                logm_near_identity(&(&r[b] * &self.angular_u0[k] * r[k].transpose()))
            })
            .collect();
        let mut energy = 0.0;
        for (k, x) in radial_x.iter().enumerate() {
            let i = k / nt;
            energy += grid.face_radius(i) * dt / h * x.norm_squared();
        }
        for (k, x) in angular_x.iter().enumerate() {
            let (i, j) = grid.ring(k);
            let m = mass(&angular_x, i, j, grid);
            energy += h / (grid.radius(i) * dt) * x.component_mul(&m).sum();
        }
        Evaluation { energy, radial_x, angular_x }
    }

    /// Gradient `G_a` with `dE = Σ_a <G_a, A_a>` for `R_a -> exp(A_a) R_a`.
    fn gradient(&self, ev: &Evaluation) -> Vec<DMatrix<f64>> {
        let grid = &self.grid;
        let nt = grid.ntheta();
        let h = grid.dr();
        let dt = grid.dtheta();
        let mut g = vec![DMatrix::zeros(self.n, self.n); grid.interior_count()];
        for (k, x) in ev.radial_x.iter().enumerate() {
            let z = x * (2.0 * grid.face_radius(k / nt) * dt / h);
            g[k + nt] += dexp_inv(&-x, &z);
            g[k] -= dexp_inv(x, &z);
        }
        for (k, x) in ev.angular_x.iter().enumerate() {
            let (i, j) = grid.ring(k);
            let z = mass(&ev.angular_x, i, j, grid) * (2.0 * h / (grid.radius(i) * dt));
            g[grid.index(i, (j + 1) % nt)] += dexp_inv(&-x, &z);
            g[k] -= dexp_inv(x, &z);
        }
        g.into_iter().map(|m| skew_part(&m)).collect()
    }

    /// `sup |div T'|` of the edge torsions, from `div · area = -G_{σϑ} / 2`.
    fn residual(&self, g: &[DMatrix<f64>]) -> f64 {
        let nt = self.grid.ntheta();
        g.iter().enumerate().map(|(k, m)| m.amax() / (2.0 * self.grid.cell_area(k / nt))).fold(0.0, f64::max)
    }
}

/// Boundary rotations from the one-sided closure `∂_ν R = -R T_ν` through the
/// two outermost rings.
fn close_boundary(grid: &PolarGrid, t0: &TorsionField, r: &mut Vec<DMatrix<f64>>) {
    let (nr, nt) = (grid.nr(), grid.ntheta());
    let h = grid.dr();
    let n = t0.n;
    r.truncate(grid.interior_count());
    for j in 0..nt {
        let kb = grid.index(nr, j);
        let th = grid.theta(j);
        let tn = &t0.t1[kb] * th.cos() + &t0.t2[kb] * th.sin();
        let lhs = &r[grid.index(nr - 1, j)] * 3.0 - &r[grid.index(nr - 2, j)] / 3.0;
        let m = DMatrix::identity(n, n) * (8.0 / 3.0) + tn * h;
        let inv = m.try_inverse().unwrap_or_else(|| DMatrix::identity(n, n) * 0.375);
        r.push(polar_factor(&(lhs * inv)));
    }
}

/// Normal Coulomb frame in any codimension by preconditioned descent.
pub fn coulomb_gauge_general(spec: &ImmersionSpec, start: &FrameField, opts: DescentOptions) -> Result<GaugeResult> {
    if start.n < 2 {
        return Err(Error::Codimension("descent needs n >= 2".into()));
    }
    if !(opts.step > 0.0) {
        return Err(Error::Param { field: "step".into(), reason: "must be positive".into() });
    }
    require_conformal(spec, &start.grid)?;
    let grid = start.grid;
    let n = start.n;
    let t0 = torsion_coefficients(start);
    let lattice = Lattice::new(&t0);
    let mut r = vec![DMatrix::<f64>::identity(n, n); grid.interior_count()];
    let mut ev = lattice.evaluate(&r);
    let mut history = vec![ev.energy];
    let mut eps = opts.step;
    let mut accepted_run = 0;
    let mut stagnated = false;
    let mut iterations = 0;
    let mut stats: Vec<LinearSolveStats> = Vec::new();
    let mut grad = lattice.gradient(&ev);
    let mut residual = lattice.residual(&grad);
    while residual >= opts.tol && iterations < opts.max_iter {
        iterations += 1;
        let mut dir = vec![DMatrix::<f64>::zeros(n, n); grid.interior_count()];
        for s in 0..n {
            for t in s + 1..n {
                let cells: Vec<f64> = grad.iter().map(|m| 0.5 * m[(s, t)]).collect();
                let (alpha, st) = solve_neumann_cells(&grid, &cells, &vec![0.0; grid.ntheta()], DEFAULT_TOL)?;
                stats.push(st);
                for (d, a) in dir.iter_mut().zip(&alpha.values) {
                    d[(s, t)] = *a;
                    d[(t, s)] = -*a;
                }
            }
        }
        loop {
            let trial: Vec<DMatrix<f64>> =
                r.par_iter().zip(&dir).map(|(rk, d)| expm_f64(&(d * eps)) * rk).collect();
            let tev = lattice.evaluate(&trial);
            if tev.energy <= ev.energy {
                r = trial;
                ev = tev;
                history.push(ev.energy);
                accepted_run += 1;
                if accepted_run >= ACCEPTS_BEFORE_RESET {
                    eps = opts.step;
                    accepted_run = 0;
                }
                break;
            }
            eps *= 0.5;
            accepted_run = 0;
            if eps < MIN_STEP {
                stagnated = true;
                break;
            }
        }
        if stagnated {
            break;
        }
        grad = lattice.gradient(&ev);
        residual = lattice.residual(&grad);
    }
    close_boundary(&grid, &t0, &mut r);
    let rot = RotationField::from_nodal(grid, r)?;
    let torsion = transform_torsions(&t0, &rot)?;
    let frame = rotate_frame(start, &rot)?;
    let el = el_residual(&torsion);
    Ok(GaugeResult {
        method: GaugeMethod::Descent,
        total_torsion: total_torsion(&torsion, spec),
        el_interior_residual: el.interior,
        el_boundary_residual: el.boundary,
        discrete_el_residual: Some(residual),
        history,
        iterations,
        stagnated,
        solve_stats: stats,
        angle: None,
        rotation: rot,
        frame,
        torsion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dexp_inv_matches_finite_difference() {
        let x = DMatrix::from_row_slice(3, 3, &[0.0, 0.3, -0.2, -0.3, 0.0, 0.1, 0.2, -0.1, 0.0]);
        let b = DMatrix::from_row_slice(3, 3, &[0.0, -0.1, 0.4, 0.1, 0.0, 0.2, -0.4, -0.2, 0.0]);
        let eps = 1e-6;
        let u = expm_f64(&x);
        let plus = logm_near_identity(&(expm_f64(&(&b * eps)) * &u));
        let minus = logm_near_identity(&(expm_f64(&(&b * -eps)) * &u));
        let fd = (plus - minus) / (2.0 * eps);
        assert!((fd - dexp_inv(&x, &b)).amax() < 1e-8);
    }
}
