use nalgebra::DMatrix;

use super::functional::{conformality_defect, el_residual, total_torsion};
use super::{GaugeMethod, GaugeResult};
use crate::disc_solvers::fd::gradient;
use crate::disc_solvers::laplace::{fv_divergence, solve_neumann_cells};
use crate::disc_solvers::{PolarGrid, ScalarField, DEFAULT_TOL};
use crate::normal_bundle::{
    rotate_frame, torsion_coefficients, transform_torsions, DerivativePath, FrameField, NormalCurvature,
    RotationField,
};
use crate::surface_catalog::ImmersionSpec;
use crate::{Error, Result};

pub const FLAT_TOL: f64 = 1e-6;

fn require_n2(frame: &FrameField) -> Result<()> {
    if frame.n != 2 {
        return Err(Error::Codimension(format!("this construction needs n = 2, got n = {}", frame.n)));
    }
    Ok(())
}

pub(crate) fn require_conformal(spec: &ImmersionSpec, grid: &PolarGrid) -> Result<()> {
    let defect = conformality_defect(spec, grid);
    if defect >= 1e-8 {
        return Err(Error::NonConformal { defect });
    }
    Ok(())
}

/// Rotation by the angle field `φ`, `R = [[cos φ, sin φ], [-sin φ, cos φ]]`,
/// with derivatives from the given gradient of `φ`.
pub fn angle_rotation(grid: PolarGrid, phi: &[f64], phi_u: &[f64], phi_v: &[f64]) -> RotationField {
    let mut r = Vec::with_capacity(phi.len());
    let mut du = Vec::with_capacity(phi.len());
    let mut dv = Vec::with_capacity(phi.len());
    for kk in 0..phi.len() {
        let (s, c) = phi[kk].sin_cos();
        r.push(DMatrix::from_row_slice(2, 2, &[c, s, -s, c]));
        let d = DMatrix::from_row_slice(2, 2, &[-s, c, -c, -s]);
        du.push(&d * phi_u[kk]);
        dv.push(&d * phi_v[kk]);
    }
    RotationField { grid, n: 2, r, du, dv, path: DerivativePath::FiniteDifference, analytic: None }
}

fn finish(
    spec: &ImmersionSpec,
    start: &FrameField,
    rot: RotationField,
    angle: ScalarField,
    method: GaugeMethod,
    stats: Vec<crate::disc_solvers::LinearSolveStats>,
) -> Result<GaugeResult> {
    let t0 = torsion_coefficients(start);
    let before = total_torsion(&t0, spec);
    let torsion = transform_torsions(&t0, &rot)?;
    let frame = rotate_frame(start, &rot)?;
    let el = el_residual(&torsion);
    let tt = total_torsion(&torsion, spec);
    Ok(GaugeResult {
        method,
        rotation: rot,
        frame,
        total_torsion: tt,
        el_interior_residual: el.interior,
        el_boundary_residual: el.boundary,
        discrete_el_residual: None,
        history: vec![before, tt],
        iterations: 1,
        stagnated: false,
        solve_stats: stats,
        angle: Some(angle),
        torsion,
    })
}

/// Coulomb gauge in codimension two: solve `Δφ = div T̃`, `∂φ/∂ν = T̃·ν` and
/// rotate by `-φ`, so the new torsion is `T̃ - ∇φ`.
pub fn coulomb_gauge_n2(spec: &ImmersionSpec, start: &FrameField) -> Result<GaugeResult> {
    require_n2(start)?;
    require_conformal(spec, &start.grid)?;
    let grid = start.grid;
    let t = torsion_coefficients(start);
    let (a, b) = (t.component(0, 0, 1), t.component(1, 0, 1));
    let (cells, g) = fv_divergence(&grid, &a, &b);
    let (phi, stats) = solve_neumann_cells(&grid, &cells, &g, DEFAULT_TOL)?;
    let (pu, pv) = gradient(&grid, &phi.values);
    let neg = |x: &[f64]| x.iter().map(|y| -y).collect::<Vec<f64>>();
    let rot = angle_rotation(grid, &neg(&phi.values), &neg(&pu), &neg(&pv));
    finish(spec, start, rot, phi, GaugeMethod::Neumann, vec![stats])
}

fn flat_sup(spec: &ImmersionSpec, start: &FrameField) -> f64 {
    let curv = match &start.recipe {
        Some(r) => NormalCurvature::from_recipe(r, start.grid).ok(),
        None => None,
    }
    .unwrap_or_else(|| NormalCurvature::from_torsion(&torsion_coefficients(start), spec));
    curv.sup_abs()
}

/// Torsion-free frame of a flat normal bundle (`n = 2`): integrates
/// `φ_u = -T_{1,1}^2`, `φ_v = -T_{1,2}^2` from the first node of ring 0, radially
/// along `θ = 0` and then around each ring.
pub fn torsion_free_frame(spec: &ImmersionSpec, start: &FrameField, flat_tol: f64) -> Result<GaugeResult> {
    require_n2(start)?;
    let sup = flat_sup(spec, start);
    if sup >= flat_tol {
        return Err(Error::NotFlat { sup });
    }
    let grid = start.grid;
    let (nr, nt) = (grid.nr(), grid.ntheta());
    let t = torsion_coefficients(start);
    let (a, b) = (t.component(0, 0, 1), t.component(1, 0, 1));
    let radial = |k: usize| {
        let th = grid.theta(grid.ring(k).1);
        -(a[k] * th.cos() + b[k] * th.sin())
    };
    let angular = |k: usize| {
        let (i, j) = grid.ring(k);
        let th = grid.theta(j);
        -grid.radius(i) * (-a[k] * th.sin() + b[k] * th.cos())
    };
    let mut phi = vec![0.0; grid.node_count()];
    for i in 1..=nr {
        let (k0, k1) = (grid.index(i - 1, 0), grid.index(i, 0));
        let dr = grid.radius(i) - grid.radius(i - 1);
        phi[k1] = phi[k0] + 0.5 * dr * (radial(k0) + radial(k1));
    }
    let dt = grid.dtheta();
    for i in 0..=nr {
        let f: Vec<f64> = (0..nt).map(|j| angular(grid.index(i, j))).collect();
        let at = |j: isize| f[grid.wrap(j)];
        for j in 1..nt {
            let jj = j as isize - 1;
            let inc = dt * (-at(jj - 1) + 13.0 * at(jj) + 13.0 * at(jj + 1) - at(jj + 2)) / 24.0;
            phi[grid.index(i, j)] = phi[grid.index(i, j - 1)] + inc;
        }
    }
    let (pu, pv) = gradient(&grid, &phi);
    let rot = angle_rotation(grid, &phi, &pu, &pv);
    let field = ScalarField { grid, values: phi };
    finish(spec, start, rot, field, GaugeMethod::TorsionFree, Vec::new())
}
