use nalgebra::DMatrix;
use serde::Serialize;

use crate::disc_solvers::{fd::divergence, quadrature, PolarGrid, ScalarField};
use crate::geometry_core::metric;
use crate::normal_bundle::TorsionField;
use crate::surface_catalog::ImmersionSpec;

/// `g^{ij} W` at every node.
pub(crate) fn metric_weights(spec: &ImmersionSpec, grid: &PolarGrid) -> Vec<[[f64; 2]; 2]> {
    grid.points()
        .iter()
        .map(|&(u, v)| {
            let (_, xu, xv) = spec.first(u, v);
            let (_, gi, w) = metric(&xu, &xv);
            [[gi[0][0] * w, gi[0][1] * w], [gi[1][0] * w, gi[1][1] * w]]
        })
        .collect()
}

fn frob(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

/// Pointwise density `Σ_{σ,ϑ} g^{ij} T_{σ,i}^ϑ T_{σ,j}^ϑ W`.
pub fn torsion_density(t: &TorsionField, spec: &ImmersionSpec) -> ScalarField {
    let wts = metric_weights(spec, &t.grid);
    let values = (0..t.grid.node_count())
        .map(|kk| {
            let (a, b) = (&t.t1[kk], &t.t2[kk]);
            let m = wts[kk];
            m[0][0] * frob(a, a) + 2.0 * m[0][1] * frob(a, b) + m[1][1] * frob(b, b)
        })
        .collect();
    ScalarField { grid: t.grid, values }
}

/// Total torsion `Σ_{σ,ϑ} ∫∫ g^{ij} T_{σ,i}^ϑ T_{σ,j}^ϑ W du dv`.
pub fn total_torsion(t: &TorsionField, spec: &ImmersionSpec) -> f64 {
    torsion_density(t, spec).quadrature()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ElResidual {
    /// `sup |div(T_{σ,1}^ϑ, T_{σ,2}^ϑ)|` over interior nodes.
    pub interior: f64,
    /// `sup |(T_{σ,1}^ϑ, T_{σ,2}^ϑ)·ν|` over the boundary ring.
    pub boundary: f64,
}

pub fn el_residual(t: &TorsionField) -> ElResidual {
    let grid = t.grid;
    let mut out = ElResidual { interior: 0.0, boundary: 0.0 };
    for s in 0..t.n {
        for r in s + 1..t.n {
            let a = t.component(0, s, r);
            let b = t.component(1, s, r);
            let d = divergence(&grid, &a, &b);
            out.interior = d[..grid.interior_count()].iter().fold(out.interior, |m, x| m.max(x.abs()));
            for kk in grid.boundary_nodes() {
                let (u, v) = grid.point(kk);
                out.boundary = out.boundary.max((a[kk] * u + b[kk] * v).abs());
            }
        }
    }
    out
}

/// `(∫∫ |T - T'|_F^2)^{1/2}` over the disc.
pub fn torsion_l2_distance(a: &TorsionField, b: &TorsionField) -> f64 {
    let vals: Vec<f64> = (0..a.grid.node_count())
        .map(|kk| (&a.t1[kk] - &b.t1[kk]).norm_squared() + (&a.t2[kk] - &b.t2[kk]).norm_squared())
        .collect();
    quadrature(&a.grid, &vals).sqrt()
}

/// Largest `max(|g11 - g22|, |g12|)` over the grid nodes.
pub fn conformality_defect(spec: &ImmersionSpec, grid: &PolarGrid) -> f64 {
    grid.points()
        .iter()
        .map(|&(u, v)| {
            let (_, xu, xv) = spec.first(u, v);
            let (g, _, _) = metric(&xu, &xv);
            (g[0][0] - g[1][1]).abs().max(g[0][1].abs())
        })
        .fold(0.0, f64::max)
}
