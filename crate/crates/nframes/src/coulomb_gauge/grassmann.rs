use num_complex::Complex64;
use serde::Serialize;

use crate::disc_solvers::fd::gradient;
use crate::disc_solvers::laplace::fv_divergence;
use crate::disc_solvers::{laplacian_apply, quadrature, solve_dirichlet_zero, ScalarField, DEFAULT_TOL};
use crate::normal_bundle::{NormalCurvature, TorsionField};
use crate::{Error, Result};

/// Integral functions `τ^{(σϑ)}`, `σ < ϑ` in wedge order, with their gradients.
#[derive(Clone, Debug)]
pub struct GrassmannField {
    pub n: usize,
    pub pairs: Vec<(usize, usize)>,
    pub tau: Vec<ScalarField>,
    pub grad: Vec<(Vec<f64>, Vec<f64>)>,
    /// `‖∇τ - (-T_2, T_1)‖ / ‖T‖` in `L²`.
    pub mismatch: f64,
    pub warning: Option<String>,
}

impl GrassmannField {
    /// `τ^{(σϑ)}` for any ordered pair, using `τ^{(ϑσ)} = -τ^{(σϑ)}`.
    pub fn tau_at(&self, s: usize, t: usize, k: usize) -> f64 {
        match s.cmp(&t) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.tau[self.pair_index(s, t)].values[k],
            std::cmp::Ordering::Greater => -self.tau[self.pair_index(t, s)].values[k],
        }
    }

    fn pair_index(&self, s: usize, t: usize) -> usize {
        self.pairs.iter().position(|p| *p == (s, t)).expect("pair in range")
    }

    /// `|𝒯|` per node.
    pub fn magnitude(&self) -> ScalarField {
        let grid = self.tau[0].grid;
        let values =
            (0..grid.node_count()).map(|k| self.tau.iter().map(|t| t.values[k].powi(2)).sum::<f64>().sqrt()).collect();
        ScalarField { grid, values }
    }

    /// `‖∇𝒯‖²_{L²}`.
    pub fn grad_l2_squared(&self) -> f64 {
        let grid = self.tau[0].grid;
        let dens: Vec<f64> = (0..grid.node_count())
            .map(|k| self.grad.iter().map(|(a, b)| a[k] * a[k] + b[k] * b[k]).sum())
            .collect();
        quadrature(&grid, &dens)
    }
}

/// Solves `Δτ = ∂_v T_{σ,1}^ϑ - ∂_u T_{σ,2}^ϑ`, `τ = 0` on the boundary, so that
/// `∇τ ≈ (-T_{σ,2}^ϑ, T_{σ,1}^ϑ)` for a Coulomb frame.
pub fn integral_functions(t: &TorsionField) -> Result<GrassmannField> {
    if t.n < 2 {
        return Err(Error::Codimension("integral functions need n >= 2".into()));
    }
    let grid = t.grid;
    let nt = grid.ntheta();
    let mut pairs = Vec::new();
    let mut tau = Vec::new();
    let mut grads = Vec::new();
    let (mut err2, mut norm2) = (0.0, 0.0);
    for s in 0..t.n {
        for r in s + 1..t.n {
            let t1 = t.component(0, s, r);
            let t2 = t.component(1, s, r);
            let a: Vec<f64> = t2.iter().map(|x| -x).collect();
            let (cells, _) = fv_divergence(&grid, &a, &t1);
            let mut f = vec![0.0; grid.node_count()];
            for (k, c) in cells.iter().enumerate() {
                f[k] = c / grid.cell_area(k / nt);
            }
            let (sol, _) = solve_dirichlet_zero(&ScalarField { grid, values: f }, DEFAULT_TOL)?;
            let (gu, gv) = gradient(&grid, &sol.values);
            let e: Vec<f64> = (0..grid.node_count()).map(|k| (gu[k] + t2[k]).powi(2) + (gv[k] - t1[k]).powi(2)).collect();
            let m: Vec<f64> = (0..grid.node_count()).map(|k| t1[k] * t1[k] + t2[k] * t2[k]).collect();
            err2 += quadrature(&grid, &e);
            norm2 += quadrature(&grid, &m);
            pairs.push((s, r));
            tau.push(sol);
            grads.push((gu, gv));
        }
    }
    let mismatch = if norm2 > 0.0 { (err2 / norm2).sqrt() } else { err2.sqrt() };
    let warning = (mismatch > 1e-2).then(|| {
        format!("gradient of the integral functions misses (-T2, T1) by {mismatch:.3e} relative; frame is not Coulomb")
    });
    Ok(GrassmannField { n: t.n, pairs, tau, grad: grads, mismatch, warning })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrassmannResiduals {
    /// `sup |Δτ + δτ - S|` over interior nodes and pairs.
    pub pde_residual: f64,
    /// `min [√(n-2)/2 |∇𝒯|² + |𝒮| - |Δ𝒯|]` over interior nodes.
    pub growth_margin: f64,
    /// `sup |Σ (τ_w^{(σϑ)})²|` with `τ_w = (τ_u + i τ_v) / 2`.
    pub phi_sup: f64,
}

/// `δτ^{(σϑ)} = Σ_ω det(∇τ^{(σω)}, ∇τ^{(ωϑ)})` at node `k`.
fn delta_tau(g: &GrassmannField, s: usize, t: usize, k: usize) -> f64 {
    let grad = |a: usize, b: usize| -> (f64, f64) {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => (0.0, 0.0),
            std::cmp::Ordering::Less => {
                let p = &g.grad[g.pair_index(a, b)];
                (p.0[k], p.1[k])
            }
            std::cmp::Ordering::Greater => {
                let p = &g.grad[g.pair_index(b, a)];
                (-p.0[k], -p.1[k])
            }
        }
    };
    (0..g.n)
        .map(|w| {
            let (a, b) = (grad(s, w), grad(w, t));
            a.0 * b.1 - a.1 * b.0
        })
        .sum()
}

pub fn grassmann_residuals(g: &GrassmannField, curv: &NormalCurvature) -> Result<GrassmannResiduals> {
    let grid = g.tau[0].grid;
    if curv.grid != grid || curv.n != g.n {
        return Err(Error::Grid("curvature and integral functions do not match".into()));
    }
    let lap: Vec<ScalarField> = g.tau.iter().map(laplacian_apply).collect();
    let c = ((g.n as f64) - 2.0).sqrt() / 2.0;
    let mut out = GrassmannResiduals { pde_residual: 0.0, growth_margin: f64::INFINITY, phi_sup: 0.0 };
    for k in 0..grid.interior_count() {
        let (mut grad2, mut lap2, mut s2) = (0.0, 0.0, 0.0);
        let mut phi = Complex64::new(0.0, 0.0);
        for (p, &(s, t)) in g.pairs.iter().enumerate() {
            let sv = curv.s12[k][(s, t)];
            let res = lap[p].values[k] + delta_tau(g, s, t, k) - sv;
            out.pde_residual = out.pde_residual.max(res.abs());
            let (gu, gv) = (g.grad[p].0[k], g.grad[p].1[k]);
            grad2 += gu * gu + gv * gv;
            lap2 += lap[p].values[k].powi(2);
            s2 += sv * sv;
            let tw = Complex64::new(gu, gv) * 0.5;
            phi += tw * tw;
        }
        out.growth_margin = out.growth_margin.min(c * grad2 + s2.sqrt() - lap2.sqrt());
        out.phi_sup = out.phi_sup.max(phi.norm());
    }
    Ok(out)
}
