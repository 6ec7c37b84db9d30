use num_dual::HyperDual64;
use rayon::prelude::*;
use serde::Serialize;

use super::{christoffel_generic, forms_generic, metric, Sym2};
use crate::disc_solvers::fd::gradient;
use crate::dual::seed_point;
use crate::normal_bundle::{FrameField, FrameRecipe, Mat};
use crate::surface_catalog::ImmersionSpec;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualPath {
    /// Derivatives of Γ, L, T from exact jets.
    Analytic,
    /// Derivatives of the nodal Γ, L, T fields by grid finite differences.
    FiniteDifference,
}

/// Sup-norms over interior nodes of each integrability identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub path: ResidualPath,
    pub gauss_eq: f64,
    pub weingarten: f64,
    pub codazzi_mainardi: f64,
    pub gauss_integrability: f64,
    pub ricci: f64,
    pub egregium: f64,
    /// `None` when the parametrization is not conformal (entry skipped).
    pub mean_curvature_system: Option<f64>,
    pub mean_curvature_skipped: bool,
}

impl ResidualReport {
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        let mut v = vec![
            ("gauss_eq", self.gauss_eq),
            ("weingarten", self.weingarten),
            ("codazzi_mainardi", self.codazzi_mainardi),
            ("gauss_integrability", self.gauss_integrability),
            ("ricci", self.ricci),
            ("egregium", self.egregium),
        ];
        if let Some(m) = self.mean_curvature_system {
            v.push(("mean_curvature_system", m));
        }
        v
    }
}

type Gam = [[[f64; 2]; 2]; 2];

#[derive(Clone, Debug)]
struct NodeData {
    xk: [Vec<f64>; 2],
    xij: [[Vec<f64>; 2]; 2],
    n: Mat<f64>,
    nd: [Mat<f64>; 2],
    g: Sym2<f64>,
    g_inv: Sym2<f64>,
    w: f64,
    l: Vec<Sym2<f64>>,
    ld: [Vec<Sym2<f64>>; 2],
    gam: Gam,
    gamd: [Gam; 2],
    t: [Mat<f64>; 2],
    td: [[Mat<f64>; 2]; 2],
}

fn analytic_node(recipe: &FrameRecipe, u: f64, v: f64) -> Result<NodeData> {
    let (us, vs) = seed_point(u, v);
    let jet = recipe.spec.second(us, vs);
    let frame = recipe.frame::<HyperDual64>(us, vs)?;
    let forms = forms_generic(&jet, &frame);
    let gam = christoffel_generic(&jet);
    let t = recipe.torsion::<HyperDual64>(us, vs)?;
    let re = |x: &[HyperDual64]| x.iter().map(|c| c.re).collect::<Vec<f64>>();
    let mat = |m: &Mat<HyperDual64>, f: fn(&HyperDual64) -> f64| -> Mat<f64> {
        m.iter().map(|r| r.iter().map(f).collect()).collect()
    };
    let sym = |s: &Sym2<HyperDual64>, f: fn(&HyperDual64) -> f64| [[f(&s[0][0]), f(&s[0][1])], [f(&s[1][0]), f(&s[1][1])]];
    let gamf = |f: fn(&HyperDual64) -> f64| {
        let mut o = [[[0.0; 2]; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    o[a][b][c] = f(&gam[a][b][c]);
                }
            }
        }
        o
    };
    let d1: fn(&HyperDual64) -> f64 = |c| c.eps1;
    let d2: fn(&HyperDual64) -> f64 = |c| c.eps2;
    let r0: fn(&HyperDual64) -> f64 = |c| c.re;
    Ok(NodeData {
        xk: [re(&jet.xu), re(&jet.xv)],
        xij: [[re(&jet.xuu), re(&jet.xuv)], [re(&jet.xuv), re(&jet.xvv)]],
        n: mat(&frame, r0),
        nd: [mat(&frame, d1), mat(&frame, d2)],
        g: sym(&forms.g, r0),
        g_inv: sym(&forms.g_inv, r0),
        w: forms.w.re,
        l: forms.l.iter().map(|s| sym(s, r0)).collect(),
        ld: [forms.l.iter().map(|s| sym(s, d1)).collect(), forms.l.iter().map(|s| sym(s, d2)).collect()],
        gam: gamf(r0),
        gamd: [gamf(d1), gamf(d2)],
        t: [mat(&t[0], r0), mat(&t[1], r0)],
        td: [[mat(&t[0], d1), mat(&t[1], d1)], [mat(&t[0], d2), mat(&t[1], d2)]],
    })
}

fn residuals_of(d: &NodeData) -> [f64; 7] {
    let n = d.n.len();
    let m = d.xk[0].len();
    let mut out = [0.0f64; 7];
    for i in 0..2 {
        for j in 0..2 {
            for c in 0..m {
                let mut e = d.xij[i][j][c];
                for kk in 0..2 {
                    e -= d.gam[kk][i][j] * d.xk[kk][c];
                }
                for s in 0..n {
                    e -= d.l[s][i][j] * d.n[s][c];
                }
                out[0] = out[0].max(e.abs());
            }
        }
    }
    for s in 0..n {
        for i in 0..2 {
            for c in 0..m {
                let mut e = d.nd[i][s][c];
                for j in 0..2 {
                    for kk in 0..2 {
                        e += d.l[s][i][j] * d.g_inv[j][kk] * d.xk[kk][c];
                    }
                }
                for t in 0..n {
                    e -= d.t[i][s][t] * d.n[t][c];
                }
                out[1] = out[1].max(e.abs());
            }
        }
    }
    for s in 0..n {
        for i in 0..2 {
            let mut lhs = d.ld[1][s][i][0];
            let mut rhs = d.ld[0][s][i][1];
            for kk in 0..2 {
                lhs += d.gam[kk][i][0] * d.l[s][kk][1];
                rhs += d.gam[kk][i][1] * d.l[s][kk][0];
            }
            for w in 0..n {
                lhs += d.l[w][i][0] * d.t[1][w][s];
                rhs += d.l[w][i][1] * d.t[0][w][s];
            }
            out[2] = out[2].max((lhs - rhs).abs());
        }
    }
    for i in 0..2 {
        for l in 0..2 {
            let mut e = d.gamd[1][l][i][0] - d.gamd[0][l][i][1];
            for mm in 0..2 {
                e += d.gam[mm][i][0] * d.gam[l][mm][1] - d.gam[mm][i][1] * d.gam[l][mm][0];
                for s in 0..n {
                    e -= (d.l[s][i][0] * d.l[s][1][mm] - d.l[s][i][1] * d.l[s][0][mm]) * d.g_inv[mm][l];
                }
            }
            out[3] = out[3].max(e.abs());
        }
    }
    for s in 0..n {
        for t in 0..n {
            let mut st = d.td[1][0][s][t] - d.td[0][1][s][t];
            for r in 0..n {
                st += d.t[0][s][r] * d.t[1][r][t] - d.t[1][s][r] * d.t[0][r][t];
            }
            let mut sl = 0.0;
            for j in 0..2 {
                for mm in 0..2 {
                    sl += (d.l[s][0][j] * d.l[t][1][mm] - d.l[s][1][j] * d.l[t][0][mm]) * d.g_inv[j][mm];
                }
            }
            out[4] = out[4].max((st - sl).abs());
        }
    }
    let mut r2112 = 0.0;
    for l in 0..2 {
        let mut r = d.gamd[1][l][0][0] - d.gamd[0][l][0][1];
        for mm in 0..2 {
            r += d.gam[mm][0][0] * d.gam[l][mm][1] - d.gam[mm][0][1] * d.gam[l][mm][0];
        }
        r2112 += r * d.g[l][1];
    }
    let kw2: f64 = d.l.iter().map(|l| l[0][0] * l[1][1] - l[0][1] * l[0][1]).sum();
    out[5] = (r2112 - kw2).abs();
    for c in 0..m {
        let mut e = d.xij[0][0][c] + d.xij[1][1][c];
        for s in 0..n {
            let h = 0.5
                * (d.g_inv[0][0] * d.l[s][0][0] + 2.0 * d.g_inv[0][1] * d.l[s][0][1] + d.g_inv[1][1] * d.l[s][1][1]);
            e -= 2.0 * h * d.w * d.n[s][c];
        }
        out[6] = out[6].max(e.abs());
    }
    out
}

/// All residuals at one parameter point along the analytic path.
pub fn residuals_at_point(recipe: &FrameRecipe, u: f64, v: f64) -> Result<[f64; 7]> {
    recipe.spec.check_point(u, v)?;
    Ok(residuals_of(&analytic_node(recipe, u, v)?))
}

fn nodal_data(spec: &ImmersionSpec, frame: &FrameField) -> Vec<NodeData> {
    let grid = frame.grid;
    let mut nodes: Vec<NodeData> = (0..grid.node_count())
        .into_par_iter()
        .map(|kk| {
            let (u, v) = grid.point(kk);
            let jet = spec.second(u, v);
            let f = &frame.frames[kk];
            let rows = |mm: &nalgebra::DMatrix<f64>| -> Mat<f64> {
                (0..mm.nrows()).map(|s| mm.row(s).iter().copied().collect()).collect()
            };
            let n = rows(f);
            let forms = forms_generic(&jet, &n);
            let (g, g_inv, w) = metric(&jet.xu, &jet.xv);
            let tt = |d: &nalgebra::DMatrix<f64>| rows(&crate::normal_bundle::skew_part(&(d * f.transpose())));
            NodeData {
                xk: [jet.xu.clone(), jet.xv.clone()],
                xij: [[jet.xuu.clone(), jet.xuv.clone()], [jet.xuv.clone(), jet.xvv.clone()]],
                nd: [rows(&frame.du[kk]), rows(&frame.dv[kk])],
                n,
                g,
                g_inv,
                w,
                l: forms.l.clone(),
                ld: [Vec::new(), Vec::new()],
                gam: christoffel_generic(&jet),
                gamd: [[[[0.0; 2]; 2]; 2]; 2],
                t: [tt(&frame.du[kk]), tt(&frame.dv[kk])],
                td: [[Vec::new(), Vec::new()], [Vec::new(), Vec::new()]],
            }
        })
        .collect();
    let nn = frame.n;
    let mut diff = |get: &dyn Fn(&NodeData) -> f64, put: &mut dyn FnMut(&mut NodeData, usize, f64)| {
        let vals: Vec<f64> = nodes.iter().map(get).collect();
        let (du, dv) = gradient(&grid, &vals);
        for (kk, node) in nodes.iter_mut().enumerate() {
            put(node, 0, du[kk]);
            put(node, 1, dv[kk]);
        }
    };
    for s in 0..nn {
        for i in 0..2 {
            for j in i..2 {
                diff(&|d| d.l[s][i][j], &mut |d, c, x| {
                    if d.ld[c].len() <= s {
                        d.ld[c].resize(nn, [[0.0; 2]; 2]);
                    }
                    d.ld[c][s][i][j] = x;
                    d.ld[c][s][j][i] = x;
                });
            }
        }
    }
    for a in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                diff(&|d| d.gam[a][i][j], &mut |d, c, x| d.gamd[c][a][i][j] = x);
            }
        }
    }
    for i in 0..2 {
        for s in 0..nn {
            for t in 0..nn {
                diff(&|d| d.t[i][s][t], &mut |d, c, x| {
                    if d.td[c][i].is_empty() {
                        d.td[c][i] = vec![vec![0.0; nn]; nn];
                    }
                    d.td[c][i][s][t] = x;
                });
            }
        }
    }
    nodes
}

/// Sup over interior nodes of every integrability identity.
pub fn integrability_residuals(spec: &ImmersionSpec, frame: &FrameField, path: ResidualPath) -> Result<ResidualReport> {
    let grid = frame.grid;
    let interior = grid.interior_count();
    let per_node: Vec<[f64; 7]> = match path {
        ResidualPath::Analytic => {
            let recipe = frame.recipe.as_ref().ok_or_else(|| Error::Param {
                field: "frame".into(),
                reason: "analytic residuals need a frame with an analytic recipe".into(),
            })?;
            (0..interior)
                .into_par_iter()
                .map(|kk| {
                    let (u, v) = grid.point(kk);
                    analytic_node(recipe, u, v).map(|d| residuals_of(&d))
                })
                .collect::<Result<Vec<_>>>()?
        }
        ResidualPath::FiniteDifference => {
            let nodes = nodal_data(spec, frame);
            nodes[..interior].par_iter().map(residuals_of).collect()
        }
    };
    let mut sup = [0.0f64; 7];
    for r in &per_node {
        for (a, b) in sup.iter_mut().zip(r) {
            *a = a.max(*b);
        }
    }
    let defect = grid
        .points()
        .iter()
        .map(|(u, v)| {
            let (_, xu, xv) = spec.first(*u, *v);
            let (g, _, _) = metric(&xu, &xv);
            (g[0][0] - g[1][1]).abs().max(g[0][1].abs())
        })
        .fold(0.0, f64::max);
    let conformal = defect < 1e-8;
    Ok(ResidualReport {
        path,
        gauss_eq: sup[0],
        weingarten: sup[1],
        codazzi_mainardi: sup[2],
        gauss_integrability: sup[3],
        ricci: sup[4],
        egregium: sup[5],
        mean_curvature_system: if conformal { Some(sup[6]) } else { None },
        mean_curvature_skipped: !conformal,
    })
}
