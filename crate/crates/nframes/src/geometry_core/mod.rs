//! Fundamental forms, Christoffel symbols, curvatures and the integrability
//! conditions of a surface with a normal frame.

mod residuals;

use serde::Serialize;

use crate::dual::{dot, k, Scalar};
use crate::normal_bundle::{FrameField, Mat};
use crate::surface_catalog::{ImmersionSpec, JetSample, SecondJet};
use crate::{Error, Result};

pub use residuals::{integrability_residuals, residuals_at_point, ResidualPath, ResidualReport};

pub type Sym2<D> = [[D; 2]; 2];

/// First and second fundamental forms at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FundamentalForms {
    pub g: Sym2<f64>,
    pub g_inv: Sym2<f64>,
    pub w: f64,
    pub l: Vec<Sym2<f64>>,
    pub conformality_defect: f64,
}

/// Generic counterpart used by the analytic derivative paths.
#[derive(Clone, Debug)]
pub struct FormsG<D> {
    pub g: Sym2<D>,
    pub g_inv: Sym2<D>,
    pub w: D,
    pub l: Vec<Sym2<D>>,
}

pub fn metric<D: Scalar>(xu: &[D], xv: &[D]) -> (Sym2<D>, Sym2<D>, D) {
    let (g11, g12, g22) = (dot(xu, xu), dot(xu, xv), dot(xv, xv));
    let det = g11 * g22 - g12 * g12;
    let g_inv = [[g22 / det, -g12 / det], [-g12 / det, g11 / det]];
    (
        [[g11, g12], [g12, g22]],
        g_inv,
        if det.re() > 0.0 { det.sqrt() } else { k(0.0) },
    )
}

pub fn forms_generic<D: Scalar>(jet: &SecondJet<D>, frame: &Mat<D>) -> FormsG<D> {
    let (g, g_inv, w) = metric(&jet.xu, &jet.xv);
    let l = frame
        .iter()
        .map(|n| {
            let l12 = dot(&jet.xuv, n);
            [[dot(&jet.xuu, n), l12], [l12, dot(&jet.xvv, n)]]
        })
        .collect();
    FormsG { g, g_inv, w, l }
}

impl<D: Scalar> FormsG<D> {
    pub fn re(&self) -> FundamentalForms {
        let r = |m: &Sym2<D>| [[m[0][0].re(), m[0][1].re()], [m[1][0].re(), m[1][1].re()]];
        let g = r(&self.g);
        FundamentalForms {
            g,
            g_inv: r(&self.g_inv),
            w: self.w.re(),
            l: self.l.iter().map(r).collect(),
            conformality_defect: (g[0][0] - g[1][1]).abs().max(g[0][1].abs()),
        }
    }
}

impl From<&JetSample> for SecondJet<f64> {
    fn from(j: &JetSample) -> Self {
        SecondJet {
            x: j.x.clone(),
            xu: j.xu.clone(),
            xv: j.xv.clone(),
            xuu: j.xuu.clone(),
            xuv: j.xuv.clone(),
            xvv: j.xvv.clone(),
        }
    }
}

/// `g_ij = X_i·X_j`, `L_σ,ij = X_ij·N_σ`. The frame rows must be orthonormal.
pub fn fundamental_forms(jet: &JetSample, frame: &[Vec<f64>]) -> Result<FundamentalForms> {
    let (u, v) = jet.point;
    for (a, na) in frame.iter().enumerate() {
        for (b, nb) in frame.iter().enumerate() {
            let want = if a == b { 1.0 } else { 0.0 };
            if (dot(na, nb) - want).abs() > 1e-10 {
                return Err(Error::Frame { u, v, reason: "frame is not orthonormal".into() });
            }
        }
    }
    let f = forms_generic(&SecondJet::from(jet), &frame.to_vec()).re();
    if !(f.w > 0.0) {
        return Err(Error::Immersion { u, v, w: f.w });
    }
    Ok(f)
}

/// `Γ^k_ij` stored as `gamma[k][i][j]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChristoffelSample {
    pub gamma: [[[f64; 2]; 2]; 2],
}

pub fn christoffel_generic<D: Scalar>(jet: &SecondJet<D>) -> [[[D; 2]; 2]; 2] {
    let (_, g_inv, _) = metric(&jet.xu, &jet.xv);
    // dg[a][b][c] = g_ab,c
    let mut dg = [[[k::<D>(0.0); 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                dg[a][b][c] = dot(jet.xij(a, c), jet.xi(b)) + dot(jet.xi(a), jet.xij(b, c));
            }
        }
    }
    let mut gamma = [[[k::<D>(0.0); 2]; 2]; 2];
    for kk in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                let mut s = k::<D>(0.0);
                for l in 0..2 {
                    s += g_inv[kk][l] * (dg[l][i][j] + dg[j][l][i] - dg[i][j][l]);
                }
                gamma[kk][i][j] = s * 0.5;
            }
        }
    }
    gamma
}

pub fn christoffel(jet: &JetSample) -> Result<ChristoffelSample> {
    let sj = SecondJet::from(jet);
    let (_, _, w) = metric(&sj.xu, &sj.xv);
    if !(w > 0.0) {
        return Err(Error::Immersion { u: jet.point.0, v: jet.point.1, w });
    }
    let g = christoffel_generic(&sj);
    let mut gamma = g;
    for kk in 0..2 {
        let s = 0.5 * (g[kk][0][1] + g[kk][1][0]);
        gamma[kk][0][1] = s;
        gamma[kk][1][0] = s;
    }
    Ok(ChristoffelSample { gamma })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureScalars {
    pub k_sigma: Vec<f64>,
    pub k: f64,
    pub h_sigma: Vec<f64>,
    pub r2112: f64,
}

impl CurvatureScalars {
    pub fn h_squared(&self) -> f64 {
        self.h_sigma.iter().map(|h| h * h).sum()
    }
}

/// `K_σ = det L_σ / W²`, `H_σ = ½ g^{ij} L_σ,ij`, `R_2112 = K W²`.
pub fn curvatures(forms: &FundamentalForms) -> CurvatureScalars {
    let w2 = forms.w * forms.w;
    let k_sigma: Vec<f64> = forms.l.iter().map(|l| (l[0][0] * l[1][1] - l[0][1] * l[0][1]) / w2).collect();
    let h_sigma = forms
        .l
        .iter()
        .map(|l| {
            0.5 * (forms.g_inv[0][0] * l[0][0] + 2.0 * forms.g_inv[0][1] * l[0][1] + forms.g_inv[1][1] * l[1][1])
        })
        .collect();
    let k: f64 = k_sigma.iter().sum();
    CurvatureScalars { k_sigma, k, h_sigma, r2112: k * w2 }
}

/// Fundamental forms at every node of a frame field.
pub fn forms_field(spec: &ImmersionSpec, frame: &FrameField) -> Result<Vec<FundamentalForms>> {
    use rayon::prelude::*;
    (0..frame.grid.node_count())
        .into_par_iter()
        .map(|kk| {
            let (u, v) = frame.grid.point(kk);
            let jet = spec.second(u, v);
            let f = &frame.frames[kk];
            let rows: Mat<f64> = (0..frame.n).map(|s| f.row(s).iter().copied().collect()).collect();
            let forms = forms_generic(&jet, &rows).re();
            if !(forms.w > 0.0) {
                return Err(Error::Immersion { u, v, w: forms.w });
            }
            Ok(forms)
        })
        .collect()
}

pub fn max_conformality_defect(forms: &[FundamentalForms]) -> f64 {
    forms.iter().map(|f| f.conformality_defect).fold(0.0, f64::max)
}
