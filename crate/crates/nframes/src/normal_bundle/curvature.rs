use nalgebra::DMatrix;
use num_dual::HyperDual64;
use rayon::prelude::*;

use super::frame::FrameRecipe;
use super::torsion::TorsionField;
use crate::disc_solvers::{fd::gradient, PolarGrid, ScalarField};
use crate::dual::seed_point;
use crate::geometry_core::{FundamentalForms, Sym2};
use crate::surface_catalog::ImmersionSpec;
use crate::{Error, Result};

/// `x ∧ y` with components `x^i y^j − x^j y^i`, `i < j` in lexicographic order.
pub fn wedge(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    if x.len() != y.len() {
        return Err(Error::Param { field: "wedge".into(), reason: format!("lengths {} and {} differ", x.len(), y.len()) });
    }
    if x.len() < 2 {
        return Err(Error::Param { field: "wedge".into(), reason: "need at least two components".into() });
    }
    let m = x.len();
    let mut out = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            out.push(x[i] * y[j] - x[j] * y[i]);
        }
    }
    Ok(out)
}

/// Upper-triangle entries of a skew matrix in wedge order.
pub fn skew_to_wedge(s: &DMatrix<f64>) -> Vec<f64> {
    let n = s.nrows();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(s[(i, j)]);
        }
    }
    out
}

/// `S_{σ,12}^ϑ = Σ (L_{σ,1j} L_{ϑ,2m} − L_{σ,2j} L_{ϑ,1m}) g^{jm}`.
pub fn s_general_metric(l: &[Sym2<f64>], g_inv: &Sym2<f64>) -> DMatrix<f64> {
    let n = l.len();
    DMatrix::from_fn(n, n, |s, t| {
        let mut acc = 0.0;
        for j in 0..2 {
            for m in 0..2 {
                acc += (l[s][0][j] * l[t][1][m] - l[s][1][j] * l[t][0][m]) * g_inv[j][m];
            }
        }
        acc
    })
}

/// Conformal form `(1/W)[(L_σ11 − L_σ22) L_ϑ12 − (L_ϑ11 − L_ϑ22) L_σ12]`.
pub fn s_conformal(forms: &FundamentalForms) -> Result<DMatrix<f64>> {
    if forms.conformality_defect >= 1e-8 {
        return Err(Error::NonConformal { defect: forms.conformality_defect });
    }
    let l = &forms.l;
    let n = l.len();
    Ok(DMatrix::from_fn(n, n, |s, t| {
        ((l[s][0][0] - l[s][1][1]) * l[t][0][1] - (l[t][0][0] - l[t][1][1]) * l[s][0][1]) / forms.w
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureRoute {
    SecondForm,
    Torsion,
}

/// Normal curvature per node: the skew tensor `S_12`, the scalar `S_N` for
/// `n = 2`, and the curvature vector with components `S_{σ,12}^ϑ / W`.
#[derive(Clone, Debug)]
pub struct NormalCurvature {
    pub grid: PolarGrid,
    pub n: usize,
    pub s12: Vec<DMatrix<f64>>,
    pub w: Vec<f64>,
    pub route: CurvatureRoute,
}

impl NormalCurvature {
    fn new(grid: PolarGrid, s12: Vec<DMatrix<f64>>, w: Vec<f64>, route: CurvatureRoute) -> Self {
        let n = s12.first().map_or(0, |m| m.nrows());
        let s12 = s12.into_iter().map(|m| (&m - m.transpose()) * 0.5).collect();
        NormalCurvature { grid, n, s12, w, route }
    }

    /// Second-form route; requires conformal parameters.
    pub fn from_forms(grid: PolarGrid, forms: &[FundamentalForms]) -> Result<Self> {
        let s = forms.iter().map(s_conformal).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(grid, s, forms.iter().map(|f| f.w).collect(), CurvatureRoute::SecondForm))
    }

    /// Torsion route `T_{1,v} − T_{2,u} + T_1 T_2 − T_2 T_1` with grid derivatives.
    pub fn from_torsion(t: &TorsionField, spec: &ImmersionSpec) -> Self {
        let grid = t.grid;
        let n = t.n;
        let mut dv1 = vec![DMatrix::zeros(n, n); grid.node_count()];
        let mut du2 = dv1.clone();
        for s in 0..n {
            for r in 0..n {
                let (_, v1) = gradient(&grid, &t.component(0, s, r));
                let (u2, _) = gradient(&grid, &t.component(1, s, r));
                for kk in 0..grid.node_count() {
                    dv1[kk][(s, r)] = v1[kk];
                    du2[kk][(s, r)] = u2[kk];
                }
            }
        }
        let s12 = (0..grid.node_count())
            .map(|kk| {
                let (a, b) = (&t.t1[kk], &t.t2[kk]);
                &dv1[kk] - &du2[kk] + a * b - b * a
            })
            .collect();
        Self::new(grid, s12, area_elements(spec, &grid), CurvatureRoute::Torsion)
    }

    /// Torsion route with exact derivatives of an analytic frame.
    pub fn from_recipe(recipe: &FrameRecipe, grid: PolarGrid) -> Result<Self> {
        let s12 = grid
            .points()
            .par_iter()
            .map(|&(u, v)| {
                let (us, vs) = seed_point(u, v);
                let t = recipe.torsion::<HyperDual64>(us, vs)?;
                let n = t[0].len();
                Ok(DMatrix::from_fn(n, n, |s, r| {
                    let mut x = t[0][s][r].eps2 - t[1][s][r].eps1;
                    for q in 0..n {
                        x += t[0][s][q].re * t[1][q][r].re - t[1][s][q].re * t[0][q][r].re;
                    }
                    x
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(grid, s12, area_elements(&recipe.spec, &grid), CurvatureRoute::Torsion))
    }

    /// `S_N = S_{1,12}^2 / W`, only for codimension two.
    pub fn s_n(&self) -> Option<ScalarField> {
        (self.n == 2).then(|| {
            ScalarField { grid: self.grid, values: self.s12.iter().zip(&self.w).map(|(s, w)| s[(0, 1)] / w).collect() }
        })
    }

    /// `S_N W = S_{1,12}^2`, the density entering the gauge problems.
    pub fn s_n_w(&self) -> Option<ScalarField> {
        (self.n == 2).then(|| ScalarField { grid: self.grid, values: self.s12.iter().map(|s| s[(0, 1)]).collect() })
    }

    /// Curvature vector at node `kk`.
    pub fn vector(&self, kk: usize) -> Vec<f64> {
        skew_to_wedge(&self.s12[kk]).into_iter().map(|x| x / self.w[kk]).collect()
    }

    pub fn magnitude(&self) -> ScalarField {
        ScalarField {
            grid: self.grid,
            values: (0..self.s12.len()).map(|kk| self.vector(kk).iter().map(|x| x * x).sum::<f64>().sqrt()).collect(),
        }
    }

    /// `|S_12|` in the wedge basis, i.e. `|𝔖_N| W`.
    pub fn density(&self) -> ScalarField {
        ScalarField {
            grid: self.grid,
            values: self.s12.iter().map(|s| skew_to_wedge(s).iter().map(|x| x * x).sum::<f64>().sqrt()).collect(),
        }
    }

    pub fn sup_abs(&self) -> f64 {
        self.s12.iter().map(|m| m.amax()).fold(0.0, f64::max)
    }
}

fn area_elements(spec: &ImmersionSpec, grid: &PolarGrid) -> Vec<f64> {
    grid.points()
        .iter()
        .map(|&(u, v)| {
            let (_, xu, xv) = spec.first(u, v);
            crate::geometry_core::metric(&xu, &xv).2
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(wedge(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap(), vec![-3.0, -6.0, -3.0]);
        assert!(wedge(&[1.0, 2.0], &[1.0]).is_err());
        assert!(wedge(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap().iter().all(|x| *x == 0.0));
    }
}
