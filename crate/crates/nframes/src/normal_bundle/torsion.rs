use nalgebra::DMatrix;

use super::frame::FrameField;
use super::rotation::{DerivativePath, RotationField};
use super::son::skew_part;
use crate::disc_solvers::PolarGrid;
use crate::{Error, Result};

/// Per-node skew matrices `T_1, T_2` with entries `T_{σ,i}^ϑ`.
#[derive(Clone, Debug)]
pub struct TorsionField {
    pub grid: PolarGrid,
    pub n: usize,
    pub t1: Vec<DMatrix<f64>>,
    pub t2: Vec<DMatrix<f64>>,
    pub path: DerivativePath,
}

impl TorsionField {
    pub fn zeros(grid: PolarGrid, n: usize) -> Self {
        let z = DMatrix::zeros(n, n);
        TorsionField {
            grid,
            n,
            t1: vec![z.clone(); grid.node_count()],
            t2: vec![z; grid.node_count()],
            path: DerivativePath::Analytic,
        }
    }

    pub fn t(&self, i: usize) -> &[DMatrix<f64>] {
        if i == 0 {
            &self.t1
        } else {
            &self.t2
        }
    }

    /// Component field `T_{σ,i}^ϑ` over all nodes.
    pub fn component(&self, i: usize, s: usize, t: usize) -> Vec<f64> {
        self.t(i).iter().map(|m| m[(s, t)]).collect()
    }

    /// `max |T_{σ,i}^ϑ|` over nodes, pairs and directions.
    pub fn sup(&self) -> f64 {
        self.t1.iter().chain(&self.t2).map(|m| m.amax()).fold(0.0, f64::max)
    }
}

pub fn torsion_coefficients(frame: &FrameField) -> TorsionField {
    let build = |d: &[DMatrix<f64>]| -> Vec<DMatrix<f64>> {
        d.iter().zip(&frame.frames).map(|(nd, n)| skew_part(&(nd * n.transpose()))).collect()
    };
    TorsionField { grid: frame.grid, n: frame.n, t1: build(&frame.du), t2: build(&frame.dv), path: frame.path }
}

/// `T̃_i = R_{u^i} R^t + R T_i R^t`.
pub fn transform_torsions(t: &TorsionField, rot: &RotationField) -> Result<TorsionField> {
    if t.grid != rot.grid || t.n != rot.n {
        return Err(Error::Gauge("rotation field does not match the torsions".into()));
    }
    let build = |ti: &[DMatrix<f64>], rd: &[DMatrix<f64>]| -> Vec<DMatrix<f64>> {
        ti.iter()
            .zip(rd)
            .zip(&rot.r)
            .map(|((tm, d), r)| skew_part(&(d * r.transpose() + r * tm * r.transpose())))
            .collect()
    };
    let path = if t.path == DerivativePath::Analytic && rot.path == DerivativePath::Analytic {
        DerivativePath::Analytic
    } else {
        DerivativePath::FiniteDifference
    };
    Ok(TorsionField { grid: t.grid, n: t.n, t1: build(&t.t1, &rot.du), t2: build(&t.t2, &rot.dv), path })
}
