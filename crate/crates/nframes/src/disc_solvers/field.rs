use std::io::Write;

use num_complex::Complex64;

use super::grid::PolarGrid;
use crate::{Error, Result};

/// One real value per grid node (interior rings, then the boundary ring).
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    pub grid: PolarGrid,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    pub grid: PolarGrid,
    pub values: Vec<Complex64>,
}

impl ScalarField {
    pub fn zeros(grid: PolarGrid) -> Self {
        ScalarField { grid, values: vec![0.0; grid.node_count()] }
    }

    pub fn from_fn(grid: PolarGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..grid.node_count())
            .map(|k| {
                let (u, v) = grid.point(k);
                f(u, v)
            })
            .collect();
        ScalarField { grid, values }
    }

    pub fn from_values(grid: PolarGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::Grid(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.node_count()
            )));
        }
        Ok(ScalarField { grid, values })
    }

    /// Midpoint rule over the interior cells.
    pub fn quadrature(&self) -> f64 {
        quadrature(&self.grid, &self.values)
    }

    /// `int_{dB} f ds` by the periodic trapezoid rule on the boundary ring.
    pub fn boundary_integral(&self) -> f64 {
        self.values[self.grid.boundary_nodes()].iter().sum::<f64>() * self.grid.dtheta()
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn interior_sup(&self) -> f64 {
        self.values[..self.grid.interior_count()].iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|x| x * x).collect();
        quadrature(&self.grid, &sq).sqrt()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        ScalarField { grid: self.grid, values: self.values.iter().map(|x| f(*x)).collect() }
    }

    pub fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::Grid("fields live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        Ok(ScalarField { grid: self.grid, values })
    }

    /// Value at the origin, taken as the mean of the innermost ring.
    pub fn origin_value(&self) -> f64 {
        let n = self.grid.ntheta();
        self.values[..n].iter().sum::<f64>() / n as f64
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "r,theta,u,v,value")?;
        for (k, x) in self.values.iter().enumerate() {
            let (i, j) = self.grid.ring(k);
            let (u, v) = self.grid.point(k);
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.grid.radius(i),
                self.grid.theta(j),
                u,
                v,
                x
            )?;
        }
        Ok(())
    }
}

impl ComplexField {
    pub fn zeros(grid: PolarGrid) -> Self {
        ComplexField { grid, values: vec![Complex64::new(0.0, 0.0); grid.node_count()] }
    }

    pub fn from_fn(grid: PolarGrid, f: impl Fn(Complex64) -> Complex64) -> Self {
        let values = (0..grid.node_count())
            .map(|k| {
                let (u, v) = grid.point(k);
                f(Complex64::new(u, v))
            })
            .collect();
        ComplexField { grid, values }
    }

    pub fn re(&self) -> ScalarField {
        ScalarField { grid: self.grid, values: self.values.iter().map(|z| z.re).collect() }
    }

    pub fn im(&self) -> ScalarField {
        ScalarField { grid: self.grid, values: self.values.iter().map(|z| z.im).collect() }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "r,theta,u,v,value,value_im")?;
        for (k, z) in self.values.iter().enumerate() {
            let (i, j) = self.grid.ring(k);
            let (u, v) = self.grid.point(k);
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.grid.radius(i),
                self.grid.theta(j),
                u,
                v,
                z.re,
                z.im
            )?;
        }
        Ok(())
    }
}

pub fn quadrature(grid: &PolarGrid, values: &[f64]) -> f64 {
    let nt = grid.ntheta();
    (0..grid.nr())
        .map(|i| values[i * nt..(i + 1) * nt].iter().sum::<f64>() * grid.cell_area(i))
        .sum()
}
