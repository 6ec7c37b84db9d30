use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::fd::gradient;
use super::field::ComplexField;
use super::grid::PolarGrid;
use crate::{Error, Result};

const NEAR_SUBDIV: usize = 4;
const HOST_SUBDIV: usize = 8;

/// Midpoint quadrature for the Cauchy operator `T_B` and the Vekua operator
/// `P_B` with local refinement around the singular point.
pub struct CauchyIntegrator {
    grid: PolarGrid,
    f: Vec<Complex64>,
    fu: Vec<Complex64>,
    fv: Vec<Complex64>,
}

impl CauchyIntegrator {
    pub fn new(f: &ComplexField) -> Self {
        let grid = f.grid;
        let re: Vec<f64> = f.values.iter().map(|z| z.re).collect();
        let im: Vec<f64> = f.values.iter().map(|z| z.im).collect();
        let (ru, rv) = gradient(&grid, &re);
        let (iu, iv) = gradient(&grid, &im);
        let c = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| Complex64::new(*x, *y)).collect::<Vec<_>>();
        CauchyIntegrator { grid, f: f.values.clone(), fu: c(&ru, &iu), fv: c(&rv, &iv) }
    }

    fn check(&self, w: Complex64) -> Result<()> {
        if w.norm() > 1.0 - self.grid.dr() + 1e-12 {
            return Err(Error::Domain { u: w.re, v: w.im });
        }
        Ok(())
    }

    fn subcells(&self, i: usize, j: usize, n: usize) -> impl Iterator<Item = (Complex64, Complex64, f64)> + '_ {
        let h = self.grid.dr();
        let dt = self.grid.dtheta();
        let ri = self.grid.radius(i);
        let t = self.grid.theta(j);
        let k = self.grid.index(i, j);
        let z0 = Complex64::from_polar(ri, t);
        let (sh, st) = (h / n as f64, dt / n as f64);
        (0..n * n).map(move |s| {
            let rs = ri - 0.5 * h + ((s / n) as f64 + 0.5) * sh;
            let ts = t - 0.5 * dt + ((s % n) as f64 + 0.5) * st;
            let z = Complex64::from_polar(rs, ts);
            let dz = z - z0;
            let fz = self.f[k] + self.fu[k] * dz.re + self.fv[k] * dz.im;
            (z, fz, rs * sh * st)
        })
    }

    /// `T_B[f](w) = -(1/π) ∫∫_B f(ζ) / (ζ - w)`.
    pub fn t(&self, w: Complex64) -> Result<Complex64> {
        self.check(w)?;
        let g = &self.grid;
        let (hi, hj) = g.host_cell(w.re, w.im);
        let host_centre = Complex64::from_polar(g.radius(hi), g.theta(hj));
        let scale = g.dr().max(g.radius(hi) * g.dtheta());
        let near2 = (2.0 * scale).powi(2);
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..g.nr() {
            let area = g.cell_area(i);
            for j in 0..g.ntheta() {
                let k = g.index(i, j);
                let z = Complex64::from_polar(g.radius(i), g.theta(j));
                if i == hi && j == hj {
                    if (w - host_centre).norm() > 1e-12 {
                        let mut best = f64::INFINITY;
                        let mut skip = Complex64::new(0.0, 0.0);
                        let cells: Vec<_> = self.subcells(i, j, HOST_SUBDIV).collect();
                        for (zs, fs, a) in &cells {
                            let d = (zs - w).norm();
                            if d < best {
                                best = d;
                                skip = fs / (zs - w) * a;
                            }
                            sum += fs / (zs - w) * a;
                        }
                        sum -= skip;
                    }
                    continue;
                }
                if (z - w).norm_sqr() < near2 {
                    for (zs, fs, a) in self.subcells(i, j, NEAR_SUBDIV) {
                        sum += fs / (zs - w) * a;
                    }
                } else {
                    sum += self.f[k] / (z - w) * area;
                }
            }
        }
        Ok(-sum / PI)
    }

    /// `P_B[f](w) = T_B[f](w) - (1/π) ∫∫_B conj(ζ) conj(f(ζ)) / (1 - w conj(ζ))`.
    pub fn p(&self, w: Complex64) -> Result<Complex64> {
        let t = self.t(w)?;
        let g = &self.grid;
        let one = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for i in 0..g.nr() {
            let area = g.cell_area(i);
            for j in 0..g.ntheta() {
                let z = Complex64::from_polar(g.radius(i), g.theta(j));
                let k = g.index(i, j);
                sum += z.conj() * self.f[k].conj() / (one - w * z.conj()) * area;
            }
        }
        Ok(t - sum / PI)
    }

    pub fn p_many(&self, points: &[Complex64]) -> Result<Vec<Complex64>> {
        points.par_iter().map(|w| self.p(*w)).collect()
    }
}

pub fn cauchy_t(f: &ComplexField, w: Complex64) -> Result<Complex64> {
    CauchyIntegrator::new(f).t(w)
}

pub fn cauchy_p(f: &ComplexField, w: Complex64) -> Result<Complex64> {
    CauchyIntegrator::new(f).p(w)
}
