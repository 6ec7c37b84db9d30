use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Tensor polar grid on the closed unit disc.
///
/// Interior nodes sit at half-integer radii `r_i = (i + 1/2) / nr`, so no unknown
/// lives at the origin; ring `nr` is the boundary circle `r = 1`.
/// Node `k = i * ntheta + j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarGrid {
    nr: usize,
    ntheta: usize,
}

impl PolarGrid {
    pub fn new(nr: usize, ntheta: usize) -> Result<Self> {
        if nr < 8 {
            return Err(Error::Grid(format!("nr = {nr} must be at least 8")));
        }
        if ntheta < 8 || ntheta % 2 != 0 {
            return Err(Error::Grid(format!("ntheta = {ntheta} must be even and at least 8")));
        }
        Ok(PolarGrid { nr, ntheta })
    }

    pub fn nr(&self) -> usize {
        self.nr
    }
    pub fn ntheta(&self) -> usize {
        self.ntheta
    }
    pub fn dr(&self) -> f64 {
        1.0 / self.nr as f64
    }
    pub fn dtheta(&self) -> f64 {
        2.0 * PI / self.ntheta as f64
    }
    pub fn node_count(&self) -> usize {
        (self.nr + 1) * self.ntheta
    }
    pub fn interior_count(&self) -> usize {
        self.nr * self.ntheta
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ntheta + j
    }
    #[inline]
    pub fn ring(&self, k: usize) -> (usize, usize) {
        (k / self.ntheta, k % self.ntheta)
    }
    #[inline]
    pub fn wrap(&self, j: isize) -> usize {
        j.rem_euclid(self.ntheta as isize) as usize
    }
    #[inline]
    pub fn is_boundary(&self, k: usize) -> bool {
        k >= self.interior_count()
    }

    #[inline]
    pub fn radius(&self, i: usize) -> f64 {
        if i >= self.nr {
            1.0
        } else {
            (i as f64 + 0.5) / self.nr as f64
        }
    }
    /// Radius of the face between ring `i` and ring `i + 1`, i.e. `(i + 1) h`.
    #[inline]
    pub fn face_radius(&self, i: usize) -> f64 {
        (i + 1) as f64 / self.nr as f64
    }
    #[inline]
    pub fn theta(&self, j: usize) -> f64 {
        self.dtheta() * j as f64
    }
    pub fn point(&self, k: usize) -> (f64, f64) {
        let (i, j) = self.ring(k);
        let (r, t) = (self.radius(i), self.theta(j));
        (r * t.cos(), r * t.sin())
    }
    pub fn points(&self) -> Vec<(f64, f64)> {
        (0..self.node_count()).map(|k| self.point(k)).collect()
    }
    /// Cell measure `r_i dr dtheta`; zero on the boundary ring.
    pub fn cell_area(&self, i: usize) -> f64 {
        if i >= self.nr {
            0.0
        } else {
            self.radius(i) * self.dr() * self.dtheta()
        }
    }
    pub fn boundary_nodes(&self) -> std::ops::Range<usize> {
        self.interior_count()..self.node_count()
    }

    /// Cell index `(i, j)` whose midpoint-rule cell contains the point.
    pub fn host_cell(&self, u: f64, v: f64) -> (usize, usize) {
        let r = u.hypot(v);
        let i = ((r * self.nr as f64).floor() as usize).min(self.nr - 1);
        let t = v.atan2(u).rem_euclid(2.0 * PI);
        let j = self.wrap((t / self.dtheta()).round() as isize);
        (i, j)
    }
}
