//! Analytic immersions of the unit disc, jet evaluation, and a
//! finite-difference oracle for derivative validation.

mod jets;
mod poly;
mod surfaces;

use serde_json::{json, Value};

use crate::dual::{k, seed_twice, seed_uv, Scalar};
use crate::{Error, Result};

pub use jets::{evaluate_jet, fd_jet_oracle, fd_jet_oracle_fn, JetSample};
pub use poly::{ComplexPoly, Poly2};
pub use surfaces::{catalog_names, catalog_schema, parse_surface, ParallelBase, Surface};

/// A surface together with its codimension and conformality claim.
///
/// `extra` appends that many identically zero ambient coordinates, raising the
/// codimension by `extra`; the added normal directions are the new basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ImmersionSpec {
    pub surface: Surface,
    pub extra: usize,
}

/// Position and first/second partials at one point, generic in the scalar.
#[derive(Clone, Debug)]
pub struct SecondJet<D> {
    pub x: Vec<D>,
    pub xu: Vec<D>,
    pub xv: Vec<D>,
    pub xuu: Vec<D>,
    pub xuv: Vec<D>,
    pub xvv: Vec<D>,
}

impl<D: Scalar> SecondJet<D> {
    pub fn xij(&self, i: usize, j: usize) -> &[D] {
        match (i, j) {
            (0, 0) => &self.xuu,
            (1, 1) => &self.xvv,
            _ => &self.xuv,
        }
    }
    pub fn xi(&self, i: usize) -> &[D] {
        if i == 0 {
            &self.xu
        } else {
            &self.xv
        }
    }
}

impl ImmersionSpec {
    pub fn new(surface: Surface) -> Self {
        ImmersionSpec { surface, extra: 0 }
    }

    pub fn with_extra(mut self, extra: usize) -> Self {
        self.extra = extra;
        self
    }

    pub fn codimension(&self) -> usize {
        self.surface.codimension() + self.extra
    }
    pub fn ambient_dim(&self) -> usize {
        self.codimension() + 2
    }
    pub fn conformal_claim(&self) -> bool {
        self.surface.conformal()
    }
    pub fn name(&self) -> &'static str {
        self.surface.name()
    }
    pub fn params(&self) -> Value {
        let mut p = self.surface.params();
        if self.extra > 0 {
            p["extra_codimension"] = json!(self.extra);
        }
        p
    }

    pub fn position<D: Scalar>(&self, u: D, v: D) -> Vec<D> {
        let mut x = self.surface.position(u, v);
        x.extend((0..self.extra).map(|_| k::<D>(0.0)));
        x
    }

    /// `(X, X_u, X_v)` from one hyper-dual evaluation.
    pub fn first<D: Scalar>(&self, u: D, v: D) -> (Vec<D>, Vec<D>, Vec<D>) {
        let (a, b) = seed_uv(u, v);
        let x = self.position(a, b);
        (
            x.iter().map(|c| c.re).collect(),
            x.iter().map(|c| c.eps1).collect(),
            x.iter().map(|c| c.eps2).collect(),
        )
    }

    pub fn second<D: Scalar>(&self, u: D, v: D) -> SecondJet<D> {
        let (a, b) = seed_uv(u, v);
        let x = self.position(a, b);
        let (a, b) = seed_twice(u, v, true);
        let xuu = self.position(a, b).iter().map(|c| c.eps1eps2).collect();
        let (a, b) = seed_twice(u, v, false);
        let xvv = self.position(a, b).iter().map(|c| c.eps1eps2).collect();
        SecondJet {
            x: x.iter().map(|c| c.re).collect(),
            xu: x.iter().map(|c| c.eps1).collect(),
            xv: x.iter().map(|c| c.eps2).collect(),
            xuu,
            xuv: x.iter().map(|c| c.eps1eps2).collect(),
            xvv,
        }
    }

    /// Spanning set of the normal space (not yet orthonormal); `None` asks the
    /// caller to project the trailing ambient basis vectors.
    pub fn spanning<D: Scalar>(&self, u: D, v: D, xu: &[D], xv: &[D]) -> Option<Vec<Vec<D>>> {
        let m = self.ambient_dim();
        let base = self.surface.spanning(u, v, xu, xv)?;
        let mut out: Vec<Vec<D>> = base
            .into_iter()
            .map(|mut e| {
                e.resize(m, k(0.0));
                e
            })
            .collect();
        for a in 0..self.extra {
            let mut e = vec![k::<D>(0.0); m];
            e[m - self.extra + a] = k(1.0);
            out.push(e);
        }
        Some(out)
    }

    /// Checks that the point lies in the closed unit disc.
    pub fn check_point(&self, u: f64, v: f64) -> Result<()> {
        if !(u.is_finite() && v.is_finite()) || u.hypot(v) > 1.0 + 1e-12 {
            return Err(Error::Domain { u, v });
        }
        Ok(())
    }
}

/// Looks up a catalog surface by name and validates its parameters.
pub fn builtin_surface(name: &str, params: &Value) -> Result<ImmersionSpec> {
    let surface = parse_surface(name, params)?;
    let extra = match params.get("extra_codimension") {
        None | Some(Value::Null) => 0,
        Some(x) => x.as_u64().filter(|e| *e <= 4).ok_or_else(|| Error::Param {
            field: "extra_codimension".into(),
            reason: "expected an integer in 0..=4".into(),
        })? as usize,
    };
    Ok(ImmersionSpec { surface, extra })
}

/// Metric area element `W = sqrt(g11 g22 - g12^2)` at a point.
pub fn area_element(spec: &ImmersionSpec, u: f64, v: f64) -> f64 {
    let (_, xu, xv) = spec.first(u, v);
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    (dot(&xu, &xu) * dot(&xv, &xv) - dot(&xu, &xv).powi(2)).max(0.0).sqrt()
}
