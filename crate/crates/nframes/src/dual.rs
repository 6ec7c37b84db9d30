//! Generic scalar plumbing shared by the analytic evaluators.
//!
//! Every analytic quantity is written once over a [`Scalar`]; plugging in
//! `f64`, [`HyperDual64`] or nested hyper-duals yields values together with
//! exact partial derivatives in `(u, v)`.

use num_dual::{DualNum, HyperDual, HyperDual64};

pub trait Scalar: DualNum<Primitive = f64> + Copy + Send + Sync {}
impl<T: DualNum<Primitive = f64> + Copy + Send + Sync> Scalar for T {}

#[inline]
pub fn k<D: Scalar>(x: f64) -> D {
    D::from(x)
}

pub fn dot<D: Scalar>(a: &[D], b: &[D]) -> D {
    a.iter().zip(b).fold(k(0.0), |acc, (x, y)| acc + *x * *y)
}

/// Seeds `(u, v)` so that `eps1 = d/du` and `eps2 = d/dv`.
pub fn seed_uv<D: Scalar>(u: D, v: D) -> (HyperDual<D>, HyperDual<D>) {
    (
        HyperDual::new(u, k(1.0), k(0.0), k(0.0)),
        HyperDual::new(v, k(0.0), k(1.0), k(0.0)),
    )
}

/// Seeds a single direction twice: `eps1eps2` becomes the pure second derivative.
pub fn seed_twice<D: Scalar>(u: D, v: D, along_u: bool) -> (HyperDual<D>, HyperDual<D>) {
    let (a, b) = if along_u { (k(1.0), k(0.0)) } else { (k(0.0), k(1.0)) };
    (HyperDual::new(u, a, a, k(0.0)), HyperDual::new(v, b, b, k(0.0)))
}

pub fn seed_point(u: f64, v: f64) -> (HyperDual64, HyperDual64) {
    seed_uv(u, v)
}

/// Value, `d/du`, `d/dv` of a hyper-dual seeded by [`seed_uv`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Grad {
    pub val: f64,
    pub du: f64,
    pub dv: f64,
}

impl Grad {
    pub fn of(x: HyperDual64) -> Self {
        Grad { val: x.re, du: x.eps1, dv: x.eps2 }
    }
    pub fn d(&self, i: usize) -> f64 {
        if i == 0 {
            self.du
        } else {
            self.dv
        }
    }
}

pub fn vre<D: Scalar>(x: &[D]) -> Vec<f64> {
    x.iter().map(|c| c.re()).collect()
}
