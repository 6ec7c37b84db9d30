use num_dual::HyperHyperDual64;

use super::ImmersionSpec;
use crate::disc_solvers::stencil::fd_weights;
use crate::{Error, Result};

/// Position and all partial derivatives up to third order at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct JetSample {
    pub point: (f64, f64),
    pub x: Vec<f64>,
    pub xu: Vec<f64>,
    pub xv: Vec<f64>,
    pub xuu: Vec<f64>,
    pub xuv: Vec<f64>,
    pub xvv: Vec<f64>,
    pub xuuu: Vec<f64>,
    pub xuuv: Vec<f64>,
    pub xuvv: Vec<f64>,
    pub xvvv: Vec<f64>,
}

impl JetSample {
    pub fn fields(&self) -> [&Vec<f64>; 10] {
        [
            &self.x, &self.xu, &self.xv, &self.xuu, &self.xuv, &self.xvv, &self.xuuu, &self.xuuv, &self.xuvv,
            &self.xvvv,
        ]
    }

    pub fn max_abs_diff(&self, other: &JetSample) -> f64 {
        self.fields()
            .iter()
            .zip(other.fields().iter())
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

fn hhd_seed(x: f64, dirs: [bool; 3]) -> HyperHyperDual64 {
    let e = |b: bool| if b { 1.0 } else { 0.0 };
    HyperHyperDual64::new(x, e(dirs[0]), e(dirs[1]), e(dirs[2]), 0.0, 0.0, 0.0, 0.0)
}

fn third(spec: &ImmersionSpec, u: f64, v: f64, along_u: [bool; 3]) -> Vec<HyperHyperDual64> {
    let a = hhd_seed(u, along_u);
    let b = hhd_seed(v, along_u.map(|x| !x));
    spec.position(a, b)
}

/// Exact jets from hyper-hyper-dual evaluation.
pub fn evaluate_jet(spec: &ImmersionSpec, point: (f64, f64)) -> Result<JetSample> {
    let (u, v) = point;
    spec.check_point(u, v)?;
    let uuu = third(spec, u, v, [true, true, true]);
    let uuv = third(spec, u, v, [true, true, false]);
    let uvv = third(spec, u, v, [true, false, false]);
    let vvv = third(spec, u, v, [false, false, false]);
    let pick = |s: &[HyperHyperDual64], f: fn(&HyperHyperDual64) -> f64| s.iter().map(f).collect::<Vec<f64>>();
    Ok(JetSample {
        point,
        x: pick(&uuu, |c| c.re),
        xu: pick(&uuu, |c| c.eps1),
        xv: pick(&vvv, |c| c.eps1),
        xuu: pick(&uuu, |c| c.eps1eps2),
        xuv: pick(&uuv, |c| c.eps1eps3),
        xvv: pick(&vvv, |c| c.eps1eps2),
        xuuu: pick(&uuu, |c| c.eps1eps2eps3),
        xuuv: pick(&uuv, |c| c.eps1eps2eps3),
        xuvv: pick(&uvv, |c| c.eps1eps2eps3),
        xvvv: pick(&vvv, |c| c.eps1eps2eps3),
    })
}

const CENTRAL: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

/// Offsets along one axis: central when the stencil fits in the disc,
/// otherwise shifted one-sided toward the interior.
fn offsets(centre: f64, other: f64, step: f64) -> [f64; 5] {
    let inside = |t: f64| (centre + t * step).hypot(other) <= 1.0 + 1e-12;
    if CENTRAL.iter().all(|t| inside(*t)) {
        return CENTRAL;
    }
    if centre >= 0.0 {
        [0.0, -1.0, -2.0, -3.0, -4.0]
    } else {
        [0.0, 1.0, 2.0, 3.0, 4.0]
    }
}

/// Derivatives from position samples only, as tensor products of 1-D
/// five-point weights.
pub fn fd_jet_oracle_fn(f: impl Fn(f64, f64) -> Vec<f64>, point: (f64, f64), step: f64) -> Result<JetSample> {
    if !(step >= 1e-10) || !step.is_finite() {
        return Err(Error::Param { field: "step".into(), reason: format!("step {step:e} below 1e-10") });
    }
    let (u, v) = point;
    let ou = offsets(u, v, step);
    let ov = offsets(v, u, step);
    let wu = fd_weights(0.0, &ou.map(|t| t * step), 3);
    let wv = fd_weights(0.0, &ov.map(|t| t * step), 3);
    let samples: Vec<Vec<Vec<f64>>> = ou
        .iter()
        .map(|a| ov.iter().map(|b| f(u + a * step, v + b * step)).collect())
        .collect();
    let m = samples[0][0].len();
    let d = |p: usize, q: usize| -> Vec<f64> {
        (0..m)
            .map(|c| {
                let mut acc = 0.0;
                for a in 0..5 {
                    for b in 0..5 {
                        let w = wu[p][a] * wv[q][b];
                        if w != 0.0 {
                            acc += w * samples[a][b][c];
                        }
                    }
                }
                acc
            })
            .collect()
    };
    Ok(JetSample {
        point,
        x: f(u, v),
        xu: d(1, 0),
        xv: d(0, 1),
        xuu: d(2, 0),
        xuv: d(1, 1),
        xvv: d(0, 2),
        xuuu: d(3, 0),
        xuuv: d(2, 1),
        xuvv: d(1, 2),
        xvvv: d(0, 3),
    })
}

pub fn fd_jet_oracle(spec: &ImmersionSpec, point: (f64, f64), step: f64) -> Result<JetSample> {
    spec.check_point(point.0, point.1)?;
    fd_jet_oracle_fn(|a, b| spec.position(a, b), point, step)
}
