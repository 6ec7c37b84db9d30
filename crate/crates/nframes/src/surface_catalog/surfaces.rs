use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::poly::{ComplexPoly, Poly2};
use crate::dual::{dot, k, Scalar};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParallelBase {
    Clifford,
    Spherical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Surface {
    Clifford,
    HolomorphicGraph { phi: ComplexPoly },
    Graph { heights: Vec<Poly2> },
    Spherical { lambda: f64, alpha: f64 },
    Veronese { theta: (f64, f64), phi: (f64, f64) },
    ParallelType { base: ParallelBase, f: f64, g: f64 },
}

const SPHERE_DEFAULT: (f64, f64) = (0.8, 0.3);

impl Surface {
    pub fn codimension(&self) -> usize {
        match self {
            Surface::Graph { heights } => heights.len(),
            Surface::Veronese { .. } => 3,
            _ => 2,
        }
    }

    pub fn conformal(&self) -> bool {
        match self {
            Surface::Clifford | Surface::HolomorphicGraph { .. } | Surface::Spherical { .. } => true,
            Surface::ParallelType { base: ParallelBase::Spherical, .. } => true,
            Surface::ParallelType { base: ParallelBase::Clifford, g, .. } => *g == 0.0,
            Surface::Graph { .. } | Surface::Veronese { .. } => false,
        }
    }

    pub fn position<D: Scalar>(&self, u: D, v: D) -> Vec<D> {
        match self {
            Surface::Clifford => clifford(u, v),
            Surface::HolomorphicGraph { phi } => {
                let (a, b) = phi.eval(u, v);
                vec![u, v, a, b]
            }
            Surface::Graph { heights } => {
                let mut x = vec![u, v];
                x.extend(heights.iter().map(|p| p.eval(u, v)));
                x
            }
            Surface::Spherical { lambda, alpha } => sphere(*lambda, *alpha, u, v),
            Surface::Veronese { theta, phi } => {
                let t = u * theta.1 + theta.0;
                let p = v * phi.1 + phi.0;
                let s3 = 3f64.sqrt();
                let x = t.sin() * p.cos() * s3;
                let y = t.sin() * p.sin() * s3;
                let z = t.cos() * s3;
                vec![
                    y * z / s3,
                    x * z / s3,
                    x * y / s3,
                    (x * x - y * y) / (2.0 * s3),
                    (x * x + y * y - z * z * 2.0) / 6.0,
                ]
            }
            Surface::ParallelType { base, f, g } => {
                let (x, nf) = parallel_base(*base, u, v);
                (0..4).map(|c| x[c] + nf[0][c] * *f + nf[1][c] * *g).collect()
            }
        }
    }

    /// A smooth spanning set of the normal space, before Gram-Schmidt.
    /// `None` means: project the trailing ambient basis vectors.
    pub fn spanning<D: Scalar>(&self, u: D, v: D, xu: &[D], xv: &[D]) -> Option<Vec<Vec<D>>> {
        match self {
            Surface::Clifford | Surface::Spherical { .. } | Surface::ParallelType { .. } => {
                let base = match self {
                    Surface::Clifford => ParallelBase::Clifford,
                    Surface::ParallelType { base, .. } => *base,
                    _ => ParallelBase::Spherical,
                };
                let (lambda, alpha) = match self {
                    Surface::Spherical { lambda, alpha } => (*lambda, *alpha),
                    _ => SPHERE_DEFAULT,
                };
                Some(match base {
                    ParallelBase::Clifford => clifford_frame(u, v).to_vec(),
                    ParallelBase::Spherical => sphere_frame(lambda, alpha, u, v).to_vec(),
                })
            }
            Surface::HolomorphicGraph { .. } | Surface::Graph { .. } => {
                let n = self.codimension();
                Some(
                    (0..n)
                        .map(|s| {
                            let mut e = vec![k::<D>(0.0); n + 2];
                            e[0] = -xu[2 + s];
                            e[1] = -xv[2 + s];
                            e[2 + s] = k(1.0);
                            e
                        })
                        .collect(),
                )
            }
            Surface::Veronese { .. } => {
                let x = self.position(u, v);
                let r = dot(&x, &x).sqrt();
                let mut set = vec![x.iter().map(|c| *c / r).collect::<Vec<D>>()];
                for a in [0usize, 3] {
                    let mut e = vec![k::<D>(0.0); 5];
                    e[a] = k(1.0);
                    set.push(e);
                }
                Some(set)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Surface::Clifford => "clifford",
            Surface::HolomorphicGraph { .. } => "holomorphic_graph",
            Surface::Graph { .. } => "graph",
            Surface::Spherical { .. } => "spherical",
            Surface::Veronese { .. } => "veronese",
            Surface::ParallelType { .. } => "parallel_type",
        }
    }

    pub fn params(&self) -> Value {
        match self {
            Surface::Clifford => json!({}),
            Surface::HolomorphicGraph { phi } => {
                json!({ "coeffs": phi.coeffs.iter().map(|(a, b)| vec![*a, *b]).collect::<Vec<_>>() })
            }
            Surface::Graph { heights } => json!({
                "heights": heights.iter().map(|p| p.terms.iter().map(|(c, i, j)| json!([c, i, j])).collect::<Vec<_>>()).collect::<Vec<_>>()
            }),
            Surface::Spherical { lambda, alpha } => json!({ "lambda": lambda, "alpha": alpha }),
            Surface::Veronese { theta, phi } => json!({ "theta": [theta.0, theta.1], "phi": [phi.0, phi.1] }),
            Surface::ParallelType { base, f, g } => json!({ "base": base, "f": f, "g": g }),
        }
    }
}

fn clifford<D: Scalar>(u: D, v: D) -> Vec<D> {
    let s = FRAC_1_SQRT_2;
    vec![u.cos() * s, u.sin() * s, v.cos() * s, v.sin() * s]
}

fn clifford_frame<D: Scalar>(u: D, v: D) -> [Vec<D>; 2] {
    let s = FRAC_1_SQRT_2;
    [clifford(u, v), vec![u.cos() * s, u.sin() * s, -v.cos() * s, -v.sin() * s]]
}

fn sphere<D: Scalar>(lambda: f64, alpha: f64, u: D, v: D) -> Vec<D> {
    let r2 = (u * u + v * v) * (lambda * lambda);
    let den = r2 + 1.0;
    let x1 = u * (2.0 * lambda) / den;
    let x2 = v * (2.0 * lambda) / den;
    let x3 = (-r2 + 1.0) / den;
    vec![x1, x2, x3 * alpha.cos(), x3 * alpha.sin()]
}

fn sphere_frame<D: Scalar>(lambda: f64, alpha: f64, u: D, v: D) -> [Vec<D>; 2] {
    [sphere(lambda, alpha, u, v), vec![k(0.0), k(0.0), k(-alpha.sin()), k(alpha.cos())]]
}

fn parallel_base<D: Scalar>(base: ParallelBase, u: D, v: D) -> (Vec<D>, [Vec<D>; 2]) {
    match base {
        ParallelBase::Clifford => (clifford(u, v), clifford_frame(u, v)),
        ParallelBase::Spherical => {
            let (l, a) = SPHERE_DEFAULT;
            (sphere(l, a, u, v), sphere_frame(l, a, u, v))
        }
    }
}

fn param_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Param { field: field.into(), reason: reason.into() }
}

fn get_f64(p: &Value, key: &str, default: f64) -> Result<f64> {
    match p.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(x) => x
            .as_f64()
            .filter(|v| v.is_finite())
            .ok_or_else(|| param_err(key, "expected a finite number")),
    }
}

fn get_pair(p: &Value, key: &str, default: (f64, f64)) -> Result<(f64, f64)> {
    match p.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(x) => {
            let a = x.as_array().ok_or_else(|| param_err(key, "expected [a, b]"))?;
            if a.len() != 2 {
                return Err(param_err(key, "expected exactly two numbers"));
            }
            let f = |v: &Value| v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| param_err(key, "expected numbers"));
            Ok((f(&a[0])?, f(&a[1])?))
        }
    }
}

fn parse_poly(field: &str, v: &Value) -> Result<Poly2> {
    let terms = v.as_array().ok_or_else(|| param_err(field, "expected a list of [c, i, j] terms"))?;
    let mut out = Vec::new();
    for t in terms {
        let t = t.as_array().filter(|a| a.len() == 3).ok_or_else(|| param_err(field, "term must be [c, i, j]"))?;
        let c = t[0].as_f64().filter(|x| x.is_finite()).ok_or_else(|| param_err(field, "coefficient must be a number"))?;
        let i = t[1].as_u64().filter(|x| *x <= 12).ok_or_else(|| param_err(field, "exponent must be an integer in 0..=12"))?;
        let j = t[2].as_u64().filter(|x| *x <= 12).ok_or_else(|| param_err(field, "exponent must be an integer in 0..=12"))?;
        out.push((c, i as u32, j as u32));
    }
    Ok(Poly2 { terms: out })
}

const KNOWN: [&str; 6] = ["clifford", "holomorphic_graph", "graph", "spherical", "veronese", "parallel_type"];

pub fn catalog_names() -> &'static [&'static str] {
    &KNOWN
}

/// Parameter schema per catalog entry, as shown by `nframes list-surfaces`.
pub fn catalog_schema() -> Vec<(&'static str, &'static str)> {
    vec![
        ("clifford", "{} - flat torus (cos u, sin u, cos v, sin v)/sqrt2 in R^4"),
        ("holomorphic_graph", "{\"coeffs\": [[re, im], ...]} - graph of Phi(w) = sum c_k w^k, default w^2"),
        ("graph", "{\"heights\": [[[c, i, j], ...], ...]} - heights z_s = sum c u^i v^j, one list per normal direction"),
        ("spherical", "{\"lambda\": 0.8, \"alpha\": 0.3} - stereographic sphere patch in R^4, tilted by alpha"),
        ("veronese", "{\"theta\": [pi/2, 0.6], \"phi\": [0, 0.6]} - Veronese surface in R^5, angles affine in (u, v)"),
        ("parallel_type", "{\"base\": \"clifford\"|\"spherical\", \"f\": 0.0, \"g\": 0.0} - X + f N1 + g N2"),
    ]
}

pub fn parse_surface(name: &str, params: &Value) -> Result<Surface> {
    let empty = json!({});
    let p = if params.is_null() { &empty } else { params };
    if !p.is_object() {
        return Err(param_err("params", "expected an object"));
    }
    Ok(match name {
        "clifford" => Surface::Clifford,
        "holomorphic_graph" => {
            let coeffs = match p.get("coeffs") {
                None => vec![(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
                Some(c) => {
                    let a = c.as_array().ok_or_else(|| param_err("coeffs", "expected a list of [re, im]"))?;
                    let mut out = Vec::new();
                    for z in a {
                        let z = z.as_array().filter(|z| z.len() == 2).ok_or_else(|| param_err("coeffs", "entry must be [re, im]"))?;
                        let f = |v: &Value| v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| param_err("coeffs", "expected numbers"));
                        out.push((f(&z[0])?, f(&z[1])?));
                    }
                    out
                }
            };
            Surface::HolomorphicGraph { phi: ComplexPoly { coeffs } }
        }
        "graph" => {
            let heights = match p.get("heights") {
                None => vec![Poly2::default(), Poly2::default()],
                Some(h) => {
                    let a = h.as_array().ok_or_else(|| param_err("heights", "expected a list of polynomials"))?;
                    if a.is_empty() {
                        return Err(param_err("heights", "need at least one height function"));
                    }
                    a.iter().map(|t| parse_poly("heights", t)).collect::<Result<Vec<_>>>()?
                }
            };
            Surface::Graph { heights }
        }
        "spherical" => {
            let lambda = get_f64(p, "lambda", SPHERE_DEFAULT.0)?;
            if lambda <= 0.0 {
                return Err(param_err("lambda", "must be positive"));
            }
            Surface::Spherical { lambda, alpha: get_f64(p, "alpha", SPHERE_DEFAULT.1)? }
        }
        "veronese" => {
            let theta = get_pair(p, "theta", (PI / 2.0, 0.6))?;
            let phi = get_pair(p, "phi", (0.0, 0.6))?;
            if theta.0 - theta.1.abs() <= 0.05 || theta.0 + theta.1.abs() >= PI - 0.05 {
                return Err(param_err("theta", "chart must stay away from the poles"));
            }
            if theta.1 == 0.0 || phi.1 == 0.0 {
                return Err(param_err("theta", "angle scales must be nonzero"));
            }
            Surface::Veronese { theta, phi }
        }
        "parallel_type" => {
            let base = match p.get("base").and_then(|b| b.as_str()).unwrap_or("clifford") {
                "clifford" => ParallelBase::Clifford,
                "spherical" => ParallelBase::Spherical,
                other => return Err(param_err("base", format!("unknown base `{other}`"))),
            };
            let f = get_f64(p, "f", 0.0)?;
            let g = get_f64(p, "g", 0.0)?;
            let degenerate = match base {
                ParallelBase::Clifford => ((1.0 + f + g) * (1.0 + f - g)).abs() < 1e-6,
                ParallelBase::Spherical => (1.0 + f).abs() < 1e-6,
            };
            if degenerate {
                return Err(param_err("f", "parallel surface degenerates for these offsets"));
            }
            Surface::ParallelType { base, f, g }
        }
        other => return Err(Error::UnknownSurface(other.into())),
    })
}
