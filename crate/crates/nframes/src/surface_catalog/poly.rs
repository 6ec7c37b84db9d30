use serde::{Deserialize, Serialize};

use crate::dual::{k, Scalar};

/// Real polynomial `Σ c u^i v^j` in the parameters.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Poly2 {
    pub terms: Vec<(f64, u32, u32)>,
}

impl Poly2 {
    pub fn eval<D: Scalar>(&self, u: D, v: D) -> D {
        self.terms
            .iter()
            .fold(k(0.0), |acc, (c, i, j)| acc + u.powi(*i as i32) * v.powi(*j as i32) * *c)
    }
}

/// Complex polynomial `Σ c_k w^k`, evaluated as a pair `(Re, Im)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoly {
    pub coeffs: Vec<(f64, f64)>,
}

impl ComplexPoly {
    pub fn eval<D: Scalar>(&self, u: D, v: D) -> (D, D) {
        let mut re: D = k(0.0);
        let mut im: D = k(0.0);
        for (a, b) in self.coeffs.iter().rev() {
            let nr = re * u - im * v + *a;
            let ni = re * v + im * u + *b;
            re = nr;
            im = ni;
        }
        (re, im)
    }
}
