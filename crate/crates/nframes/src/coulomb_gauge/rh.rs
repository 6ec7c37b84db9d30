use num_complex::Complex64;

use crate::disc_solvers::{CauchyIntegrator, ComplexField, ScalarField};
use crate::Result;

/// `Ψ = P_B[(i/2) S_N W]` at every node with `|w| ≤ radius`; other nodes hold NaN.
pub fn riemann_hilbert_psi_within(s_n_w: &ScalarField, radius: f64) -> Result<ComplexField> {
    let grid = s_n_w.grid;
    let f = ComplexField { grid, values: s_n_w.values.iter().map(|s| Complex64::new(0.0, 0.5 * s)).collect() };
    let op = CauchyIntegrator::new(&f);
    let limit = radius.min(1.0 - grid.dr());
    let nodes: Vec<usize> = (0..grid.node_count())
        .filter(|&k| grid.radius(grid.ring(k).0) <= limit + 1e-12)
        .collect();
    let points: Vec<Complex64> = nodes.iter().map(|&k| {
        let (u, v) = grid.point(k);
        Complex64::new(u, v)
    }).collect();
    let vals = op.p_many(&points)?;
    let mut values = vec![Complex64::new(f64::NAN, f64::NAN); grid.node_count()];
    for (k, v) in nodes.into_iter().zip(vals) {
        values[k] = v;
    }
    Ok(ComplexField { grid, values })
}

/// `Ψ` on all nodes with `|w| ≤ 1 - Δr`.
pub fn riemann_hilbert_psi(s_n_w: &ScalarField) -> Result<ComplexField> {
    riemann_hilbert_psi_within(s_n_w, 1.0)
}

/// `T_{1,1}^2 - i T_{1,2}^2` of a codimension-two torsion field.
pub fn torsion_psi(t: &crate::normal_bundle::TorsionField) -> ComplexField {
    ComplexField {
        grid: t.grid,
        values: t.t1.iter().zip(&t.t2).map(|(a, b)| Complex64::new(a[(0, 1)], -b[(0, 1)])).collect(),
    }
}
