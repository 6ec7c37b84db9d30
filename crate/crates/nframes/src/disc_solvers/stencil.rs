/// Finite-difference weights for derivatives of order `0..=m` at `x0`
/// from samples at `xs` (Fornberg's recursion).
pub fn fd_weights(x0: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for kk in (1..=mn).rev() {
                    c[kk][i] = c1 * (kk as f64 * c[kk - 1][i - 1] - c5 * c[kk][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for kk in (1..=mn).rev() {
                c[kk][j] = (c4 * c[kk][j] - kk as f64 * c[kk - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_second_derivative() {
        let w = fd_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert!((w[2][0] - 1.0).abs() < 1e-14);
        assert!((w[2][1] + 2.0).abs() < 1e-14);
        assert!((w[1][2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn one_sided_exact_on_quadratics() {
        let xs = [1.0, 0.95, 0.85];
        let w = fd_weights(1.0, &xs, 1);
        let d: f64 = xs.iter().zip(&w[1]).map(|(x, c)| c * x * x).sum();
        assert!((d - 2.0).abs() < 1e-11);
    }
}
