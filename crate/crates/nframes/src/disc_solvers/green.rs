use std::f64::consts::PI;

use num_complex::Complex64;

use super::grid::PolarGrid;

const SUBDIV: usize = 16;

fn abs_green(z: Complex64, w: Complex64) -> f64 {
    let q = (z - w) / (Complex64::new(1.0, 0.0) - w.conj() * z);
    -q.norm().ln() / (2.0 * PI)
}

/// `∫∫_B |G(ζ; w)| dζ` for the Dirichlet Green kernel of the unit disc.
///
/// A small disc `D_ρ(w)` is integrated exactly (mean-value property for the
/// regular part, polar integration for `log|ζ - w|`); cells cut by its rim are
/// subdivided, everything else uses the midpoint rule.
pub fn green_kernel_abs_integral(grid: &PolarGrid, w: Complex64) -> f64 {
    let wn = w.norm();
    if wn >= 1.0 - 1e-12 {
        return 0.0;
    }
    let h = grid.dr();
    let dt = grid.dtheta();
    let rho = (3.0 * h).min(0.5 * (1.0 - wn));
    let disc = -(PI * rho * rho * (rho.ln() - 0.5) - PI * rho * rho * (1.0 - wn * wn).ln()) / (2.0 * PI);
    let mut sum = 0.0;
    for i in 0..grid.nr() {
        let ri = grid.radius(i);
        let half_diag = 0.5 * h.hypot((ri + 0.5 * h) * dt);
        for j in 0..grid.ntheta() {
            let t = grid.theta(j);
            let z = Complex64::from_polar(ri, t);
            let d = (z - w).norm();
            if d - half_diag > rho {
                sum += abs_green(z, w) * grid.cell_area(i);
            } else if d + half_diag < rho {
                continue;
            } else {
                let (sh, st) = (h / SUBDIV as f64, dt / SUBDIV as f64);
                for a in 0..SUBDIV {
                    let rs = ri - 0.5 * h + (a as f64 + 0.5) * sh;
                    for b in 0..SUBDIV {
                        let ts = t - 0.5 * dt + (b as f64 + 0.5) * st;
                        let zs = Complex64::from_polar(rs, ts);
                        if (zs - w).norm() >= rho {
                            sum += abs_green(zs, w) * rs * sh * st;
                        }
                    }
                }
            }
        }
    }
    sum + disc
}
