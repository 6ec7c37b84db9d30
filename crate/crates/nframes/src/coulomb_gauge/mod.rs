//! Total torsion, Euler-Lagrange residuals and normal Coulomb frames, together
//! with the integral functions of a Coulomb frame and the bounds they satisfy.

mod bounds;
mod descent;
mod functional;
mod grassmann;
mod neumann;
mod rh;

use serde::Serialize;

pub use bounds::{
    bounds_report, curvature_inequality_margin, curvature_inequality_slack, lower_bound, BoundsReport, CpEntry,
    Inequality, LowerBound,
};
pub use descent::{coulomb_gauge_general, DescentOptions};
pub use functional::{
    conformality_defect, el_residual, torsion_density, torsion_l2_distance, total_torsion, ElResidual,
};
pub use grassmann::{grassmann_residuals, integral_functions, GrassmannField, GrassmannResiduals};
pub use neumann::{angle_rotation, coulomb_gauge_n2, torsion_free_frame, FLAT_TOL};
pub use rh::{riemann_hilbert_psi, riemann_hilbert_psi_within, torsion_psi};

use crate::disc_solvers::{LinearSolveStats, ScalarField};
use crate::normal_bundle::{FrameField, RotationField, TorsionField};

const HISTORY_RTOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeMethod {
    Neumann,
    Descent,
    TorsionFree,
}

#[derive(Clone, Debug)]
pub struct GaugeResult {
    pub method: GaugeMethod,
    pub rotation: RotationField,
    pub frame: FrameField,
    pub torsion: TorsionField,
    pub total_torsion: f64,
    pub el_interior_residual: f64,
    pub el_boundary_residual: f64,
    /// Residual of the discrete (edge) Euler-Lagrange equations, descent only.
    pub discrete_el_residual: Option<f64>,
    /// Functional value per accepted step; starts with the start frame.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub stagnated: bool,
    pub solve_stats: Vec<LinearSolveStats>,
    /// Rotation angle of the codimension-two routes.
    pub angle: Option<ScalarField>,
}

/// Scalar part of a [`GaugeResult`] for reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeSummary {
    pub method: GaugeMethod,
    pub total_torsion: f64,
    pub el_interior_residual: f64,
    pub el_boundary_residual: f64,
    pub discrete_el_residual: Option<f64>,
    pub torsion_sup: f64,
    pub iterations: usize,
    pub stagnated: bool,
    pub linear_solves: usize,
    pub history: Vec<f64>,
}

impl GaugeResult {
    pub fn summary(&self) -> GaugeSummary {
        GaugeSummary {
            method: self.method,
            total_torsion: self.total_torsion,
            el_interior_residual: self.el_interior_residual,
            el_boundary_residual: self.el_boundary_residual,
            discrete_el_residual: self.discrete_el_residual,
            torsion_sup: self.torsion.sup(),
            iterations: self.iterations,
            stagnated: self.stagnated,
            linear_solves: self.solve_stats.len(),
            history: self.history.clone(),
        }
    }

    /// Roundoff allowance for an increase between recorded values.
    pub fn history_tolerance(&self) -> f64 {
        HISTORY_RTOL * self.history.iter().fold(1.0, |m: f64, x| m.max(x.abs()))
    }

    /// Largest increase between consecutive recorded values, or `0`.
    pub fn history_max_increase(&self) -> f64 {
        self.history.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// True when the recorded functional values never increase beyond roundoff.
    pub fn history_monotone(&self) -> bool {
        self.history_max_increase() <= self.history_tolerance()
    }
}
