//! Polar discretization of the closed unit disc, Poisson solvers and the
//! singular integral operators of the disc.

mod cauchy;
mod cg;
pub mod fd;
mod field;
mod green;
mod grid;
pub mod laplace;
pub mod stencil;

pub use cauchy::{cauchy_p, cauchy_t, CauchyIntegrator};
pub use cg::{pcg, CgOutcome};
pub use field::{quadrature, ComplexField, ScalarField};
pub use green::green_kernel_abs_integral;
pub use grid::PolarGrid;
pub use laplace::{
    laplacian_apply, solve_dirichlet_zero, solve_neumann, solve_neumann_with, Constraint, LinearSolveStats,
    DEFAULT_TOL,
};
