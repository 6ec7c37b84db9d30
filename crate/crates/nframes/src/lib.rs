//! Extrinsic geometry of surfaces `X: B -> R^{n+2}` over the closed unit disc,
//! normal frames, torsion, and normal Coulomb frames.
//!
//! The crate is organised bottom-up:
//!
//! * [`surface_catalog`] - analytic immersions and jet evaluation
//! * [`geometry_core`] - fundamental forms, curvatures, integrability residuals
//! * [`normal_bundle`] - frames, torsion, rotations, normal curvature
//! * [`disc_solvers`] - polar grid, Poisson solvers, singular integrals
//! * [`coulomb_gauge`] - total torsion, gauge construction, bounds
//! * [`cli_report`] - configuration, pipelines and report files

pub mod cli_report;
pub mod coulomb_gauge;
pub mod disc_solvers;
pub mod dual;
pub mod error;
pub mod geometry_core;
pub mod normal_bundle;
pub mod surface_catalog;

pub use error::{Error, Result};
