//! Normal frames, torsion coefficients, frame rotations and the curvature of
//! the normal bundle.

mod curvature;
mod frame;
mod rotation;
mod son;
mod torsion;

pub use curvature::{s_conformal, s_general_metric, skew_to_wedge, wedge, CurvatureRoute, NormalCurvature};
pub use frame::{
    determinant, euler_gram_schmidt_frame, gram_schmidt, orientation, rotate_frame, FrameCheck, FrameField, FrameRecipe,
};
pub use rotation::{fd_matrix_gradient, pair_index, AnalyticRotation, DerivativePath, RotationField, SmoothFn};
pub use son::{
    add, expm, expm_f64, eye, from_dmatrix, logm_near_identity, matmul, polar_factor, scale, skew_part, to_dmatrix,
    transpose, zeros, Mat,
};
pub use torsion::{torsion_coefficients, transform_torsions, TorsionField};
