use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({u}, {v}) lies outside the closed unit disc")]
    Domain { u: f64, v: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("unknown surface `{0}`")]
    UnknownSurface(String),

    #[error("invalid parameter `{field}`: {reason}")]
    Param { field: String, reason: String },

    #[error("degenerate immersion at ({u:.6}, {v:.6}): W = {w:e}")]
    Immersion { u: f64, v: f64, w: f64 },

    #[error("frame construction failed at ({u:.6}, {v:.6}): {reason}")]
    Frame { u: f64, v: f64, reason: String },

    #[error("non-conformal parametrization (defect {defect:e}); use the torsion route")]
    NonConformal { defect: f64 },

    #[error("gauge error: {0}")]
    Gauge(String),

    #[error("Neumann data incompatible: defect {defect:e} exceeds {tol:e}")]
    Compatibility { defect: f64, tol: f64 },

    #[error("linear solver did not converge: {iterations} iterations, relative residual {residual:e}")]
    Solver { iterations: usize, residual: f64 },

    #[error("normal bundle is not flat: sup |S_N W| = {sup:e}")]
    NotFlat { sup: f64 },

    #[error("codimension mismatch: {0}")]
    Codimension(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
