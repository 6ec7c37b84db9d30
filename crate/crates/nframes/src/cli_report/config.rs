use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::disc_solvers::PolarGrid;
use crate::surface_catalog::{builtin_surface, catalog_names, ImmersionSpec};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    Analyze,
    Gauge,
    Bounds,
    Rh,
    Residuals,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Analyze => "analyze",
            Pipeline::Gauge => "gauge",
            Pipeline::Bounds => "bounds",
            Pipeline::Rh => "rh",
            Pipeline::Residuals => "residuals",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub name: String,
    #[serde(default = "empty_object")]
    pub params: Value,
}

fn empty_object() -> Value {
    json!({})
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nr: usize,
    pub ntheta: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { nr: 64, ntheta: 128 }
    }
}

/// Thresholds of the checks each pipeline records.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Orthonormality and tangency of frames.
    pub frame: f64,
    /// Analytic-path integrability residuals.
    pub integrability: f64,
    /// Allowed negative margin in the pointwise curvature inequality.
    pub curvature_inequality: f64,
    /// Flatness threshold on `sup |S|` and floor of the parallel-frame check.
    pub flat: f64,
    /// Discrete Euler-Lagrange residual of the descent.
    pub el: f64,
    /// Riemann-Hilbert versus torsion sup error, floor of `max(rh, 10 h)`.
    pub rh: f64,
    /// Radius of the disc on which the Riemann-Hilbert comparison is made.
    pub rh_radius: f64,
    /// Slack multiplying `h²` in discretized inequalities.
    pub discretization: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            frame: 1e-10,
            integrability: 1e-8,
            curvature_inequality: 1e-9,
            flat: 1e-6,
            el: 1e-6,
            rh: 2e-2,
            rh_radius: 0.9,
            discretization: 100.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GaugeChoice {
    /// Neumann route in codimension two, descent otherwise.
    #[default]
    Auto,
    Neumann,
    Descent,
    TorsionFree,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaugeConfig {
    pub method: GaugeChoice,
    /// Amplitude of a seeded random rotation applied to the start frame; 0 disables it.
    pub pre_rotation: f64,
    pub max_iter: usize,
}

impl Default for GaugeConfig {
    fn default() -> Self {
        GaugeConfig { method: GaugeChoice::Auto, pre_rotation: 0.0, max_iter: 5000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub surface: SurfaceConfig,
    pub grid: GridConfig,
    pub pipeline: Option<Pipeline>,
    pub tolerances: Tolerances,
    pub gauge: GaugeConfig,
    pub out: PathBuf,
    pub seed: u64,
}

const KEYS: [&str; 7] = ["surface", "grid", "pipeline", "tolerances", "gauge", "out", "seed"];

fn field<T: DeserializeOwned>(obj: &serde_json::Map<String, Value>, key: &str) -> Result<Option<T>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v.clone()).map(Some).map_err(|e| Error::Config(format!("`{key}`: {e}"))),
    }
}

impl RunConfig {
    pub fn new(surface: &str, params: Value, pipeline: Pipeline) -> Self {
        RunConfig {
            surface: SurfaceConfig { name: surface.into(), params },
            grid: GridConfig::default(),
            pipeline: Some(pipeline),
            tolerances: Tolerances::default(),
            gauge: GaugeConfig::default(),
            out: PathBuf::from("nframes-out"),
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
        let obj = value.as_object().ok_or_else(|| Error::Config("top level must be an object".into()))?;
        if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!("`{k}`: unknown field, expected one of {}", KEYS.join(", "))));
        }
        let surface = field(obj, "surface")?.ok_or_else(|| Error::Config("`surface`: missing field".into()))?;
        Ok(RunConfig {
            surface,
            grid: field(obj, "grid")?.unwrap_or_default(),
            pipeline: field(obj, "pipeline")?,
            tolerances: field(obj, "tolerances")?.unwrap_or_default(),
            gauge: field(obj, "gauge")?.unwrap_or_default(),
            out: field(obj, "out")?.unwrap_or_else(|| PathBuf::from("nframes-out")),
            seed: field(obj, "seed")?.unwrap_or(0),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Validates everything that can be checked before any numerics run.
    pub fn prepare(&self) -> Result<(Pipeline, ImmersionSpec, PolarGrid)> {
        let pipeline = self.pipeline.ok_or_else(|| Error::Config("`pipeline`: missing field".into()))?;
        if !catalog_names().contains(&self.surface.name.as_str()) {
            return Err(Error::Config(format!(
                "`surface.name`: unknown surface `{}`, expected one of {}",
                self.surface.name,
                catalog_names().join(", ")
            )));
        }
        let spec = builtin_surface(&self.surface.name, &self.surface.params).map_err(|e| match e {
            Error::Param { field, reason } => Error::Config(format!("`surface.params.{field}`: {reason}")),
            other => Error::Config(format!("`surface.params`: {other}")),
        })?;
        let grid = PolarGrid::new(self.grid.nr, self.grid.ntheta).map_err(|e| Error::Config(format!("`grid`: {e}")))?;
        let t = &self.tolerances;
        for (name, x) in [
            ("frame", t.frame),
            ("integrability", t.integrability),
            ("curvature_inequality", t.curvature_inequality),
            ("flat", t.flat),
            ("el", t.el),
            ("rh", t.rh),
            ("discretization", t.discretization),
        ] {
            if !(x.is_finite() && x >= 0.0) {
                return Err(Error::Config(format!("`tolerances.{name}`: expected a non-negative number")));
            }
        }
        if !(t.rh_radius > 0.0 && t.rh_radius < 1.0) {
            return Err(Error::Config("`tolerances.rh_radius`: expected a number in (0, 1)".into()));
        }
        if !(self.gauge.pre_rotation.is_finite() && self.gauge.pre_rotation >= 0.0) {
            return Err(Error::Config("`gauge.pre_rotation`: expected a non-negative number".into()));
        }
        check_writable(&self.out)?;
        Ok((pipeline, spec, grid))
    }
}

fn check_writable(dir: &Path) -> Result<()> {
    let fail = |e: std::io::Error| Error::Config(format!("`out`: {} is not writable: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(fail)?;
    let probe = dir.join(format!(".nframes-probe-{}", std::process::id()));
    std::fs::write(&probe, b"").map_err(fail)?;
    std::fs::remove_file(&probe).map_err(fail)?;
    Ok(())
}
