//! JSON run configurations, pipelines, and report files.
//!
//! A run validates its configuration first (exit code 2 on failure), then
//! executes one pipeline. All output files are produced in memory and written
//! with write-then-rename, `report.json` last, so a failed run never leaves
//! partial CSVs behind.

mod config;
mod pipelines;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub use config::{GaugeChoice, GaugeConfig, GridConfig, Pipeline, RunConfig, SurfaceConfig, Tolerances, SCHEMA_VERSION};
pub use pipelines::{Check, Relation, Stage};

use crate::surface_catalog::catalog_schema;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceInfo {
    pub name: String,
    pub params: Value,
    pub codimension: usize,
    pub ambient_dim: usize,
    pub conformal_claim: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timings {
    pub total_seconds: f64,
    pub stages: Vec<Stage>,
}

/// Contents of `report.json`. Only `timings` varies between identical runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub generator: String,
    pub pipeline: Pipeline,
    pub config: RunConfig,
    pub surface: SurfaceInfo,
    pub results: serde_json::Map<String, Value>,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub error: Option<String>,
    pub files: Vec<String>,
    pub timings: Timings,
}

impl RunReport {
    /// 0 when every check passed, 1 on a failed check or pipeline error.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Validates, executes and writes one run. `Err` means the configuration was
/// rejected and nothing was written; pipeline failures are recorded in the report.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    let (pipeline, spec, grid) = cfg.prepare()?;
    let t0 = Instant::now();
    let mut outcome = pipelines::Outcome::default();
    let error = pipelines::execute(cfg, pipeline, &spec, grid, &mut outcome).err().map(|e| e.to_string());
    if error.is_some() {
        outcome.files.clear();
    }
    let passed = error.is_none() && outcome.checks.iter().all(|c| c.passed);
    let mut report = RunReport {
        schema_version: SCHEMA_VERSION,
        generator: format!("nframes {}", env!("CARGO_PKG_VERSION")),
        pipeline,
        config: cfg.clone(),
        surface: SurfaceInfo {
            name: spec.name().into(),
            params: spec.params(),
            codimension: spec.codimension(),
            ambient_dim: spec.ambient_dim(),
            conformal_claim: spec.conformal_claim(),
        },
        results: outcome.results,
        checks: outcome.checks,
        passed,
        error,
        files: outcome.files.iter().map(|(name, _)| name.clone()).collect(),
        timings: Timings { total_seconds: 0.0, stages: outcome.stages },
    };
    for (name, bytes) in &outcome.files {
        write_atomic(&cfg.out.join(name), bytes)?;
    }
    report.timings.total_seconds = t0.elapsed().as_secs_f64();
    let json = serde_json::to_vec_pretty(&report)?;
    write_atomic(&report_path(&cfg.out), &json)?;
    Ok(report)
}

pub fn report_path(out: &Path) -> PathBuf {
    out.join("report.json")
}

/// Writes to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::Config(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    Ok(result?)
}

/// Catalog names with their parameter schemas, one per line.
pub fn list_surfaces() -> String {
    let mut s = String::new();
    for (name, schema) in catalog_schema() {
        s.push_str(&format!("{name:<18} {schema}\n"));
    }
    s.push_str("\nAny surface also accepts \"extra_codimension\": k (0..=4), appending k zero coordinates.\n");
    s
}
