use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{GaugeChoice, Pipeline, RunConfig, Tolerances};
use crate::coulomb_gauge::{
    bounds_report, coulomb_gauge_general, coulomb_gauge_n2, curvature_inequality_margin, el_residual,
    grassmann_residuals, integral_functions, riemann_hilbert_psi_within, torsion_density, torsion_free_frame,
    torsion_psi, total_torsion, DescentOptions, GaugeResult,
};
use crate::disc_solvers::{ComplexField, PolarGrid, ScalarField};
use crate::geometry_core::{curvatures, forms_field, integrability_residuals, max_conformality_defect, ResidualPath};
use crate::normal_bundle::{
    euler_gram_schmidt_frame, rotate_frame, torsion_coefficients, AnalyticRotation, FrameField, FrameRecipe,
    NormalCurvature, RotationField,
};
use crate::surface_catalog::ImmersionSpec;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One pass/fail assertion with its threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, relation: Relation::AtMost, threshold, passed: value <= threshold }
    }
    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, relation: Relation::AtLeast, threshold, passed: value >= threshold }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stage {
    pub name: String,
    pub seconds: f64,
}

/// Everything a pipeline produces before anything touches the disk.
#[derive(Default)]
pub struct Outcome {
    pub results: serde_json::Map<String, Value>,
    pub checks: Vec<Check>,
    pub files: Vec<(String, Vec<u8>)>,
    pub stages: Vec<Stage>,
}

impl Outcome {
    fn put(&mut self, key: &str, v: impl Serialize) -> Result<()> {
        self.results.insert(key.into(), serde_json::to_value(v)?);
        Ok(())
    }

    fn timed<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let t0 = Instant::now();
        let out = f()?;
        self.stages.push(Stage { name: name.into(), seconds: t0.elapsed().as_secs_f64() });
        Ok(out)
    }

    fn scalar_csv(&mut self, name: &str, f: &ScalarField) -> Result<()> {
        let mut buf = Vec::new();
        f.write_csv(&mut buf)?;
        self.files.push((name.into(), buf));
        Ok(())
    }

    fn complex_csv(&mut self, name: &str, f: &ComplexField) -> Result<()> {
        let mut buf = Vec::new();
        f.write_csv(&mut buf)?;
        self.files.push((name.into(), buf));
        Ok(())
    }
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    tol: Tolerances,
    spec: &'a ImmersionSpec,
    grid: PolarGrid,
}

impl Ctx<'_> {
    fn h2(&self) -> f64 {
        self.grid.dr() * self.grid.dr()
    }

    fn start_frame(&self) -> Result<FrameField> {
        let base = euler_gram_schmidt_frame(self.spec, self.grid)?;
        let amp = self.cfg.gauge.pre_rotation;
        if amp == 0.0 {
            return Ok(base);
        }
        let rot = AnalyticRotation::random(self.spec.codimension(), self.cfg.seed, amp);
        rotate_frame(&base, &RotationField::from_analytic(&rot, self.grid))
    }

    fn gauge(&self, out: &mut Outcome) -> Result<(FrameField, GaugeResult)> {
        let start = out.timed("frame", || self.start_frame())?;
        let n = self.spec.codimension();
        let method = match self.cfg.gauge.method {
            GaugeChoice::Auto if n == 2 => GaugeChoice::Neumann,
            GaugeChoice::Auto => GaugeChoice::Descent,
            m => m,
        };
        let opts = DescentOptions { max_iter: self.cfg.gauge.max_iter, tol: self.tol.el, ..DescentOptions::default() };
        let result = out.timed("gauge", || match method {
            GaugeChoice::Neumann => coulomb_gauge_n2(self.spec, &start),
            GaugeChoice::TorsionFree => torsion_free_frame(self.spec, &start, self.tol.flat),
            _ => coulomb_gauge_general(self.spec, &start, opts),
        })?;
        let start_total = total_torsion(&torsion_coefficients(&start), self.spec);
        out.put("start_total_torsion", start_total)?;
        out.put("gauge", result.summary())?;
        out.checks.push(Check::at_most("history_monotone", result.history_max_increase(), result.history_tolerance()));
        if let Some(r) = result.discrete_el_residual {
            out.checks.push(Check::at_most("discrete_el_residual", r, self.tol.el));
        }
        Ok((start, result))
    }

    /// Curvature from exact derivatives of the base frame.
    fn curvature(&self) -> Result<NormalCurvature> {
        NormalCurvature::from_recipe(&FrameRecipe::base(self.spec.clone()), self.grid)
    }
}

pub fn execute(cfg: &RunConfig, pipeline: Pipeline, spec: &ImmersionSpec, grid: PolarGrid, out: &mut Outcome) -> Result<()> {
    let ctx = Ctx { cfg, tol: cfg.tolerances, spec, grid };
    match pipeline {
        Pipeline::Analyze => analyze(&ctx, out),
        Pipeline::Residuals => residuals(&ctx, out),
        Pipeline::Gauge => gauge(&ctx, out),
        Pipeline::Bounds => bounds(&ctx, out),
        Pipeline::Rh => rh(&ctx, out),
    }
}

fn analyze(ctx: &Ctx, out: &mut Outcome) -> Result<()> {
    let frame = out.timed("frame", || ctx.start_frame())?;
    let forms = out.timed("forms", || forms_field(ctx.spec, &frame))?;
    let check = frame.validate(ctx.spec);
    out.put(
        "frame",
        json!({
            "orthonormality": check.orthonormality,
            "tangency": check.tangency,
            "min_orientation": check.min_orientation,
            "derivatives": frame.path,
        }),
    )?;
    out.checks.push(Check::at_most("frame_orthonormality", check.orthonormality, ctx.tol.frame));
    out.checks.push(Check::at_most("frame_tangency", check.tangency, ctx.tol.frame));
    out.checks.push(Check::at_least("frame_orientation", check.min_orientation, 0.0));

    let k = ScalarField { grid: ctx.grid, values: forms.iter().map(|f| curvatures(f).k).collect() };
    let w = ScalarField { grid: ctx.grid, values: forms.iter().map(|f| f.w).collect() };
    out.put("conformality_defect", max_conformality_defect(&forms))?;
    out.put("gauss_curvature", json!({"min": min(&k.values), "max": max(&k.values)}))?;
    out.put("area", w.quadrature())?;

    let curv = out.timed("curvature", || ctx.curvature())?;
    let mag = curv.magnitude();
    out.put("normal_curvature_sup", mag.sup())?;
    out.put("normal_curvature_density_sup", curv.density().sup())?;
    let margin = curvature_inequality_margin(&forms);
    out.put("curvature_inequality_margin", margin)?;
    out.checks.push(Check::at_least("curvature_inequality_margin", margin, -ctx.tol.curvature_inequality));

    let t = torsion_coefficients(&frame);
    let el = el_residual(&t);
    out.put(
        "start_frame",
        json!({
            "total_torsion": total_torsion(&t, ctx.spec),
            "torsion_sup": t.sup(),
            "el_interior_residual": el.interior,
            "el_boundary_residual": el.boundary,
        }),
    )?;
    out.scalar_csv("gauss_curvature.csv", &k)?;
    out.scalar_csv("normal_curvature.csv", &mag)?;
    out.scalar_csv("torsion_density.csv", &torsion_density(&t, ctx.spec))
}

fn residuals(ctx: &Ctx, out: &mut Outcome) -> Result<()> {
    let frame = out.timed("frame", || ctx.start_frame())?;
    let analytic = out.timed("analytic", || integrability_residuals(ctx.spec, &frame, ResidualPath::Analytic))?;
    let fd = out.timed("finite_difference", || {
        integrability_residuals(ctx.spec, &frame, ResidualPath::FiniteDifference)
    })?;
    let table: Vec<Value> = analytic
        .entries()
        .iter()
        .map(|(name, a)| {
            let f = fd.entries().iter().find(|(m, _)| m == name).map(|e| e.1);
            json!({"identity": name, "analytic": a, "finite_difference": f})
        })
        .collect();
    out.put("residuals", table)?;
    out.put("mean_curvature_skipped", analytic.mean_curvature_skipped)?;
    for (name, a) in analytic.entries() {
        out.checks.push(Check::at_most(&format!("{name}_analytic"), a, ctx.tol.integrability));
    }
    Ok(())
}

fn gauge(ctx: &Ctx, out: &mut Outcome) -> Result<()> {
    let (_, result) = ctx.gauge(out)?;
    let s_sup = ctx.curvature()?.density().sup();
    let flat = s_sup < ctx.tol.flat;
    out.put("flat_normal_bundle", flat)?;
    if flat {
        let limit = (10.0 * ctx.h2()).max(ctx.tol.flat);
        out.checks.push(Check::at_most("flat_parallel_torsion_sup", result.torsion.sup(), limit));
    }
    out.scalar_csv("torsion_density.csv", &torsion_density(&result.torsion, ctx.spec))?;
    if let Some(a) = &result.angle {
        out.scalar_csv("gauge_angle.csv", a)?;
    }
    Ok(())
}

fn bounds(ctx: &Ctx, out: &mut Outcome) -> Result<()> {
    let (_, result) = ctx.gauge(out)?;
    let forms = out.timed("forms", || forms_field(ctx.spec, &result.frame))?;
    let conformal = max_conformality_defect(&forms) < 1e-8;
    let curv = if conformal {
        NormalCurvature::from_forms(ctx.grid, &forms)?
    } else {
        NormalCurvature::from_torsion(&result.torsion, ctx.spec)
    };
    let g = out.timed("integral_functions", || integral_functions(&result.torsion))?;
    let gr = grassmann_residuals(&g, &curv)?;
    let psi = match (curv.s_n_w(), conformal) {
        (Some(s), true) => Some(out.timed("riemann_hilbert", || riemann_hilbert_psi_within(&s, ctx.tol.rh_radius))?),
        _ => None,
    };
    let report = bounds_report(&result, &curv, &g, &forms, psi.as_ref());
    out.put("bounds", &report)?;
    out.put("grassmann", gr)?;
    out.put("integral_function_mismatch", g.mismatch)?;
    out.put("integral_function_warning", &g.warning)?;

    let slack = ctx.tol.discretization * ctx.h2();
    let t = &ctx.tol;
    out.checks.push(Check::at_least("curvature_inequality_margin", report.curvature_inequality_margin, -t.curvature_inequality));
    out.checks.push(Check::at_least("wente_margin", report.wente_upper.rhs - report.wente_upper.lhs, -slack));
    out.checks.push(Check::at_least("poincare_margin", report.poincare_upper.rhs - report.poincare_upper.lhs, -slack));
    if let Some(gt) = report.green_tau {
        out.checks.push(Check::at_least("green_tau_margin", gt.rhs - gt.lhs, -slack));
    }
    if let (Some(v), Some(_)) = (report.lower_bound.value, report.lower_bound.holds) {
        out.checks.push(Check::at_least("lower_bound_margin", report.total_torsion - v, 0.0));
        out.checks.push(Check::at_least("lower_bound_positive", v, f64::MIN_POSITIVE));
    }
    let scale = 1.0 + curv.density().sup();
    out.checks.push(Check::at_most("grassmann_pde_residual", gr.pde_residual, slack * scale));
    out.checks.push(Check::at_least("grassmann_growth_margin", gr.growth_margin, -slack * scale));
    out.scalar_csv("tau.csv", &g.magnitude())?;
    out.scalar_csv("normal_curvature_density.csv", &curv.density())
}

fn rh(ctx: &Ctx, out: &mut Outcome) -> Result<()> {
    if ctx.spec.codimension() != 2 {
        return Err(Error::Codimension("the rh pipeline needs codimension two".into()));
    }
    let (_, result) = ctx.gauge(out)?;
    let curv = ctx.curvature()?;
    let s = curv.s_n_w().expect("codimension two");
    let psi = out.timed("riemann_hilbert", || riemann_hilbert_psi_within(&s, ctx.tol.rh_radius))?;
    let from_torsion = torsion_psi(&result.torsion);
    let err = sup_error(&psi, &from_torsion);
    out.put("psi_sup", psi.values.iter().filter(|z| z.is_finite()).map(|z| z.norm()).fold(0.0, f64::max))?;
    out.put("psi_vs_torsion_sup_error", err)?;
    out.put("radius", ctx.tol.rh_radius)?;
    out.checks.push(Check::at_most("psi_vs_torsion", err, ctx.tol.rh.max(10.0 * ctx.grid.dr())));
    out.complex_csv("psi.csv", &psi)?;
    out.complex_csv("psi_torsion.csv", &from_torsion)
}

fn sup_error(a: &ComplexField, b: &ComplexField) -> f64 {
    a.values
        .iter()
        .zip(&b.values)
        .filter(|(x, _)| x.is_finite())
        .map(|(x, y): (&Complex64, &Complex64)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}
