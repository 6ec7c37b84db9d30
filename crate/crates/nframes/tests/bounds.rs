use num_complex::Complex64;
use nframes::coulomb_gauge::*;
use nframes::disc_solvers::{PolarGrid, ScalarField};
use nframes::geometry_core::{forms_field, fundamental_forms};
use nframes::normal_bundle::*;
use nframes::surface_catalog::{builtin_surface, evaluate_jet, ImmersionSpec};
use serde_json::json;

fn surf(name: &str, params: serde_json::Value) -> ImmersionSpec {
    builtin_surface(name, &params).unwrap()
}

fn w2() -> ImmersionSpec {
    surf("holomorphic_graph", json!({}))
}

fn grid(nr: usize) -> PolarGrid {
    PolarGrid::new(nr, 2 * nr).unwrap()
}

struct Setup {
    result: GaugeResult,
    curv: NormalCurvature,
    g: GrassmannField,
    forms: Vec<nframes::geometry_core::FundamentalForms>,
}

fn setup(spec: &ImmersionSpec, nr: usize) -> Setup {
    let gr = grid(nr);
    let start = euler_gram_schmidt_frame(spec, gr).unwrap();
    let result = if spec.codimension() == 2 {
        coulomb_gauge_n2(spec, &start).unwrap()
    } else {
        coulomb_gauge_general(spec, &start, DescentOptions::default()).unwrap()
    };
    let forms = forms_field(spec, &result.frame).unwrap();
    let curv = NormalCurvature::from_forms(gr, &forms).unwrap();
    let g = integral_functions(&result.torsion).unwrap();
    Setup { result, curv, g, forms }
}

fn interior_err(f: &ScalarField, exact: impl Fn(f64) -> f64) -> f64 {
    (0..f.grid.node_count())
        .map(|k| {
            let (u, v) = f.grid.point(k);
            (f.values[k] - exact(u.hypot(v))).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn integral_function_matches_closed_form() {
    let exact = |r: f64| 0.5 * ((1.0 + 4.0 * r * r) / 5.0).ln();
    let mut errs = Vec::new();
    for nr in [32, 64] {
        let s = setup(&w2(), nr);
        assert_eq!(s.g.pairs, vec![(0, 1)]);
        errs.push(interior_err(&s.g.tau[0], exact));
        assert!(s.g.tau[0].sup() <= 2.0);
    }
    assert!(errs[1] < 1e-3 && errs[0] / errs[1] > 3.0, "{errs:?}");
}

#[test]
fn integral_functions_vanish_without_torsion() {
    let g = grid(16);
    let z = integral_functions(&TorsionField::zeros(g, 3)).unwrap();
    assert_eq!(z.pairs.len(), 3);
    assert!(z.tau.iter().all(|t| t.sup() == 0.0));
    let s = setup(&surf("clifford", json!({})), 32);
    assert!(s.g.magnitude().sup() < 1e-10);
}

#[test]
fn grassmann_residuals_are_small_in_codimension_two_and_three() {
    for spec in [w2(), surf("holomorphic_graph", json!({"extra_codimension": 1}))] {
        let mut pde = Vec::new();
        for nr in [32, 64] {
            let s = setup(&spec, nr);
            let r = grassmann_residuals(&s.g, &s.curv).unwrap();
            let h2 = grid(nr).dr().powi(2);
            let scale = 1.0 + s.curv.density().sup();
            assert!(r.pde_residual <= 100.0 * h2 * scale, "n = {}: {}", spec.codimension(), r.pde_residual);
            assert!(r.growth_margin >= -100.0 * h2 * scale, "n = {}: {}", spec.codimension(), r.growth_margin);
            pde.push(r.pde_residual);
        }
        assert!(pde[1] < pde[0], "{pde:?}");
    }
}

#[test]
fn flat_extension_has_no_extra_integral_functions() {
    let s = setup(&surf("holomorphic_graph", json!({"extra_codimension": 1})), 32);
    assert_eq!(s.g.pairs, vec![(0, 1), (0, 2), (1, 2)]);
    assert!(s.g.tau[1].sup() < 1e-10 && s.g.tau[2].sup() < 1e-10);
    let base = setup(&w2(), 32);
    let d = s.g.tau[0].values.iter().zip(&base.g.tau[0].values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(d < 1e-8, "{d}");
}

#[test]
fn riemann_hilbert_solution_matches_closed_form() {
    let g = grid(64);
    let zero = riemann_hilbert_psi_within(&ScalarField::zeros(g), 0.9).unwrap();
    assert!(zero.values.iter().filter(|z| z.is_finite()).all(|z| z.norm() == 0.0));

    let s = setup(&w2(), 64);
    let psi = riemann_hilbert_psi_within(&s.curv.s_n_w().unwrap(), 0.9).unwrap();
    let mut err: f64 = 0.0;
    let mut sup: f64 = 0.0;
    for (k, z) in psi.values.iter().enumerate() {
        let (u, v) = g.point(k);
        if u.hypot(v) > 0.9 {
            assert!(z.is_nan());
            continue;
        }
        let w = Complex64::new(u, v);
        let exact = Complex64::new(0.0, 4.0) * w.conj() / (1.0 + 4.0 * w.norm_sqr());
        err = err.max((z - exact).norm());
        sup = sup.max(z.norm());
    }
    assert!(err < 2e-2, "{err}");
    // 4r/(1+4r²) peaks at r = 1/2.
    assert!((sup - 1.0).abs() < 2e-2, "{sup}");
    let t = torsion_psi(&s.result.torsion);
    let d = psi.values.iter().zip(&t.values).filter(|(a, _)| a.is_finite()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(d < 2e-2, "{d}");
}

#[test]
fn lower_bound_is_positive_and_below_total_torsion() {
    let s = setup(&w2(), 64);
    let rep = bounds_report(&s.result, &s.curv, &s.g, &s.forms, None);
    let lb = rep.lower_bound;
    assert!(lb.applicable);
    let v = lb.value.unwrap();
    let two = lb.value_codim_two.unwrap();
    assert!(v > 0.0 && (two - 2.0 * v).abs() <= 1e-12 * two, "{v} {two}");
    assert!(two <= rep.total_torsion && lb.holds == Some(true));
    assert!((rep.s_sup - 8.0).abs() < 0.1, "{}", rep.s_sup);
}

#[test]
fn upper_bounds_hold_for_holomorphic_graph() {
    let s = setup(&w2(), 64);
    let rep = bounds_report(&s.result, &s.curv, &s.g, &s.forms, None);
    let slack = 100.0 * grid(64).dr().powi(2);
    for (name, ineq) in [("wente", rep.wente_upper), ("poincare", rep.poincare_upper), ("green", rep.green_tau.unwrap())] {
        assert!(ineq.rhs - ineq.lhs >= -slack, "{name}: {ineq:?}");
    }
    // sup|τ| = ½ ln 5 against ¼ sup|S_N W| = 2.
    assert!((rep.tau_sup - 0.5 * 5f64.ln()).abs() < 1e-2);
    assert!(rep.total_torsion_upper_c_alpha_style.holds);
}

#[test]
fn bounds_are_trivial_on_clifford() {
    let s = setup(&surf("clifford", json!({})), 32);
    let rep = bounds_report(&s.result, &s.curv, &s.g, &s.forms, None);
    assert!(rep.total_torsion < 1e-8);
    assert!(rep.s_sup < 1e-10);
    assert!(!rep.lower_bound.applicable);
    // Both sides vanish, so compare up to roundoff.
    assert!(rep.wente_upper.rhs - rep.wente_upper.lhs >= -1e-12);
    assert!(rep.poincare_upper.rhs - rep.poincare_upper.lhs >= -1e-12);
}

#[test]
fn curvature_inequality_equality_at_origin_of_w2() {
    let spec = w2();
    let frame = FrameRecipe::base(spec.clone()).frame::<f64>(0.0, 0.0).unwrap();
    let forms = fundamental_forms(&evaluate_jet(&spec, (0.0, 0.0)).unwrap(), &frame).unwrap();
    let s = s_general_metric(&forms.l, &forms.g_inv);
    assert!((s[(0, 1)].abs() - 8.0).abs() < 1e-9);
    assert!(curvature_inequality_slack(&forms).abs() < 1e-9);
}

#[test]
fn curvature_inequality_holds_on_catalog() {
    let g = grid(16);
    for (name, p) in [
        ("clifford", json!({})),
        ("holomorphic_graph", json!({})),
        ("graph", json!({"heights": [[[0.3, 2, 0], [-0.2, 1, 1]], [[0.5, 0, 2]]]})),
        ("spherical", json!({})),
        ("veronese", json!({})),
        ("parallel_type", json!({"base": "spherical", "f": 0.1, "g": 0.1})),
    ] {
        let spec = surf(name, p);
        let forms = forms_field(&spec, &euler_gram_schmidt_frame(&spec, g).unwrap()).unwrap();
        assert!(curvature_inequality_margin(&forms) >= -1e-9, "{name}");
    }
}
