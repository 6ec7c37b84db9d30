use nframes::disc_solvers::PolarGrid;
use nframes::geometry_core::{christoffel, curvatures, forms_field, fundamental_forms};
use nframes::normal_bundle::{euler_gram_schmidt_frame, rotate_frame, AnalyticRotation, FrameRecipe, RotationField};
use nframes::surface_catalog::{area_element, builtin_surface, evaluate_jet, fd_jet_oracle, fd_jet_oracle_fn, ImmersionSpec};
use nframes::Error;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const S2: f64 = std::f64::consts::SQRT_2;

fn surf(name: &str) -> ImmersionSpec {
    builtin_surface(name, &json!({})).unwrap()
}

fn plane() -> ImmersionSpec {
    builtin_surface("graph", &json!({"heights": [[], []]})).unwrap()
}

fn catalog() -> Vec<ImmersionSpec> {
    vec![
        surf("clifford"),
        surf("holomorphic_graph"),
        builtin_surface("holomorphic_graph", &json!({"coeffs": [[0, 0], [0, 0], [0.5, 0.2], [0.3, -0.1]]})).unwrap(),
        builtin_surface("graph", &json!({"heights": [[[0.3, 2, 0], [-0.2, 1, 1]], [[0.5, 0, 2], [0.1, 3, 0]]]})).unwrap(),
        surf("spherical"),
        surf("veronese"),
        builtin_surface("parallel_type", &json!({"base": "clifford", "f": 0.2, "g": 0.0})).unwrap(),
        builtin_surface("parallel_type", &json!({"base": "spherical", "f": 0.1, "g": 0.1})).unwrap(),
    ]
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn forms_at(spec: &ImmersionSpec, u: f64, v: f64) -> nframes::geometry_core::FundamentalForms {
    let frame = FrameRecipe::base(spec.clone()).frame::<f64>(u, v).unwrap();
    fundamental_forms(&evaluate_jet(spec, (u, v)).unwrap(), &frame).unwrap()
}

#[test]
fn clifford_jet_at_origin() {
    let j = evaluate_jet(&surf("clifford"), (0.0, 0.0)).unwrap();
    assert!(close(&j.x, &[1.0 / S2, 0.0, 1.0 / S2, 0.0], 1e-15));
    assert!(close(&j.xu, &[0.0, 1.0 / S2, 0.0, 0.0], 1e-15));
}

#[test]
fn holomorphic_graph_jet_at_origin() {
    let j = evaluate_jet(&surf("holomorphic_graph"), (0.0, 0.0)).unwrap();
    assert!(close(&j.x, &[0.0; 4], 0.0));
    assert!(close(&j.xuu, &[0.0, 0.0, 2.0, 0.0], 1e-15));
    assert!(close(&j.xvv, &[0.0, 0.0, -2.0, 0.0], 1e-15));
    assert!(close(&j.xuv, &[0.0, 0.0, 0.0, 2.0], 1e-15));
}

#[test]
fn flat_plane_has_no_second_derivatives() {
    let j = evaluate_jet(&plane(), (0.4, -0.3)).unwrap();
    for d in [&j.xuu, &j.xuv, &j.xvv, &j.xuuu, &j.xuuv, &j.xuvv, &j.xvvv] {
        assert!(d.iter().all(|x| *x == 0.0));
    }
}

#[test]
fn jets_reject_points_outside_disc() {
    assert!(matches!(evaluate_jet(&surf("clifford"), (0.9, 0.9)), Err(Error::Domain { .. })));
}

#[test]
fn unknown_names_and_bad_params_are_rejected() {
    assert!(matches!(builtin_surface("torus", &json!({})), Err(Error::UnknownSurface(_))));
    assert!(matches!(builtin_surface("graph", &json!({"heights": "x"})), Err(Error::Param { .. })));
    assert!(matches!(builtin_surface("holomorphic_graph", &json!({"coeffs": [[1]]})), Err(Error::Param { .. })));
}

#[test]
fn conformal_claims() {
    let claims: Vec<(&str, bool)> = catalog().iter().map(|s| (s.name(), s.conformal_claim())).collect();
    assert!(claims.contains(&("clifford", true)));
    assert!(claims.contains(&("holomorphic_graph", true)));
    assert!(claims.contains(&("graph", false)));
    assert!(claims.contains(&("veronese", false)));
}

#[test]
fn fd_oracle_matches_on_examples() {
    let w2 = surf("holomorphic_graph");
    let a = evaluate_jet(&w2, (0.3, 0.2)).unwrap();
    let f = fd_jet_oracle(&w2, (0.3, 0.2), 1e-4).unwrap();
    assert!(close(&a.xuu, &f.xuu, 1e-6));
    let cl = surf("clifford");
    let a = evaluate_jet(&cl, (0.7, 0.7)).unwrap();
    let f = fd_jet_oracle(&cl, (0.7, 0.7), 1e-4).unwrap();
    assert!(close(&a.xu, &f.xu, 1e-7));
    let c = fd_jet_oracle_fn(|_, _| vec![3.0, -1.0], (0.1, 0.1), 1e-2).unwrap();
    assert!(c.fields()[1..].iter().all(|d| d.iter().all(|x| x.abs() < 1e-8)));
    assert!(fd_jet_oracle(&w2, (0.0, 0.0), 1e-11).is_err());
}

#[test]
fn fd_oracle_converges_at_second_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for spec in catalog() {
        let mut worst = f64::INFINITY;
        for _ in 0..100 {
            let r = rng.random_range(0.0..0.85f64).sqrt();
            let t = rng.random_range(0.0..std::f64::consts::TAU);
            let p = (r * t.cos(), r * t.sin());
            let exact = evaluate_jet(&spec, p).unwrap();
            let e1 = exact.max_abs_diff(&fd_jet_oracle(&spec, p, 2e-2).unwrap());
            let e2 = exact.max_abs_diff(&fd_jet_oracle(&spec, p, 1e-2).unwrap());
            if e1 > 1e-7 {
                worst = worst.min((e1 / e2).log2());
            }
        }
        assert!(worst >= 1.9, "{}: observed order {worst}", spec.name());
    }
}

#[test]
fn conformal_surfaces_have_conformal_metric_and_all_are_immersed() {
    let grid = PolarGrid::new(16, 32).unwrap();
    for spec in catalog() {
        let frame = euler_gram_schmidt_frame(&spec, grid).unwrap();
        let forms = forms_field(&spec, &frame).unwrap();
        assert!(forms.iter().all(|f| f.w > 0.0), "{}", spec.name());
        if spec.conformal_claim() {
            let d = forms.iter().map(|f| (f.g[0][0] - f.g[1][1]).abs() + f.g[0][1].abs()).fold(0.0, f64::max);
            assert!(d <= 1e-12, "{}: {d:e}", spec.name());
        }
        for f in &forms {
            let id = [
                f.g[0][0] * f.g_inv[0][0] + f.g[0][1] * f.g_inv[1][0],
                f.g[0][0] * f.g_inv[0][1] + f.g[0][1] * f.g_inv[1][1],
            ];
            assert!((id[0] - 1.0).abs() < 1e-12 && id[1].abs() < 1e-12);
            let w2 = f.g[0][0] * f.g[1][1] - f.g[0][1] * f.g[0][1];
            assert!((f.w * f.w - w2).abs() < 1e-12);
            assert!(f.l.iter().all(|l| l[0][1] == l[1][0]));
        }
    }
}

#[test]
fn fundamental_forms_examples() {
    let f = forms_at(&surf("clifford"), 0.3, -0.2);
    assert!((f.g[0][0] - 0.5).abs() < 1e-15 && (f.g[1][1] - 0.5).abs() < 1e-15 && f.g[0][1].abs() < 1e-15);
    assert!((f.w - 0.5).abs() < 1e-15);

    let f = forms_at(&plane(), 0.2, 0.1);
    assert_eq!(f.g, [[1.0, 0.0], [0.0, 1.0]]);
    assert!(f.l.iter().flatten().flatten().all(|x| *x == 0.0));

    let f = forms_at(&surf("holomorphic_graph"), 0.0, 0.0);
    assert!((f.w - 1.0).abs() < 1e-15);
    assert!(close(&f.l[0].concat(), &[2.0, 0.0, 0.0, -2.0], 1e-14));
    assert!(close(&f.l[1].concat(), &[0.0, 2.0, 2.0, 0.0], 1e-14));
}

#[test]
fn christoffel_examples() {
    let g = christoffel(&evaluate_jet(&surf("clifford"), (0.4, 0.1)).unwrap()).unwrap();
    assert!(g.gamma.iter().flatten().flatten().all(|x| x.abs() < 1e-15));
    let g = christoffel(&evaluate_jet(&plane(), (0.4, 0.1)).unwrap()).unwrap();
    assert!(g.gamma.iter().flatten().flatten().all(|x| *x == 0.0));
    let g = christoffel(&evaluate_jet(&surf("holomorphic_graph"), (0.5, 0.0)).unwrap()).unwrap();
    assert!((g.gamma[0][0][0] - 1.0).abs() < 1e-14);
    for spec in catalog() {
        let g = christoffel(&evaluate_jet(&spec, (0.2, -0.3)).unwrap()).unwrap();
        for k in 0..2 {
            assert_eq!(g.gamma[k][0][1], g.gamma[k][1][0]);
        }
    }
}

#[test]
fn curvature_examples() {
    let c = curvatures(&forms_at(&surf("clifford"), 0.1, 0.2));
    let expect_k: [f64; 2] = [1.0, -1.0];
    let expect_h: [f64; 2] = [-1.0, 0.0];
    // The catalog frame may list the normals in either order; compare as sets of pairs.
    let pairs: Vec<(f64, f64)> = c.k_sigma.iter().zip(&c.h_sigma).map(|(k, h)| (*k, *h)).collect();
    for (k, h) in expect_k.iter().zip(&expect_h) {
        assert!(pairs.iter().any(|(a, b)| (a - k).abs() < 1e-12 && (b.abs() - h.abs()).abs() < 1e-12), "{pairs:?}");
    }
    assert!(c.k.abs() < 1e-12);

    let c = curvatures(&forms_at(&surf("holomorphic_graph"), 0.0, 0.0));
    assert!(close(&c.k_sigma, &[-4.0, -4.0], 1e-12));
    assert!(close(&c.h_sigma, &[0.0, 0.0], 1e-12));
    assert!((c.r2112 - c.k).abs() < 1e-12);

    let c = curvatures(&forms_at(&plane(), 0.3, 0.3));
    assert!(c.k == 0.0 && c.h_squared() == 0.0);
}

#[test]
fn gaussian_curvature_and_mean_curvature_norm_are_frame_invariant() {
    let grid = PolarGrid::new(8, 16).unwrap();
    for spec in [surf("holomorphic_graph"), surf("veronese"), surf("holomorphic_graph").with_extra(1)] {
        let n = spec.codimension();
        let base = euler_gram_schmidt_frame(&spec, grid).unwrap();
        let rot = RotationField::from_analytic(&AnalyticRotation::random(n, 9, 0.8), grid);
        let turned = rotate_frame(&base, &rot).unwrap();
        let a = forms_field(&spec, &base).unwrap();
        let b = forms_field(&spec, &turned).unwrap();
        for (fa, fb) in a.iter().zip(&b) {
            let (ca, cb) = (curvatures(fa), curvatures(fb));
            assert!((ca.k - cb.k).abs() < 1e-10);
            assert!((ca.h_squared() - cb.h_squared()).abs() < 1e-10);
        }
    }
}

#[test]
fn maximum_principle_for_small_mean_curvature() {
    let grid = PolarGrid::new(32, 64).unwrap();
    for spec in catalog().into_iter().filter(|s| s.conformal_claim()) {
        let frame = euler_gram_schmidt_frame(&spec, grid).unwrap();
        let forms = forms_field(&spec, &frame).unwrap();
        if forms.iter().any(|f| curvatures(f).h_squared() > 1.0) {
            continue;
        }
        let x2: Vec<f64> = grid.points().iter().map(|&(u, v)| spec.position(u, v).iter().map(|x| x * x).sum()).collect();
        let interior = x2[..grid.interior_count()].iter().copied().fold(f64::MIN, f64::max);
        let boundary = x2[grid.interior_count()..].iter().copied().fold(f64::MIN, f64::max);
        assert!(interior <= boundary + 1e-9, "{}", spec.name());
    }
}

#[test]
fn area_element_of_holomorphic_graph() {
    let spec = surf("holomorphic_graph");
    assert!((area_element(&spec, 0.5, 0.0) - 2.0).abs() < 1e-14);
}
