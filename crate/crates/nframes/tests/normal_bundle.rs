use nalgebra::DMatrix;
use nframes::disc_solvers::PolarGrid;
use nframes::normal_bundle::*;
use nframes::surface_catalog::{builtin_surface, ImmersionSpec, Poly2};
use nframes::Error;
use proptest::prelude::*;
use serde_json::json;

fn surf(name: &str) -> ImmersionSpec {
    builtin_surface(name, &json!({})).unwrap()
}

fn plane() -> ImmersionSpec {
    builtin_surface("graph", &json!({"heights": [[], []]})).unwrap()
}

fn uv() -> SmoothFn {
    SmoothFn::monomial(1.0, 1, 1)
}

fn max_diff(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).amax()).fold(0.0, f64::max)
}

#[test]
fn wedge_examples() {
    assert_eq!(wedge(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
    assert_eq!(wedge(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap(), vec![-3.0, -6.0, -3.0]);
    assert!(wedge(&[0.3, -1.2, 2.0, 0.5], &[0.3, -1.2, 2.0, 0.5]).unwrap().iter().all(|x| *x == 0.0));
    assert!(wedge(&[1.0, 2.0], &[1.0, 2.0, 3.0]).is_err());
    assert_eq!(wedge(&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]).unwrap().len(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn lagrange_identity(m in 2usize..7, seed in proptest::collection::vec(-10.0f64..10.0, 12)) {
        let (x, y) = (&seed[..m], &seed[6..6 + m]);
        let w = wedge(x, y).unwrap();
        let lhs: f64 = w.iter().map(|c| c * c).sum();
        let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        let nx: f64 = x.iter().map(|a| a * a).sum();
        let ny: f64 = y.iter().map(|a| a * a).sum();
        let rhs = nx * ny - dot * dot;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + nx * ny));
    }
}

#[test]
fn euler_frame_of_holomorphic_graph() {
    let recipe = FrameRecipe::base(surf("holomorphic_graph"));
    for &(u, v) in &[(0.0, 0.0), (0.3, -0.4), (-0.7, 0.2)] {
        let w: f64 = 1.0 + 4.0 * (u * u + v * v);
        let f = recipe.frame::<f64>(u, v).unwrap();
        let n1 = [-2.0 * u, 2.0 * v, 1.0, 0.0].map(|c| c / w.sqrt());
        let n2 = [-2.0 * v, -2.0 * u, 0.0, 1.0].map(|c| c / w.sqrt());
        for c in 0..4 {
            assert!((f[0][c] - n1[c]).abs() < 1e-14 && (f[1][c] - n2[c]).abs() < 1e-14);
        }
    }
}

#[test]
fn flat_plane_frame_is_constant() {
    let f = FrameRecipe::base(plane()).frame::<f64>(0.4, 0.1).unwrap();
    assert_eq!(f, vec![vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]]);
}

#[test]
fn catalog_frames_are_valid() {
    let grid = PolarGrid::new(16, 32).unwrap();
    for name in ["clifford", "holomorphic_graph", "spherical", "veronese", "parallel_type"] {
        let spec = surf(name);
        let c = euler_gram_schmidt_frame(&spec, grid).unwrap().validate(&spec);
        assert!(c.orthonormality < 1e-10 && c.tangency < 1e-10 && c.min_orientation > 0.0, "{name}: {c:?}");
    }
}

#[test]
fn torsion_examples() {
    let grid = PolarGrid::new(16, 32).unwrap();
    let t = torsion_coefficients(&euler_gram_schmidt_frame(&surf("clifford"), grid).unwrap());
    assert!(t.sup() < 1e-15);
    let [t1, t2] = FrameRecipe::base(surf("holomorphic_graph")).torsion::<f64>(0.0, 0.5).unwrap();
    assert!((t1[0][1] - 1.0).abs() < 1e-14 && t2[0][1].abs() < 1e-14);
    let t = torsion_coefficients(&euler_gram_schmidt_frame(&surf("veronese"), grid).unwrap());
    for m in t.t1.iter().chain(&t.t2) {
        assert!((m + m.transpose()).amax() == 0.0);
        assert!((0..3).all(|s| m[(s, s)] == 0.0));
    }
}

#[test]
fn rotation_fields_are_special_orthogonal() {
    let grid = PolarGrid::new(8, 16).unwrap();
    for n in 2..=4 {
        let r = RotationField::from_analytic(&AnalyticRotation::random(n, 4, 1.5), grid);
        for m in &r.r {
            assert!((m * m.transpose() - DMatrix::identity(n, n)).amax() < 1e-12);
            assert!((m.determinant() - 1.0).abs() < 1e-10);
        }
    }
    let bad = vec![DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]); grid.node_count()];
    assert!(matches!(RotationField::from_nodal(grid, bad), Err(Error::Gauge(_))));
}

#[test]
fn rotate_frame_examples() {
    let grid = PolarGrid::new(16, 32).unwrap();
    let spec = surf("holomorphic_graph");
    let base = euler_gram_schmidt_frame(&spec, grid).unwrap();
    let t0 = torsion_coefficients(&base);

    let same = rotate_frame(&base, &RotationField::identity(grid, 2)).unwrap();
    assert!(max_diff(&same.frames, &base.frames) == 0.0);

    let constant = AnalyticRotation::angle(SmoothFn::monomial(0.7, 0, 0));
    let t = torsion_coefficients(&rotate_frame(&base, &RotationField::from_analytic(&constant, grid)).unwrap());
    assert!(max_diff(&t.t1, &t0.t1) < 1e-14 && max_diff(&t.t2, &t0.t2) < 1e-14);

    let turned = rotate_frame(&base, &RotationField::from_analytic(&AnalyticRotation::angle(uv()), grid)).unwrap();
    assert!(turned.validate(&spec).min_orientation > 0.0);
    let t = torsion_coefficients(&turned);
    for (kk, (u, v)) in grid.points().into_iter().enumerate() {
        assert!((t.t1[kk][(0, 1)] - t0.t1[kk][(0, 1)] - v).abs() < 1e-13);
        assert!((t.t2[kk][(0, 1)] - t0.t2[kk][(0, 1)] - u).abs() < 1e-13);
    }
    assert!(rotate_frame(&base, &RotationField::identity(grid, 3)).is_err());
}

#[test]
fn transform_torsions_examples() {
    let grid = PolarGrid::new(8, 16).unwrap();
    let spec = surf("veronese");
    let base = euler_gram_schmidt_frame(&spec, grid).unwrap();
    let t0 = torsion_coefficients(&base);
    let a = AnalyticRotation::new(3, vec![SmoothFn::monomial(0.4, 0, 0), SmoothFn::monomial(-0.9, 0, 0), SmoothFn::monomial(0.2, 0, 0)]).unwrap();
    let rot = RotationField::from_analytic(&a, grid);
    let t = transform_torsions(&t0, &rot).unwrap();
    for kk in 0..grid.node_count() {
        let r = &rot.r[kk];
        assert!((&t.t1[kk] - r * &t0.t1[kk] * r.transpose()).amax() < 1e-14);
    }
    let zero = transform_torsions(&TorsionField::zeros(grid, 3), &rot).unwrap();
    assert!(zero.sup() < 1e-15);

    let angle = AnalyticRotation::angle(SmoothFn::Poly(Poly2 { terms: vec![(0.5, 2, 0), (-0.3, 1, 2)] }));
    let base2 = euler_gram_schmidt_frame(&surf("holomorphic_graph"), grid).unwrap();
    let t0 = torsion_coefficients(&base2);
    let t = transform_torsions(&t0, &RotationField::from_analytic(&angle, grid)).unwrap();
    for (kk, (u, v)) in grid.points().into_iter().enumerate() {
        let (pu, pv) = (u - 0.3 * v * v, -0.6 * u * v);
        assert!((t.t1[kk][(0, 1)] - t0.t1[kk][(0, 1)] - pu).abs() < 1e-13);
        assert!((t.t2[kk][(0, 1)] - t0.t2[kk][(0, 1)] - pv).abs() < 1e-13);
    }
}

#[test]
fn normal_curvature_examples() {
    let grid = PolarGrid::new(16, 32).unwrap();
    let c = NormalCurvature::from_recipe(&FrameRecipe::base(surf("holomorphic_graph")), grid).unwrap();
    let s = c.s_n_w().unwrap();
    assert!((s.origin_value() - 8.0).abs() < 0.1);
    for (kk, (u, v)) in grid.points().into_iter().enumerate() {
        let w = 1.0 + 4.0 * (u * u + v * v);
        assert!((s.values[kk] - 8.0 / (w * w)).abs() < 1e-12);
        assert!((c.s_n().unwrap().values[kk] - 8.0 / (w * w * w)).abs() < 1e-12);
    }
    for spec in [surf("clifford"), plane()] {
        let c = NormalCurvature::from_recipe(&FrameRecipe::base(spec.clone()), grid).unwrap();
        assert!(c.sup_abs() < 1e-14);
        let forms = nframes::geometry_core::forms_field(&spec, &euler_gram_schmidt_frame(&spec, grid).unwrap()).unwrap();
        assert!(NormalCurvature::from_forms(grid, &forms).unwrap().sup_abs() < 1e-14);
    }
    let v = surf("veronese");
    let forms = nframes::geometry_core::forms_field(&v, &euler_gram_schmidt_frame(&v, grid).unwrap()).unwrap();
    assert!(matches!(NormalCurvature::from_forms(grid, &forms), Err(Error::NonConformal { .. })));
}

fn invariance_cases(n: usize) -> ImmersionSpec {
    match n {
        2 => surf("holomorphic_graph"),
        _ => surf("veronese"),
    }
}

#[test]
fn curvature_vector_magnitude_is_gauge_invariant() {
    let grid = PolarGrid::new(8, 16).unwrap();
    for n in [2, 3] {
        let recipe = FrameRecipe::base(invariance_cases(n));
        let base = NormalCurvature::from_recipe(&recipe, grid).unwrap();
        for seed in 0..20 {
            let rot = AnalyticRotation::random(n, seed, 0.8);
            let turned = NormalCurvature::from_recipe(&recipe.rotated(rot.clone()), grid).unwrap();
            let diff = base
                .magnitude()
                .values
                .iter()
                .zip(&turned.magnitude().values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(diff < 1e-6, "n = {n}, seed {seed}: {diff:e}");
            let r = RotationField::from_analytic(&rot, grid);
            for kk in 0..grid.node_count() {
                let conj = &r.r[kk] * &base.s12[kk] * r.r[kk].transpose();
                assert!((&turned.s12[kk] - conj).amax() < 1e-9, "conjugation law, n = {n}");
            }
        }
    }
}

#[test]
fn plane_rotations_preserve_sectional_curvature() {
    let grid = PolarGrid::new(8, 16).unwrap();
    let recipe = FrameRecipe::base(surf("veronese"));
    let base = NormalCurvature::from_recipe(&recipe, grid).unwrap();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let rot = AnalyticRotation::plane(3, a, b, SmoothFn::monomial(1.3, 1, 1));
        let turned = NormalCurvature::from_recipe(&recipe.rotated(rot), grid).unwrap();
        for kk in 0..grid.node_count() {
            assert!((turned.s12[kk][(a, b)].abs() - base.s12[kk][(a, b)].abs()).abs() < 1e-10);
        }
    }
}

#[test]
fn transformation_law_matches_rotated_frame() {
    for n in [2, 3] {
        let spec = invariance_cases(n);
        let mut errs = Vec::new();
        for nr in [16, 32] {
            let grid = PolarGrid::new(nr, 2 * nr).unwrap();
            let base = euler_gram_schmidt_frame(&spec, grid).unwrap();
            let rot = AnalyticRotation::random(n, 21, 0.7);
            let analytic = RotationField::from_analytic(&rot, grid);
            let direct = torsion_coefficients(&rotate_frame(&base, &analytic).unwrap());
            let law = transform_torsions(&torsion_coefficients(&base), &analytic).unwrap();
            assert!(max_diff(&direct.t1, &law.t1) < 1e-12 && max_diff(&direct.t2, &law.t2) < 1e-12);
            let fd = RotationField::from_nodal(grid, analytic.r.clone()).unwrap();
            let law_fd = transform_torsions(&torsion_coefficients(&base), &fd).unwrap();
            errs.push(max_diff(&direct.t1, &law_fd.t1).max(max_diff(&direct.t2, &law_fd.t2)));
        }
        assert!(errs[0] / errs[1] > 3.0, "n = {n}: {errs:?}");
    }
}
