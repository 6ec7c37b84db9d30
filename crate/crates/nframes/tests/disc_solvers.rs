use num_complex::Complex64;
use nframes::disc_solvers::*;
use nframes::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn grid(nr: usize) -> PolarGrid {
    PolarGrid::new(nr, 2 * nr).unwrap()
}

fn radial(g: PolarGrid, f: impl Fn(f64) -> f64) -> ScalarField {
    ScalarField::from_fn(g, |u, v| f(u.hypot(v)))
}

fn interior_err(a: &ScalarField, f: impl Fn(f64, f64) -> f64) -> f64 {
    (0..a.grid.interior_count())
        .map(|k| {
            let (u, v) = a.grid.point(k);
            (a.values[k] - f(u, v)).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn grid_layout() {
    let g = PolarGrid::new(16, 32).unwrap();
    assert_eq!(g.node_count(), 16 * 32 + 32);
    assert!((g.radius(0) - 0.5 / 16.0).abs() < 1e-15);
    assert_eq!(g.radius(16), 1.0);
    assert!(PolarGrid::new(16, 31).is_err());
    assert!(PolarGrid::new(4, 32).is_err());
}

#[test]
fn quadrature_examples() {
    let g = grid(128);
    assert!((ScalarField::from_fn(g, |_, _| 1.0).quadrature() - std::f64::consts::PI).abs() < 1e-3);
    assert!((ScalarField::from_fn(g, |u, v| u * u + v * v).quadrature() - std::f64::consts::FRAC_PI_2).abs() < 1e-3);
    let s = radial(g, |r| 8.0 / (1.0 + 4.0 * r * r).powi(2));
    assert!((s.quadrature() - 8.0 * std::f64::consts::PI / 5.0).abs() < 1e-3);
}

#[test]
fn laplacian_examples() {
    let mut errs = Vec::new();
    for nr in [16, 32] {
        let g = grid(nr);
        let a = laplacian_apply(&radial(g, |r| r * r - 1.0));
        let b = laplacian_apply(&ScalarField::from_fn(g, |u, _| u));
        let c = laplacian_apply(&ScalarField::from_fn(g, |_, _| 3.5));
        assert!(c.interior_sup() < 1e-10);
        errs.push((interior_err(&a, |_, _| 4.0), b.interior_sup()));
    }
    assert!(errs[1].0 < 1e-2 && errs[1].1 < 1e-2, "{errs:?}");
    assert!(errs[0].0 <= 4.0 * errs[1].0 + 1e-12 || errs[1].0 < 1e-12, "{errs:?}");
}

#[test]
fn neumann_examples() {
    let g = grid(32);
    let zero = ScalarField::zeros(g);
    let (phi, stats) = solve_neumann(&zero, &zero, DEFAULT_TOL).unwrap();
    assert!(phi.sup() == 0.0);
    assert_eq!(stats.constraint, Constraint::MeanZero);

    let one = ScalarField::from_fn(g, |_, _| 1.0);
    match solve_neumann(&one, &zero, DEFAULT_TOL) {
        Err(Error::Compatibility { defect, .. }) => assert!((defect - std::f64::consts::PI).abs() < 1e-10),
        other => panic!("expected a compatibility error, got {other:?}"),
    }
    assert!(solve_neumann(&zero, &zero, 0.0).is_err());

    let mut errs = Vec::new();
    for nr in [16, 32, 64] {
        let g = grid(nr);
        let gb = ScalarField::from_fn(g, |u, v| u / u.hypot(v));
        let (phi, stats) = solve_neumann(&ScalarField::zeros(g), &gb, DEFAULT_TOL).unwrap();
        assert!(stats.relative_residual <= DEFAULT_TOL);
        assert!(phi.quadrature().abs() < 1e-12);
        errs.push(interior_err(&phi, |u, _| u));
    }
    assert!(errs[2] < 1e-3, "{errs:?}");
    assert!(errs[0] / errs[1] > 3.5 && errs[1] / errs[2] > 3.5, "{errs:?}");
}

#[test]
fn neumann_solution_and_flux_for_cubic_harmonic() {
    let mut errs = Vec::new();
    for nr in [16, 32, 64] {
        let g = grid(nr);
        // φ = u³ - 3uv², harmonic, ∂ν φ = 3 cos 3θ, zero mean.
        let gb = ScalarField::from_fn(g, |u, v| 3.0 * (3.0 * v.atan2(u)).cos());
        let (phi, _) = solve_neumann(&ScalarField::zeros(g), &gb, DEFAULT_TOL).unwrap();
        let dn = laplace::boundary_normal_derivative(&phi);
        let flux = dn.iter().zip(&gb.values[g.interior_count()..]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(flux < 1e-10);
        errs.push(interior_err(&phi, |u, v| u * u * u - 3.0 * u * v * v));
    }
    assert!(errs[0] / errs[1] > 3.5 && errs[1] / errs[2] > 3.5, "{errs:?}");
}

#[test]
fn dirichlet_examples() {
    // The scheme reproduces quadratics, so r² - 1 comes out at solver tolerance.
    let (phi, stats) = solve_dirichlet_zero(&ScalarField::from_fn(grid(32), |_, _| 4.0), DEFAULT_TOL).unwrap();
    assert_eq!(stats.constraint, Constraint::None);
    assert!(interior_err(&phi, |u, v| u * u + v * v - 1.0) < 1e-8);
    let mut errs = Vec::new();
    for nr in [16, 32, 64] {
        let g = grid(nr);
        // φ = e^u (r² - 1), Δφ = e^u (r² + 4u + 3).
        let f = ScalarField::from_fn(g, |u, v| u.exp() * (u * u + v * v + 4.0 * u + 3.0));
        let (phi, _) = solve_dirichlet_zero(&f, DEFAULT_TOL).unwrap();
        errs.push(interior_err(&phi, |u, v| u.exp() * (u * u + v * v - 1.0)));
    }
    assert!(errs[0] / errs[1] > 3.5 && errs[1] / errs[2] > 3.5, "{errs:?}");
    let (phi, _) = solve_dirichlet_zero(&ScalarField::zeros(grid(16)), DEFAULT_TOL).unwrap();
    assert!(phi.sup() == 0.0);

    let g = grid(128);
    let s = radial(g, |r| 8.0 / (1.0 + 4.0 * r * r).powi(2));
    let (tau, _) = solve_dirichlet_zero(&s, DEFAULT_TOL).unwrap();
    assert!((tau.origin_value() + 0.5 * 5f64.ln()).abs() < 1e-3, "{}", tau.origin_value());
}

#[test]
fn dirichlet_then_laplacian_recovers_source() {
    let mut errs = Vec::new();
    for nr in [16, 32, 64] {
        let g = grid(nr);
        let f = ScalarField::from_fn(g, |u, v| (2.0 * u).sin() * (1.0 + v * v) + u * v);
        let (phi, _) = solve_dirichlet_zero(&f, 1e-12).unwrap();
        let back = laplacian_apply(&phi);
        let n = g.interior_count();
        let diff: Vec<f64> = (0..g.node_count()).map(|k| if k < n { back.values[k] - f.values[k] } else { 0.0 }).collect();
        errs.push(quadrature(&g, &diff.iter().map(|x| x * x).collect::<Vec<_>>()).sqrt() / f.l2_norm());
    }
    // The nodal Laplacian is the operator the solver inverts, so the round trip is exact up to the solver tolerance.
    assert!(errs.iter().all(|e| *e < 1e-9), "{errs:?}");
}

#[test]
fn green_kernel_integral_matches_closed_form() {
    let g = grid(64);
    let pts = [
        c(0.0, 0.0),
        c(0.3, 0.0),
        c(0.6, 0.0),
        c(0.9, 0.0),
        c(0.0, 0.45),
        c(-0.2, -0.5),
        c(0.1, 0.7),
        c(-0.55, 0.55),
        c(0.33, -0.12),
        c(-0.8, 0.1),
    ];
    for w in pts {
        let exact = (1.0 - w.norm_sqr()) / 4.0;
        let got = green_kernel_abs_integral(&g, w);
        assert!((got - exact).abs() < 1e-3, "w = {w}: {got} vs {exact}");
    }
    assert!(green_kernel_abs_integral(&g, c(0.6, 0.8)).abs() < 1e-3);
}

#[test]
fn cauchy_t_examples() {
    let g = grid(64);
    assert!(cauchy_t(&ComplexField::zeros(g), c(0.2, 0.1)).unwrap().norm() == 0.0);
    let one = ComplexField::from_fn(g, |_| c(1.0, 0.0));
    assert!((cauchy_t(&one, c(0.3, 0.0)).unwrap() - c(0.3, 0.0)).norm() < 1e-2);
    assert!((cauchy_t(&one, c(0.0, 0.3)).unwrap() - c(0.0, -0.3)).norm() < 1e-2);
    assert!(matches!(cauchy_t(&one, c(0.999, 0.0)), Err(Error::Domain { .. })));
}

#[test]
fn cauchy_t_is_a_right_inverse_of_d_wbar() {
    let g = grid(64);
    let f = |z: Complex64| c(1.0 + 0.5 * z.re, 0.3 * z.im * z.im);
    let op = CauchyIntegrator::new(&ComplexField::from_fn(g, f));
    let d = 0.05;
    for &w in &[c(0.0, 0.0), c(0.3, 0.1), c(-0.2, 0.4), c(0.1, -0.5)] {
        let du = (op.t(w + d).unwrap() - op.t(w - d).unwrap()) / (2.0 * d);
        let dv = (op.t(w + c(0.0, d)).unwrap() - op.t(w - c(0.0, d)).unwrap()) / (2.0 * d);
        let dwbar = (du + c(0.0, 1.0) * dv) * 0.5;
        assert!((dwbar - f(w)).norm() <= 0.05 * f(w).norm(), "w = {w}: {dwbar} vs {}", f(w));
    }
}

#[test]
fn cauchy_p_examples() {
    let g = grid(64);
    assert!(cauchy_p(&ComplexField::zeros(g), c(0.4, 0.0)).unwrap().norm() == 0.0);
    let f = ComplexField::from_fn(g, |z| c(0.0, 4.0 / (1.0 + 4.0 * z.norm_sqr()).powi(2)));
    assert!((cauchy_p(&f, c(0.5, 0.0)).unwrap() - c(0.0, 1.0)).norm() < 2e-2);
}

#[test]
fn riemann_hilbert_boundary_condition_needs_imaginary_data() {
    let g = grid(64);
    let edge = 1.0 - g.dr();
    let boundary_re = |f: &ComplexField| -> f64 {
        let op = CauchyIntegrator::new(f);
        (0..16)
            .map(|j| {
                let w = Complex64::from_polar(edge, j as f64 * std::f64::consts::TAU / 16.0);
                (w * op.p(w).unwrap()).re.abs()
            })
            .fold(0.0, f64::max)
    };
    let imaginary = ComplexField::from_fn(g, |z| c(0.0, 1.0 + z.re * z.re));
    let real = ComplexField::from_fn(g, |_| c(1.0, 0.0));
    assert!(boundary_re(&imaginary) < 0.05);
    assert!(boundary_re(&real) > 0.5);
}

#[test]
fn csv_has_full_precision() {
    let g = PolarGrid::new(8, 16).unwrap();
    let f = ScalarField::from_fn(g, |u, v| u + std::f64::consts::PI * v);
    let mut buf = Vec::new();
    f.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,theta,u,v,value"));
    for (k, line) in lines.enumerate() {
        let cols: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(cols.len(), 5);
        assert_eq!(cols[4], f.values[k]);
    }
}
