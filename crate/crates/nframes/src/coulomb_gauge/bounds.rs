use serde::Serialize;

use super::grassmann::GrassmannField;
use super::GaugeResult;
use crate::disc_solvers::fd::gradient;
use crate::disc_solvers::{quadrature, ComplexField, PolarGrid};
use crate::geometry_core::{curvatures, FundamentalForms};
use crate::normal_bundle::{s_general_metric, NormalCurvature};

/// Both sides of an inequality `lhs ≤ rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Inequality {
    fn new(lhs: f64, rhs: f64) -> Self {
        Inequality { lhs, rhs, holds: lhs <= rhs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowerBound {
    /// False when `𝒮 ≡ 0` or `∇𝒮 ≡ 0` on the grid.
    pub applicable: bool,
    pub rho: Option<f64>,
    /// General-codimension form with `√(n-2) ‖𝒮‖_∞` in the denominator.
    pub value: Option<f64>,
    /// Codimension-two form, twice the general one when `n = 2`.
    pub value_codim_two: Option<f64>,
    pub total_torsion: f64,
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CpEntry {
    pub p: String,
    pub psi_sup: f64,
    pub s_norm: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub total_torsion: f64,
    /// `sup |T_{σ,i}^ϑ|`.
    pub torsion_sup: f64,
    /// `‖𝒯‖_∞` of the integral functions.
    pub tau_sup: f64,
    pub grad_tau_l2_squared: f64,
    pub s_sup: f64,
    pub s_l1: f64,
    pub s_l2: f64,
    pub grad_s_l2: f64,
    /// `sup |τ| ≤ ¼ sup |S_N W|`, codimension two only.
    pub green_tau: Option<Inequality>,
    pub wente_upper: Inequality,
    pub poincare_upper: Inequality,
    /// Left side of the smallness condition; the condition asks for `< 1`.
    pub smallness_value: f64,
    pub smallness_satisfied: bool,
    pub total_torsion_upper_c_alpha_style: Inequality,
    /// Present when `‖𝒯‖_∞ ≤ 2 / √(n-2)`.
    pub small_solution_upper: Option<Inequality>,
    pub lower_bound: LowerBound,
    pub curvature_inequality_margin: f64,
    pub c_p_table: Vec<CpEntry>,
}

/// `(2H_σ² - K_σ)W + (2H_ω² - K_ω)W - |S_{σ,12}^ω|`, minimized over pairs.
pub fn curvature_inequality_slack(forms: &FundamentalForms) -> f64 {
    let c = curvatures(forms);
    let s = s_general_metric(&forms.l, &forms.g_inv);
    let n = forms.l.len();
    let side = |a: usize| (2.0 * c.h_sigma[a] * c.h_sigma[a] - c.k_sigma[a]) * forms.w;
    let mut m = f64::INFINITY;
    for a in 0..n {
        for b in a + 1..n {
            m = m.min(side(a) + side(b) - s[(a, b)].abs());
        }
    }
    m
}

pub fn curvature_inequality_margin(forms: &[FundamentalForms]) -> f64 {
    forms.iter().map(curvature_inequality_slack).fold(f64::INFINITY, f64::min)
}

fn masked_l2_squared(grid: &PolarGrid, dens: &[f64], rho: f64) -> f64 {
    let vals: Vec<f64> = (0..grid.node_count())
        .map(|k| if grid.radius(grid.ring(k).0) < rho { dens[k] } else { 0.0 })
        .collect();
    quadrature(grid, &vals)
}

/// Lower bound of the total torsion from `‖𝒮‖`, `‖∇𝒮‖` and `‖𝒮‖_{L²(B_ρ)}`, with
/// `ρ` the smallest of `0.1, …, 0.9` capturing half of `‖𝒮‖_{L²(B)}`.
pub fn lower_bound(
    grid: &PolarGrid,
    n: usize,
    s_dens: &[f64],
    s_sup: f64,
    grad_s2: f64,
    total: f64,
) -> LowerBound {
    let s2 = quadrature(grid, s_dens);
    let none = LowerBound {
        applicable: false,
        rho: None,
        value: None,
        value_codim_two: None,
        total_torsion: total,
        holds: None,
    };
    if !(s2 > 1e-24) || !(grad_s2 > 1e-24) {
        return none;
    }
    let rho = (1..=9)
        .map(|i| i as f64 / 10.0)
        .find(|&r| masked_l2_squared(grid, s_dens, r).sqrt() >= 0.5 * s2.sqrt());
    let Some(rho) = rho else { return none };
    let sr2 = masked_l2_squared(grid, s_dens, rho);
    let q = (1.0 - rho).powi(2) * sr2;
    let general =
        sr2 / (((n as f64) - 2.0).sqrt() * s_sup + s2 / q + 2.0 * grad_s2 / sr2);
    let two = (n == 2).then(|| sr2 / (s2 / (2.0 * q) + grad_s2 / sr2));
    let best = two.unwrap_or(general).max(general);
    LowerBound {
        applicable: true,
        rho: Some(rho),
        value: Some(general),
        value_codim_two: two,
        total_torsion: total,
        holds: Some(best <= total),
    }
}

/// Evaluates the upper and lower bounds of the total torsion with measured norms.
pub fn bounds_report(
    result: &GaugeResult,
    curv: &NormalCurvature,
    g: &GrassmannField,
    forms: &[FundamentalForms],
    psi: Option<&ComplexField>,
) -> BoundsReport {
    let grid = curv.grid;
    let n = curv.n;
    let pairs: Vec<(usize, usize)> = g.pairs.clone();
    let s_field = |p: (usize, usize)| -> Vec<f64> { curv.s12.iter().map(|m| m[p]).collect() };
    let s_comp: Vec<Vec<f64>> = pairs.iter().map(|&p| s_field(p)).collect();
    let s_dens: Vec<f64> = (0..grid.node_count()).map(|k| s_comp.iter().map(|c| c[k] * c[k]).sum()).collect();
    let s_abs: Vec<f64> = s_dens.iter().map(|x| x.sqrt()).collect();
    let s_sup = s_abs[..grid.interior_count()].iter().copied().fold(0.0, f64::max);
    let s_l1 = quadrature(&grid, &s_abs);
    let s_l2 = quadrature(&grid, &s_dens).sqrt();
    let mut grad_dens = vec![0.0; grid.node_count()];
    for c in &s_comp {
        let (gu, gv) = gradient(&grid, c);
        for k in 0..grid.node_count() {
            grad_dens[k] += gu[k] * gu[k] + gv[k] * gv[k];
        }
    }
    let grad_s2 = quadrature(&grid, &grad_dens);
    let tau_sup = g.magnitude().sup();
    let grad_tau2 = g.grad_l2_squared();
    let total = result.total_torsion;
    let torsion_sup = result.torsion.sup();
    let nf = n as f64;
    let wente = Inequality::new(tau_sup, (nf - 2.0) / (2.0 * std::f64::consts::PI) * grad_tau2 + nf * (nf - 1.0) / 8.0 * s_sup);
    let poincare = Inequality::new(tau_sup, (nf - 2.0) / (2.0 * std::f64::consts::PI) * grad_tau2 + 2f64.sqrt() * s_sup);
    let c_n = (nf * (nf - 1.0) / 8.0).min(2f64.sqrt());
    let smallness = (nf - 2.0).sqrt() / 2.0 * ((nf - 2.0) / (4.0 * std::f64::consts::PI) * total + c_n * s_sup);
    let mut c_alpha = 0.0;
    for &(s, t) in &pairs {
        let m1 = result.torsion.t1.iter().map(|m| m[(s, t)].abs()).fold(0.0, f64::max);
        let m2 = result.torsion.t2.iter().map(|m| m[(s, t)].abs()).fold(0.0, f64::max);
        c_alpha += m1 * m1 + m2 * m2;
    }
    let c_alpha = Inequality::new(total, 2.0 * std::f64::consts::PI * c_alpha);
    let small_solution = {
        let root = (nf - 2.0).sqrt();
        (root * tau_sup < 2.0)
            .then(|| Inequality::new(total, 4.0 * tau_sup * s_l1 / (2.0 - root * tau_sup)))
    };
    let green_tau = (n == 2).then(|| Inequality::new(tau_sup, 0.25 * s_sup));
    let mut c_p_table = Vec::new();
    if let (Some(psi), true) = (psi, n == 2) {
        let psi_sup = psi.values.iter().filter(|z| z.is_finite()).map(|z| z.norm()).fold(0.0, f64::max);
        let l4 = quadrature(&grid, &s_dens.iter().map(|x| x * x).collect::<Vec<_>>()).powf(0.25);
        for (p, norm) in [("4", l4), ("inf", s_sup)] {
            c_p_table.push(CpEntry { p: p.into(), psi_sup, s_norm: norm, ratio: if norm > 0.0 { psi_sup / norm } else { f64::NAN } });
        }
    }
    BoundsReport {
        n,
        total_torsion: total,
        torsion_sup,
        tau_sup,
        grad_tau_l2_squared: grad_tau2,
        s_sup,
        s_l1,
        s_l2,
        grad_s_l2: grad_s2.sqrt(),
        green_tau,
        wente_upper: wente,
        poincare_upper: poincare,
        smallness_value: smallness,
        smallness_satisfied: smallness < 1.0,
        total_torsion_upper_c_alpha_style: c_alpha,
        small_solution_upper: small_solution,
        lower_bound: lower_bound(&grid, n, &s_dens, s_sup, grad_s2, total),
        curvature_inequality_margin: curvature_inequality_margin(forms),
        c_p_table,
    }
}
