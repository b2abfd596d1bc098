//! Curvature of the circle bundle and its class.
//!
//! With `w = (1/t + v_t)/c` the curvature of the connection form is
//!
//! ```text
//! F = -(i/2) (g_ij)_t dz_i ^ dzbar_j
//!     - i w_{z_i} dz_i ^ dt + i w_{zbar_j} dzbar_j ^ dt
//! ```
//!
//! stored as `F_ij = -(i/2) (g_ij)_t`, `P_i = -i w_{z_i}`, `Q_j = i w_{zbar_j}`,
//! where `w_{z_i} = (1/c) d(v_t)/dz_i` is regular. `dF = 0` splits into
//!
//! * `dF_t`:    `d_t F_ij + d_{zbar_j} P_i - d_{z_i} Q_j`,
//! * `dF_z`:    `d_{z_k} F_ij - d_{z_i} F_kj`,
//! * `dF_zbar`: `d_{zbar_k} F_ij - d_{zbar_j} F_ik`,
//! * `dF_p`:    `d_{z_k} P_i - d_{z_i} P_k`,
//! * `dF_q`:    `d_{zbar_k} Q_j - d_{zbar_j} Q_k`,
//!
//! and reality of `F` means `F_ji = -conj(F_ij)` and `Q_i = conj(P_i)`.

use std::f64::consts::PI;

use serde::Serialize;

use super::quadrature::plane_rule;
use super::{skipped, Accumulator, ResidualReport, Verdict};
use crate::error::{Error, Result};
use crate::jet::{Jet, TJet, C64};
use crate::kahler::{d_z, d_zbar, ChartKind, HermitianJetMatrix};
use crate::solver::Solution;

/// Quadrature layout for the class integral: 16 panels of 16 Gauss nodes
/// radially, 8 angles.
const QUAD_PANELS: usize = 16;
const QUAD_ORDER: usize = 16;
const QUAD_ANGLES: usize = 8;
pub const CLASS_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct CurvatureForm {
    /// `F_ij`, anti-Hermitian.
    pub f: HermitianJetMatrix<TJet>,
    pub p: Vec<TJet>,
    pub q: Vec<TJet>,
}

pub fn curvature_form(sol: &Solution) -> Result<CurvatureForm> {
    let n = sol.n();
    let c = sol.config.c;
    let minus_half_i = C64::new(0.0, -0.5);
    let f = sol.g.t_derive().map(|s| s.scale(minus_half_i));
    let vt = sol.v.t_derive();
    let mut p = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    for i in 0..n {
        let wz = trusted_map(&vt, 1, |a| d_z(a, i))?.scale(1.0 / c);
        let wzb = trusted_map(&vt, 1, |a| d_zbar(a, i))?.scale(1.0 / c);
        p.push(wz.scale(C64::new(0.0, -1.0)));
        q.push(wzb.scale(C64::new(0.0, 1.0)));
    }
    Ok(CurvatureForm { f, p, q })
}

/// Applies a spatial operation to the leading coefficients that carry at
/// least `need` valid degrees.
fn trusted_map(s: &TJet, need: usize, f: impl Fn(&Jet) -> Result<Jet>) -> Result<TJet> {
    let keep = s
        .coeffs()
        .iter()
        .position(|c| c.valid_degree() < need)
        .unwrap_or(s.coeffs().len());
    if keep == 0 {
        return Err(Error::ValidityExhausted {
            what: "curvature form".into(),
            needed: need,
            available: s.coeff(0).valid_degree(),
        });
    }
    s.truncate_order(keep - 1).try_map(f)
}

/// `d/dz_k` or `d/dzbar_k` of a series, on the orders valid for it.
fn dz(s: &TJet, k: usize, bar: bool) -> Option<TJet> {
    let f = |a: &Jet| if bar { d_zbar(a, k) } else { d_z(a, k) };
    trusted_map(s, 1, f).ok()
}

fn add_pair(acc: &mut Accumulator, a: Option<TJet>, b: Option<TJet>, sign: f64) -> Result<()> {
    let (Some(a), Some(b)) = (a, b) else {
        return Ok(());
    };
    for k in 0..=a.max_order().min(b.max_order()) {
        acc.add(k, &[a.coeff(k).clone(), b.coeff(k).scale(sign)])?;
    }
    Ok(())
}

/// Closedness and reality of `F`.
pub fn closedness(form: &CurvatureForm, tol: f64) -> Result<ResidualReport> {
    let n = form.p.len();
    let mut dft = Accumulator::new("dF_t", "d_t F_ij + d_zbar_j P_i - d_z_i Q_j = 0", tol);
    let mut dfz = Accumulator::new("dF_z", "d_z_k F_ij - d_z_i F_kj = 0", tol);
    let mut dfzb = Accumulator::new("dF_zbar", "d_zbar_k F_ij - d_zbar_j F_ik = 0", tol);
    let mut dfp = Accumulator::new("dF_p", "d_z_k P_i - d_z_i P_k = 0", tol);
    let mut dfq = Accumulator::new("dF_q", "d_zbar_k Q_j - d_zbar_j Q_k = 0", tol);
    let mut real = Accumulator::new("F_real", "F_ji = -conj(F_ij), Q_i = conj(P_i)", tol);

    for i in 0..n {
        for j in 0..n {
            let ft = form.f.get(i, j).t_derive();
            let a = dz(&form.p[i], j, true);
            let b = dz(&form.q[j], i, false);
            if let (Some(a), Some(b)) = (a, b) {
                let top = ft.max_order().min(a.max_order()).min(b.max_order());
                if form.f.get(i, j).max_order() >= 1 {
                    for k in 0..=top {
                        dft.add(k, &[ft.coeff(k).clone(), a.coeff(k).clone(), b.coeff(k).scale(-1.0)])?;
                    }
                }
            }
            for k in 0..n {
                if k > i {
                    add_pair(&mut dfz, dz(form.f.get(i, j), k, false), dz(form.f.get(k, j), i, false), -1.0)?;
                }
                if k > j {
                    add_pair(&mut dfzb, dz(form.f.get(i, j), k, true), dz(form.f.get(i, k), j, true), -1.0)?;
                }
            }
            add_pair(&mut real, Some(form.f.get(j, i).clone()), Some(form.f.get(i, j).conj()), 1.0)?;
        }
        for k in (i + 1)..n {
            add_pair(&mut dfp, dz(&form.p[i], k, false), dz(&form.p[k], i, false), -1.0)?;
            add_pair(&mut dfq, dz(&form.q[i], k, true), dz(&form.q[k], i, true), -1.0)?;
        }
        add_pair(&mut real, Some(form.q[i].clone()), Some(form.p[i].conj()), -1.0)?;
    }
    let mut ids = vec![dft.finish(), real.finish()];
    if n > 1 {
        ids.extend([dfz.finish(), dfzb.finish(), dfp.finish(), dfq.finish()]);
    } else {
        let why = "no pairs of distinct indices for n = 1";
        ids.push(skipped("dF_z", "d_z_k F_ij - d_z_i F_kj = 0", why));
    }
    Ok(ResidualReport::new("curvature", tol, ids))
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassIntegral {
    /// `int F / 2 pi` with `phi` of period `2 pi`.
    pub raw: f64,
    /// `w_inv`'s linear coefficient, the fibre's period factor.
    pub fibre_factor: f64,
    /// Integral normalised to a fibre of period `2 pi` in the smooth
    /// coordinate `r` with `t = r^2`.
    pub value: f64,
    pub expected: f64,
    pub deviation: f64,
    pub nearest_integer: f64,
    pub quadrature_points: usize,
    /// `|quadrature - pi s|` for the closed-form area.
    pub area_error: f64,
    /// Scaled deviation of `g_1` from `ratio * h` on the jets.
    pub ratio: f64,
    pub ratio_deviation: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureReport {
    pub closedness: ResidualReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_integral: Option<ClassIntegral>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_skip_reason: Option<String>,
    pub verdict: Verdict,
}

/// Integral of `F` over the base at `t = 0` for the one-dimensional
/// Fubini-Study chart, whose complement in the sphere is a point.
fn class_integral(sol: &Solution, scale: f64, tol: f64) -> Result<ClassIntegral> {
    if sol.reached_order < 1 {
        return Err(Error::Precondition("class integral needs t-order at least 1".into()));
    }
    let h = sol.input.h.get(0, 0);
    let g1 = sol.g.get(0, 0).coeff(1);
    let ratio = g1.constant_term().re / h.constant_term().re;
    let ratio_deviation = g1.scaled_deviation(&h.scale(ratio));
    // F = -(i/2) g_1 dz ^ dzbar = -g_1 dx ^ dy, and g_1 = ratio * h on the
    // whole chart since the ratio is constant
    let rule = plane_rule(QUAD_PANELS, QUAD_ORDER, QUAD_ANGLES);
    let area: f64 = rule
        .iter()
        .map(|(p, w)| w * scale / (1.0 + p[0] * p[0] + p[1] * p[1]).powi(2))
        .sum();
    let raw = -ratio * area / (2.0 * PI);
    let fibre_factor = sol.w_inv.coeff(1).constant_term().re;
    let value = raw * fibre_factor / 2.0;
    let expected = -2.0;
    let deviation = (value - expected).abs();
    Ok(ClassIntegral {
        raw,
        fibre_factor,
        value,
        expected,
        deviation,
        nearest_integer: value.round(),
        quadrature_points: rule.len(),
        area_error: (area - PI * scale).abs(),
        ratio,
        ratio_deviation,
        tolerance: tol,
        verdict: if deviation <= tol && ratio_deviation <= 1e-9 {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    })
}

/// Assembles `F`, checks `dF = 0` and, for the one-dimensional
/// Fubini-Study chart, integrates `F / 2 pi` over the sphere.
pub fn curvature_and_class(sol: &Solution, tol: f64) -> Result<CurvatureReport> {
    let form = curvature_form(sol)?;
    let closedness = closedness(&form, tol)?;
    let (class_integral, class_skip_reason) = match sol.input.chart {
        ChartKind::FubiniStudy { n: 1, scale } => (Some(class_integral(sol, scale, CLASS_TOLERANCE)?), None),
        _ => (
            None,
            Some("class integral implemented for the one-dimensional Fubini-Study chart only".to_string()),
        ),
    };
    let verdict = Verdict::combine(
        std::iter::once(closedness.verdict).chain(class_integral.iter().map(|c| c.verdict)),
    );
    Ok(CurvatureReport {
        closedness,
        class_integral,
        class_skip_reason,
        verdict,
    })
}
