//! Empirical majorant bounds for the series solution.
//!
//! The convergence proof compares the formal solution `sum v_m t^m` with
//! the solution `Y = sum Y_m(r) t^m` of an analytic majorant equation,
//! `Y_m(r) = C_m / (R - r)^{2m - 2}` on the polydisc `D_r`, and shows
//!
//! ```text
//! m |v_m| <= Y_m(r),   |d_i v_m| <= 2e Y_m(r),   |L_k v_m| <= 4e^2 (m+1) M Y_m(r).
//! ```
//!
//! Here the constants are estimated by sampling rather than proved, so a
//! passing [`MajorantReport`] is an empirical validation, not a certificate.
//!
//! For the reduced equation `rho = -1`, so `|m - rho| = m + 1 >= m` and
//! `sigma = 1`. The operators are `L_ij = -H_ij / c`, whose real
//! second-derivative coefficients have absolute sum at most `4 / |c|`.
//!
//! The recursion for `C_m` drops the factors `(R - r)^{w - 2} <= 1` that the
//! term weights `w >= 2` would contribute, which makes `C_m` independent of
//! `r` and the resulting `Y_m` an upper bound for the exact majorant.

mod bounds;
mod sampling;

pub use bounds::{BoundProvider, ExplicitBounds, SampledBounds, TermBound, BOUND_SAMPLES};
pub use sampling::{polydisc_points, torus_points};

use std::f64::consts::E;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{Jet, C64};
use crate::kahler::mixed_hessian_entry;
use crate::solver::Solution;

/// Floor for `A` when the first-order solution vanishes.
pub const A_MIN: f64 = 1e-8;
/// Points per radius in the domination grid.
pub const GRID_POINTS: usize = 128;
/// Radii of the domination grid as fractions of `R`.
pub const GRID_FRACTIONS: [f64; 3] = [0.25, 0.5, 0.75];

#[derive(Clone, Debug, Serialize)]
pub struct MajorantParams {
    /// Polydisc radius `R`.
    pub radius: f64,
    pub a: f64,
    /// Sampled maximum before clamping to [`A_MIN`].
    pub a_sampled: f64,
    pub a_min: f64,
    pub sigma: f64,
    pub m_const: f64,
    pub m_const_convention: String,
    pub euler_e: f64,
    pub c: f64,
}

fn grid_points(n: usize, radius: f64) -> Vec<(f64, Vec<Vec<C64>>)> {
    GRID_FRACTIONS
        .iter()
        .map(|f| {
            let r = f * radius;
            (r, polydisc_points(2 * n, r, GRID_POINTS))
        })
        .collect()
}

/// `L_ij(f) = -H_ij(f) / c` for all `i, j`.
fn operators(f: &Jet, c: f64) -> Result<Vec<Jet>> {
    let n = f.n();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(mixed_hessian_entry(f, i, j)?.scale(-1.0 / c));
        }
    }
    Ok(out)
}

fn first_derivatives(f: &Jet) -> Result<Vec<Jet>> {
    (0..f.nvars()).map(|k| f.derive(k)).collect()
}

fn max_modulus(jets: &[Jet], points: &[Vec<C64>]) -> f64 {
    let mut m: f64 = 0.0;
    for p in points {
        for j in jets {
            m = m.max(j.eval_complex(p).norm());
        }
    }
    m
}

/// Samples `A`, fixes `sigma = 1` and `M = 4 / |c|`.
pub fn estimate_params(sol: &Solution, radius: f64) -> Result<MajorantParams> {
    let limit = sol.input.polydisc_radius.min(1.0);
    if !(radius > 0.0 && radius < limit) {
        return Err(Error::InvalidInput(format!(
            "majorant radius R = {radius} must lie in (0, {limit})"
        )));
    }
    if sol.reached_order < 1 {
        return Err(Error::InvalidInput("majorant needs t-order at least 1".into()));
    }
    let c = sol.config.c;
    let v1 = sol.v.coeff(1);
    let mut jets = vec![v1.clone()];
    jets.extend(first_derivatives(v1)?);
    jets.extend(operators(v1, c)?);
    let mut points = torus_points(2 * sol.n(), radius, GRID_POINTS);
    for (_, pts) in grid_points(sol.n(), radius) {
        points.extend(pts);
    }
    let a_sampled = max_modulus(&jets, &points);
    Ok(MajorantParams {
        radius,
        a: a_sampled.max(A_MIN),
        a_sampled,
        a_min: A_MIN,
        sigma: 1.0,
        m_const: 4.0 / c.abs(),
        m_const_convention: "L_ij = -(1/c)(d_xi d_xj + d_yi d_yj + i(d_xi d_yj - d_yi d_xj)); \
                             M = max over (i,j) of the sum of |real second-derivative coefficients|"
            .into(),
        euler_e: E,
        c,
    })
}

/// `C_1..C_{m_max}`: `C_1 = A` and, for `m >= 2`,
/// `sigma C_m = sum bound (2e)^|alpha| (4e^2 M)^|beta| [t^{m-p-|beta|}] S^k`
/// with `S = sum_{j<m} C_j t^j` and `k = q + s + |alpha| + |beta|`.
pub fn majorant_sequence(
    params: &MajorantParams,
    provider: &dyn BoundProvider,
    m_max: usize,
) -> Result<Vec<f64>> {
    if provider.max_order() < m_max {
        return Err(Error::MissingBounds(format!(
            "bounds cover order {} but {m_max} requested",
            provider.max_order()
        )));
    }
    if let Some(t) = provider.terms().iter().find(|t| t.weight() < 2) {
        return Err(Error::InvalidInput(format!(
            "term t^{} Z^{} Y^{} has weight {} < 2",
            t.p,
            t.q,
            t.beta,
            t.weight()
        )));
    }
    if let Some(t) = provider.terms().iter().find(|t| !(t.bound >= 0.0)) {
        return Err(Error::InvalidInput(format!("negative coefficient bound {}", t.bound)));
    }
    let two_e = 2.0 * params.euler_e;
    let four_e2_m = 4.0 * params.euler_e * params.euler_e * params.m_const;
    let max_power = provider.terms().iter().map(TermBound::y_power).max().unwrap_or(0);

    let mut c = vec![0.0, params.a];
    for m in 2..=m_max {
        // powers[k][j] = [t^j] S^k with S built from C_1..C_{m-1}
        let mut powers = vec![vec![0.0; m + 1]; max_power + 1];
        powers[0][0] = 1.0;
        for k in 1..=max_power {
            for j in 0..=m {
                let mut acc = 0.0;
                for i in 1..=j.min(m - 1) {
                    acc += c[i] * powers[k - 1][j - i];
                }
                powers[k][j] = acc;
            }
        }
        let mut sum = 0.0;
        for t in provider.terms() {
            let shift = t.p + t.beta;
            if shift > m {
                continue;
            }
            let coeff = powers[t.y_power()][m - shift];
            if coeff == 0.0 {
                continue;
            }
            sum += t.bound * two_e.powi(t.alpha as i32) * four_e2_m.powi(t.beta as i32) * coeff;
        }
        c.push(sum / params.sigma);
    }
    c.remove(0);
    Ok(c)
}

/// `Y_m(r) = C_m / (R - r)^{2m - 2}`.
pub fn y_m(c_m: f64, m: usize, big_r: f64, r: f64) -> f64 {
    c_m / (big_r - r).powi(2 * m as i32 - 2)
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationRow {
    pub m: usize,
    pub radius: f64,
    /// `first`, `second` or `third`.
    pub inequality: String,
    pub max_lhs: f64,
    pub rhs: f64,
    /// `1 - max_lhs / rhs`.
    pub margin: f64,
    pub points: usize,
    pub pass: bool,
}

/// Checks the three majorant inequalities for `v_1..v_K` on the grid.
pub fn check_domination(sol: &Solution, params: &MajorantParams, c_m: &[f64]) -> Result<Vec<DominationRow>> {
    let k = sol.reached_order.min(c_m.len());
    let grids = grid_points(sol.n(), params.radius);
    let mut rows = Vec::new();
    for m in 1..=k {
        let vm = sol.v.coeff(m);
        let derivs = if vm.valid_degree() >= 1 { Some(first_derivatives(vm)?) } else { None };
        let ops = if vm.valid_degree() >= 2 { Some(operators(vm, params.c)?) } else { None };
        for (r, pts) in &grids {
            let y = y_m(c_m[m - 1], m, params.radius, *r);
            let mut push = |name: &str, lhs: f64, rhs: f64| {
                rows.push(DominationRow {
                    m,
                    radius: *r,
                    inequality: name.into(),
                    max_lhs: lhs,
                    rhs,
                    margin: if rhs > 0.0 { 1.0 - lhs / rhs } else if lhs == 0.0 { 0.0 } else { f64::NEG_INFINITY },
                    points: pts.len(),
                    pass: lhs <= rhs,
                })
            };
            push("first", m as f64 * max_modulus(std::slice::from_ref(vm), pts), y);
            if let Some(d) = &derivs {
                push("second", max_modulus(d, pts), 2.0 * params.euler_e * y);
            }
            if let Some(o) = &ops {
                let rhs = 4.0 * params.euler_e.powi(2) * (m + 1) as f64 * params.m_const * y;
                push("third", max_modulus(o, pts), rhs);
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct CauchyEstimateReport {
    pub family: String,
    pub p: usize,
    pub c: f64,
    pub radius: f64,
    pub points: usize,
    /// Largest `|f| (R - r)^p / C` seen: the hypothesis holds iff `<= 1`.
    pub hypothesis_ratio: f64,
    /// Largest `|d f| / (C e (p + 1) / (R - r)^{p+1})` seen.
    pub conclusion_ratio: f64,
    pub pass: bool,
}

/// Checks the derivative estimate `|d v| <= C e (p+1) / (R - r)^{p+1}` for
/// `|v| <= C / (R - r)^p` on the test functions `f = C` and
/// `f = C / (R - x_1)^p`, evaluated in closed form on grids of `D_r`.
pub fn cauchy_estimate_check(p: usize, c: f64, radius: f64, grid: &[f64]) -> Result<Vec<CauchyEstimateReport>> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidInput(format!("R = {radius} must lie in (0, 1)")));
    }
    let mut out = Vec::new();
    let families: [(&str, usize); 2] = [("constant", 0), ("pole", p)];
    for (family, pp) in families {
        let mut hyp: f64 = 0.0;
        let mut concl: f64 = 0.0;
        let mut count = 0;
        for &frac in grid {
            let r = frac * radius;
            for pt in polydisc_points(1, r, GRID_POINTS) {
                let x = pt[0];
                let (f, df) = if family == "constant" {
                    (C64::new(c, 0.0), C64::new(0.0, 0.0))
                } else {
                    let d = C64::new(radius, 0.0) - x;
                    (c / d.powi(pp as i32), c * pp as f64 / d.powi(pp as i32 + 1))
                };
                hyp = hyp.max(f.norm() * (radius - r).powi(pp as i32) / c.abs());
                let bound = c.abs() * E * (pp + 1) as f64 / (radius - r).powi(pp as i32 + 1);
                concl = concl.max(df.norm() / bound);
                count += 1;
            }
        }
        out.push(CauchyEstimateReport {
            family: family.into(),
            p: pp,
            c,
            radius,
            points: count,
            hypothesis_ratio: hyp,
            conclusion_ratio: concl,
            pass: hyp <= 1.0 + 1e-12 && concl <= 1.0,
        });
    }
    Ok(out)
}

/// Root-test estimate of the `t`-radius of convergence from `C_m`:
/// `1 / max_m (Y_m / Y_1)^{1/(m-1)}`. A heuristic, not a bound.
pub fn radius_estimate(c_m: &[f64], big_r: f64, r: f64) -> Result<Option<f64>> {
    if c_m.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "radius estimate needs at least 4 coefficients, got {}",
            c_m.len()
        )));
    }
    if c_m[1..].iter().all(|&c| c == 0.0) {
        return Ok(None);
    }
    let y1 = y_m(c_m[0], 1, big_r, r);
    let mut rate: f64 = 0.0;
    for (i, &c) in c_m.iter().enumerate().skip(1) {
        let m = i + 1;
        let ratio = y_m(c, m, big_r, r) / y1;
        rate = rate.max(ratio.powf(1.0 / (m - 1) as f64));
    }
    Ok(Some(1.0 / rate))
}

#[derive(Clone, Debug, Serialize)]
pub struct MajorantReport {
    pub params: MajorantParams,
    pub bounds: SampledBounds,
    pub terms: Vec<TermBound>,
    pub c_m: Vec<f64>,
    pub domination: Vec<DominationRow>,
    pub cauchy: Vec<CauchyEstimateReport>,
    /// At `r = R / 2`.
    pub radius_estimate: Option<f64>,
    pub radius_note: String,
    pub empirical: bool,
    pub pass: bool,
}

/// Full pipeline: parameters, sampled bounds, `C_m`, domination, the
/// Cauchy estimate on its test family and the radius heuristic.
pub fn majorant_report(sol: &Solution, radius: f64) -> Result<MajorantReport> {
    let params = estimate_params(sol, radius)?;
    let m_max = sol.reached_order;
    let bounds = SampledBounds::from_solution(sol, radius, m_max)?;
    let c_m = majorant_sequence(&params, &bounds, m_max)?;
    let domination = check_domination(sol, &params, &c_m)?;
    let mut cauchy = Vec::new();
    for p in 0..=3 {
        cauchy.extend(cauchy_estimate_check(p, 1.0, radius, &GRID_FRACTIONS)?);
    }
    let (radius_estimate, radius_note) = if c_m.len() < 4 {
        (None, "fewer than 4 orders; no estimate".to_string())
    } else {
        match radius_estimate(&c_m, radius, radius / 2.0)? {
            Some(x) => (Some(x), "heuristic root test on C_m at r = R/2".to_string()),
            None => (None, "C_m = 0 for m >= 2: entire in t at this order".to_string()),
        }
    };
    let pass = domination.iter().all(|r| r.pass) && cauchy.iter().all(|c| c.pass);
    Ok(MajorantReport {
        terms: bounds.terms().to_vec(),
        params,
        bounds,
        c_m,
        domination,
        cauchy,
        radius_estimate,
        radius_note,
        empirical: true,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kahler::builtin_metric;
    use crate::solver::{solve, SolverConfig};

    fn params(a: f64) -> MajorantParams {
        MajorantParams {
            radius: 0.5,
            a,
            a_sampled: a,
            a_min: A_MIN,
            sigma: 1.0,
            m_const: 4.0,
            m_const_convention: String::new(),
            euler_e: E,
            c: 1.0,
        }
    }

    #[test]
    fn no_nonlinearity_means_no_growth() {
        let b = ExplicitBounds {
            max_order: 6,
            terms: vec![TermBound { p: 2, q: 0, s: 0, alpha: 0, beta: 1, bound: 0.0 }],
        };
        let c = majorant_sequence(&params(0.3), &b, 6).unwrap();
        assert_eq!(c[0], 0.3);
        assert!(c[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn single_quadratic_term_by_hand() {
        // bound * Z^2: C_2 = bound * C_1^2, C_3 = bound * 2 C_1 C_2
        let b = ExplicitBounds {
            max_order: 3,
            terms: vec![TermBound { p: 0, q: 2, s: 0, alpha: 0, beta: 0, bound: 0.5 }],
        };
        let c = majorant_sequence(&params(2.0), &b, 3).unwrap();
        assert_eq!(c, vec![2.0, 2.0, 4.0]);
        // one Y^beta factor: bound * 4e^2 M * C_{m-1}
        let b = ExplicitBounds {
            max_order: 3,
            terms: vec![TermBound { p: 0, q: 0, s: 0, alpha: 0, beta: 1, bound: 1.0 }],
        };
        let c = majorant_sequence(&params(1.0), &b, 3).unwrap();
        let k = 16.0 * E * E;
        assert!((c[1] - k).abs() < 1e-12 && (c[2] - k * k).abs() < 1e-9);
    }

    #[test]
    fn rejects_low_weight_and_missing_orders() {
        let low = ExplicitBounds {
            max_order: 3,
            terms: vec![TermBound { p: 1, q: 0, s: 0, alpha: 0, beta: 0, bound: 1.0 }],
        };
        assert!(matches!(majorant_sequence(&params(1.0), &low, 3), Err(Error::InvalidInput(_))));
        let short = ExplicitBounds { max_order: 2, terms: vec![] };
        assert!(matches!(majorant_sequence(&params(1.0), &short, 3), Err(Error::MissingBounds(_))));
    }

    #[test]
    fn radius_of_geometric_sequence() {
        let (big_r, r, q): (f64, f64, f64) = (0.5, 0.25, 3.0);
        let c: Vec<f64> = (1..=8).map(|m| 0.7 * q.powi(m - 1) * (big_r - r).powi(2 * m - 2)).collect();
        let est = radius_estimate(&c, big_r, r).unwrap().unwrap();
        assert!((est - 1.0 / q).abs() < 0.1 / q);
        assert_eq!(radius_estimate(&[1.0, 0.0, 0.0, 0.0], 0.5, 0.2).unwrap(), None);
        assert!(radius_estimate(&[1.0, 0.0, 0.0], 0.5, 0.2).is_err());
    }

    #[test]
    fn cauchy_family_passes() {
        for p in 0..4 {
            for rep in cauchy_estimate_check(p, 2.5, 0.6, &GRID_FRACTIONS).unwrap() {
                assert!(rep.pass, "{rep:?}");
            }
        }
    }

    #[test]
    fn flat_report() {
        let h = builtin_metric("flat:1", 12).unwrap();
        let sol = solve(&h, &SolverConfig::new(1.0, 5, 12)).unwrap();
        let rep = majorant_report(&sol, 0.5).unwrap();
        assert_eq!(rep.params.a, A_MIN);
        assert_eq!(rep.c_m[0], A_MIN);
        assert!(rep.pass);
    }

    #[test]
    fn shifted_linear_metric() {
        let h = crate::kahler::InitialData::new(
            "lin",
            crate::kahler::ChartKind::Inline,
            crate::kahler::HermitianJetMatrix::from_fn(1, |_, _| {
                &Jet::constant(1, 12, 1.0) + &Jet::coordinate(1, 12, 0)
            }),
            1.0,
        )
        .unwrap();
        let sol = solve(&h, &SolverConfig::new(1.0, 5, 12)).unwrap();
        let rep = majorant_report(&sol, 0.4).unwrap();
        assert!(rep.params.a >= 0.5);
        assert!(rep.pass, "{:?}", rep.domination.iter().filter(|r| !r.pass).collect::<Vec<_>>());
    }

    #[test]
    fn radius_range_enforced() {
        let h = builtin_metric("fubini_study_chart:1,1", 8).unwrap();
        let sol = solve(&h, &SolverConfig::new(1.0, 3, 8)).unwrap();
        assert!(estimate_params(&sol, 0.9).is_err());
        assert!(estimate_params(&sol, 0.0).is_err());
        assert!(estimate_params(&sol, 0.5).is_ok());
    }
}
