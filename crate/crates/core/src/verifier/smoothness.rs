use serde::Serialize;

use super::Verdict;
use crate::error::Result;
use crate::solver::Solution;

/// Tolerance for `a = c det h(0)`.
const LEADING_TOLERANCE: f64 = 1e-12;

/// Leading behaviour at the zero section.
///
/// Near `t = 0`, `e^u = t (a + b t + ...)` with `a = c det h` and
/// `w^{-1} = c t + O(t^2)`. Substituting `t = r^2` the fibre metric becomes
/// `4 c^{-1} (dr^2 + c^2 r^2 dphi^2 / 4)` to leading order, so with `phi` of
/// period `4 pi` it closes up smoothly iff `c = 1` and has a cone of angle
/// ratio `c` otherwise.
#[derive(Clone, Debug, Serialize)]
pub struct SmoothnessReport {
    pub c: f64,
    /// `t`-coefficient of `e^u` at the base point.
    pub a: f64,
    pub c_det_h: f64,
    pub a_deviation: f64,
    pub w_inv_constant: f64,
    pub w_inv_linear: f64,
    /// Ratio of the fibre's cone angle to `2 pi`.
    pub cone_ratio: f64,
    pub smooth: bool,
    /// The leading coefficients are as predicted; independent of the
    /// smoothness verdict.
    pub verdict: Verdict,
}

pub fn smoothness_check(sol: &Solution, tol: f64) -> Result<SmoothnessReport> {
    let c = sol.config.c;
    let det_h = sol.input.det()?.constant_term().re;
    let a = sol.exp_u.coeff(1).constant_term().re;
    let c_det_h = c * det_h;
    let a_deviation = (a - c_det_h).abs() / c_det_h.abs().max(1.0);
    let w0 = sol.w_inv.coeff(0).max_abs();
    let w1_jet = sol.w_inv.coeff(1);
    let w1 = w1_jet.constant_term().re;
    let w1_const = w1_jet.scaled_deviation(&w1_jet.constant_like(c));
    let consistent = a != 0.0
        && a_deviation <= LEADING_TOLERANCE
        && w0 == 0.0
        && w1_const <= LEADING_TOLERANCE;
    Ok(SmoothnessReport {
        c,
        a,
        c_det_h,
        a_deviation,
        w_inv_constant: w0,
        w_inv_linear: w1,
        cone_ratio: w1,
        smooth: (w1 - 1.0).abs() <= tol,
        verdict: if consistent { Verdict::Pass } else { Verdict::Fail },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kahler::builtin_metric;
    use crate::solver::{solve, SolverConfig};

    #[test]
    fn verdict_depends_on_c() {
        for (metric, c, smooth) in [
            ("flat:1", 1.0, true),
            ("flat:1", 4.0, false),
            ("fubini_study_chart:1,1", 1.0, true),
            ("fubini_study_chart:1,1", 2.0, false),
        ] {
            let h = builtin_metric(metric, 8).unwrap();
            let sol = solve(&h, &SolverConfig::new(c, 3, 8)).unwrap();
            let rep = smoothness_check(&sol, 1e-9).unwrap();
            assert_eq!(rep.smooth, smooth, "{metric} c={c}");
            assert_eq!(rep.verdict, Verdict::Pass);
            assert!((rep.a - c * h.det().unwrap().constant_term().re).abs() < 1e-12);
        }
    }
}
