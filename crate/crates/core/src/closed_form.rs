//! Explicit solutions over bases whose Ricci form has constant eigenvalues
//! relative to the metric.
//!
//! If `rho(Phi)` has constant principal curvatures `lambda_i` then
//! `omega(t) = Phi + t rho` has `omega^n = P(t) Phi^n` with
//! `P(t) = prod (1 + lambda_i t)`, the Ricci form of `omega(t)` is again
//! `rho`, and `w^{-1}(t) = int_0^t P / P`. These are exact and serve as an
//! oracle for the series solver once the normalisation of `rho` against the
//! solver's Hessian convention is pinned down by [`calibrate`].

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{TJet, C64};
use crate::kahler::{ricci_form, HermitianJetMatrix, InitialData};
use crate::jet::Jet;
use crate::solver::Solution;

/// Candidate calibration scalars. Convention mismatches between Hessian
/// and Ricci-form normalisations are powers of two.
pub const KAPPA_CANDIDATES: [f64; 5] = [1.0, 2.0, 4.0, 0.5, 0.25];

/// Principal Ricci curvatures of a base metric.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RicciSpectrum {
    pub eigenvalues: Vec<f64>,
}

impl RicciSpectrum {
    pub fn new(eigenvalues: Vec<f64>) -> Result<RicciSpectrum> {
        if eigenvalues.is_empty() || eigenvalues.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidInput("spectrum needs finite eigenvalues".into()));
        }
        Ok(RicciSpectrum { eigenvalues })
    }

    /// `n` equal eigenvalues.
    pub fn einstein(n: usize, lambda: f64) -> RicciSpectrum {
        RicciSpectrum {
            eigenvalues: vec![lambda; n],
        }
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_ricci_flat(&self, tol: f64) -> bool {
        self.eigenvalues.iter().all(|l| l.abs() <= tol)
    }
}

/// Real polynomial in `t`, ascending coefficients.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PolyT(pub Vec<f64>);

impl PolyT {
    pub fn constant(c: f64) -> PolyT {
        PolyT(vec![c])
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.0.get(k).copied().unwrap_or(0.0)
    }

    pub fn add(&self, other: &PolyT) -> PolyT {
        let len = self.0.len().max(other.0.len());
        PolyT((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &PolyT) -> PolyT {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> PolyT {
        PolyT(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &PolyT) -> PolyT {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyT(out)
    }

    /// `int_0^t`.
    pub fn integrate(&self) -> PolyT {
        let mut out = vec![0.0];
        out.extend(self.0.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
        PolyT(out)
    }

    pub fn derive(&self) -> PolyT {
        if self.0.len() <= 1 {
            return PolyT(vec![0.0]);
        }
        PolyT(self.0.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// `num / den` with `den(0) != 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalT {
    pub num: PolyT,
    pub den: PolyT,
}

impl RationalT {
    pub fn new(num: PolyT, den: PolyT) -> Result<RationalT> {
        if den.coeff(0) == 0.0 {
            return Err(Error::InvalidInput("denominator vanishes at t = 0".into()));
        }
        Ok(RationalT { num, den })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.num.eval(t) / self.den.eval(t)
    }

    /// Taylor coefficients at `t = 0` through `t^order`.
    pub fn series(&self, order: usize) -> Vec<f64> {
        let d0 = self.den.coeff(0);
        let mut q: Vec<f64> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.num.coeff(k);
            for j in 1..=k {
                acc -= self.den.coeff(j) * q[k - j];
            }
            q.push(acc / d0);
        }
        q
    }

    /// Cross-multiplied equality `a.num * b.den == b.num * a.den`, scaled.
    pub fn deviation(&self, other: &RationalT) -> f64 {
        let l = self.num.mul(&other.den);
        let r = other.num.mul(&self.den);
        l.sub(&r).max_abs() / l.max_abs().max(r.max_abs()).max(1.0)
    }
}

/// `P(t) = prod (1 + lambda_i t)`.
pub fn p_of_t(spec: &RicciSpectrum) -> PolyT {
    spec.eigenvalues
        .iter()
        .fold(PolyT::constant(1.0), |p, &l| p.mul(&PolyT(vec![1.0, l])))
}

/// `w^{-1} = int_0^t P / P`.
pub fn w_inv_closed(p: &PolyT) -> Result<RationalT> {
    if (p.coeff(0) - 1.0).abs() > 1e-14 {
        return Err(Error::InvalidInput(format!("P(0) = {} must be 1", p.coeff(0))));
    }
    RationalT::new(p.integrate(), p.clone())
}

/// Residual of `d/dt (w^{-1} P) = P`, cross-multiplied over `w^{-1}`'s
/// denominator.
pub fn cw_identity_residual(w_inv: &RationalT, p: &PolyT) -> f64 {
    // (num P / den)' = P  <=>  (num P)' den - num P den' = P den^2
    let np = w_inv.num.mul(p);
    let lhs = np.derive().mul(&w_inv.den).sub(&np.mul(&w_inv.den.derive()));
    let rhs = p.mul(&w_inv.den).mul(&w_inv.den);
    lhs.sub(&rhs).max_abs() / rhs.max_abs().max(1.0)
}

/// `omega(t) = Phi + t rho` and its determinant.
#[derive(Clone, Debug)]
pub struct OmegaOfT {
    pub g: HermitianJetMatrix<TJet>,
    pub det: TJet,
}

impl OmegaOfT {
    /// Scaled deviation of `det omega(t)` from `P(t) det Phi`, per order.
    pub fn det_deviation(&self, p: &PolyT) -> Result<f64> {
        let det_phi = self.det.coeff(0);
        let mut worst: f64 = 0.0;
        for k in 0..=self.det.max_order() {
            let want = det_phi.scale(p.coeff(k));
            worst = worst.max(self.det.coeff(k).scaled_deviation(&want));
        }
        Ok(worst)
    }
}

pub fn omega_of_t(
    phi: &HermitianJetMatrix<Jet>,
    rho: &HermitianJetMatrix<Jet>,
    max_order: usize,
) -> Result<OmegaOfT> {
    if phi.n() != rho.n() {
        return Err(Error::DimensionMismatch("Phi and rho differ in size".into()));
    }
    let at_base = phi.eval(&vec![0.0; 2 * phi.n()]);
    if !crate::kahler::is_positive_definite(&at_base) {
        return Err(Error::InvalidInput("Phi is not positive at the base point".into()));
    }
    let g = HermitianJetMatrix::try_from_fn(phi.n(), |i, j| {
        let p = phi.get(i, j);
        let mut coeffs = vec![p.clone(), rho.get(i, j).clone()];
        coeffs.resize(max_order.max(1) + 1, p.zero_like(p.max_degree()));
        TJet::new(coeffs).map(|s| s.truncate_order(max_order))
    })?;
    let det = g.det()?;
    Ok(OmegaOfT { g, det })
}

/// Eigenvalues of `h^{-1} rho` at one point, ascending.
fn relative_eigenvalues(h: &DMatrix<C64>, rho: &DMatrix<C64>) -> Result<Vec<f64>> {
    let chol = h
        .clone()
        .cholesky()
        .ok_or_else(|| Error::SingularInput("metric not positive at a sample point".into()))?;
    let l_inv = chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::SingularInput("singular Cholesky factor".into()))?;
    let s = &l_inv * rho * l_inv.adjoint();
    let s = (&s + s.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = s.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Deterministic sample points around the base point.
fn spectrum_samples(n: usize, radius: f64) -> Vec<Vec<f64>> {
    let mut pts = vec![vec![0.0; 2 * n]];
    for k in 0..8 {
        let mut p = vec![0.0; 2 * n];
        for (j, x) in p.iter_mut().enumerate() {
            let phase = 0.7 * k as f64 + 1.3 * j as f64;
            *x = radius * phase.cos() / (2.0 * n as f64).sqrt();
        }
        pts.push(p);
    }
    pts
}

/// Principal Ricci curvatures of the initial metric, checked constant to
/// `tol` over sample points near the base point.
pub fn ricci_spectrum(input: &InitialData, tol: f64) -> Result<RicciSpectrum> {
    let rho = ricci_form(&input.h)?;
    let radius = 0.1f64.min(input.polydisc_radius / 4.0);
    let mut reference: Option<Vec<f64>> = None;
    for p in spectrum_samples(input.n(), radius) {
        let ev = relative_eigenvalues(&input.h.eval(&p), &rho.eval(&p))?;
        match &reference {
            None => reference = Some(ev),
            Some(r) => {
                let spread = r.iter().zip(&ev).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                let scale = r.iter().fold(1.0f64, |m, a| m.max(a.abs()));
                if spread / scale > tol {
                    return Err(Error::Precondition(format!(
                        "principal Ricci curvatures vary by {spread:.3e} near the base point"
                    )));
                }
            }
        }
    }
    RicciSpectrum::new(reference.expect("at least one sample"))
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateFit {
    pub kappa: f64,
    /// Worst scaled deviation of `g_k` from the `t^k` part of `Phi + kappa t rho`.
    pub g_deviation: f64,
    /// Worst scaled deviation of `w_inv` coefficients.
    pub w_inv_deviation: f64,
}

impl CandidateFit {
    pub fn deviation(&self) -> f64 {
        self.g_deviation.max(self.w_inv_deviation)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationReport {
    pub spectrum: RicciSpectrum,
    pub p_of_t: PolyT,
    pub w_inv_closed: RationalT,
    pub candidates: Vec<CandidateFit>,
    /// Selected scalar, `None` when no candidate matches.
    pub kappa: Option<f64>,
    /// False for a Ricci-flat base, where every candidate fits equally.
    pub kappa_relevant: bool,
    pub deviation: f64,
    pub tolerance: f64,
    pub matched: bool,
    pub orders_compared: usize,
}

/// Largest coefficient modulus per degree block over `jets`, as a running
/// maximum from degree 0 up.
fn block_sizes(jets: &[Jet]) -> Vec<f64> {
    let top = jets.iter().map(Jet::valid_degree).max().unwrap_or(0);
    let mut out = Vec::with_capacity(top + 1);
    let mut run: f64 = 0.0;
    for d in 0..=top {
        run = jets.iter().fold(run, |m, j| m.max(j.max_abs_in_degree(d)));
        out.push(run);
    }
    out
}

/// Worst blockwise deviation of `got` from `want`. Degree block `d` is
/// judged against the size of the solution there: the larger of `want`
/// and `t_size * |h|` through degree `d`, at least 1. High-degree blocks
/// of the `t^k` coefficients are products of `t`-growth and the base
/// metric's own coefficients, so a fixed absolute yardstick would mistake
/// their rounding for disagreement.
fn block_deviation(got: &Jet, want: &Jet, t_size: f64, h_size: &[f64]) -> f64 {
    let top = got.valid_degree().min(want.valid_degree());
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for d in 0..=top {
        let h = h_size.get(d).or(h_size.last()).copied().unwrap_or(0.0);
        scale = scale.max(want.max_abs_in_degree(d)).max(t_size * h);
        let diff = got.with_valid_degree(d).try_sub(&want.with_valid_degree(d)).map_or(f64::INFINITY, |x| x.max_abs_in_degree(d));
        worst = worst.max(diff / scale);
    }
    worst
}

/// Finds the scalar `kappa` for which the solver output equals
/// `Phi + kappa t rho`, `w^{-1} = (c / kappa) W(kappa t)`.
pub fn calibrate(sol: &Solution, tol: f64) -> Result<CalibrationReport> {
    let spectrum = ricci_spectrum(&sol.input, 1e-6)?;
    let rho = ricci_form(&sol.input.h)?;
    let p = p_of_t(&spectrum);
    let w_closed = w_inv_closed(&p)?;
    let order = sol.reached_order;
    let w_series = w_closed.series(order);
    let n = sol.n();
    let c = sol.config.c;

    let h_size = block_sizes(sol.input.h.entries());

    let mut candidates = Vec::with_capacity(KAPPA_CANDIDATES.len());
    for &kappa in &KAPPA_CANDIDATES {
        let mut g_dev: f64 = 0.0;
        // size of the t^k coefficients of the predicted solution
        let mut t_size: f64 = 1.0;
        for k in 0..=order {
            if k >= 1 {
                t_size = t_size.max((c * kappa.powi(k as i32 - 1) * w_series[k]).abs());
            }
            for i in 0..n {
                for j in 0..n {
                    let got = sol.g.get(i, j).coeff(k);
                    let want = match k {
                        0 => sol.input.h.get(i, j).clone(),
                        1 => rho.get(i, j).scale(kappa),
                        _ => got.zero_like(got.max_degree()),
                    };
                    g_dev = g_dev.max(block_deviation(got, &want, t_size, &h_size));
                }
            }
        }
        let mut w_dev: f64 = 0.0;
        for (k, wk) in w_series.iter().enumerate() {
            let scale = if k == 0 { 0.0 } else { c * kappa.powi(k as i32 - 1) };
            let got = sol.w_inv.coeff(k);
            w_dev = w_dev.max(got.scaled_deviation(&got.constant_like(wk * scale)));
        }
        candidates.push(CandidateFit {
            kappa,
            g_deviation: g_dev,
            w_inv_deviation: w_dev,
        });
    }

    let kappa_relevant = !spectrum.is_ricci_flat(1e-12);
    let best = candidates
        .iter()
        .min_by(|a, b| a.deviation().total_cmp(&b.deviation()))
        .expect("nonempty candidate set");
    let matched = best.deviation() <= tol;
    Ok(CalibrationReport {
        p_of_t: p,
        w_inv_closed: w_closed,
        kappa: if matched && kappa_relevant { Some(best.kappa) } else { None },
        kappa_relevant,
        deviation: if kappa_relevant { best.deviation() } else { candidates[0].deviation() },
        tolerance: tol,
        matched,
        orders_compared: order,
        candidates,
        spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kahler::builtin_metric;
    use crate::solver::{solve, SolverConfig};

    #[test]
    fn p_of_t_examples() {
        assert_eq!(p_of_t(&RicciSpectrum::einstein(2, 0.0)).0, vec![1.0, 0.0, 0.0]);
        assert_eq!(p_of_t(&RicciSpectrum::new(vec![1.0, 2.0]).unwrap()).0, vec![1.0, 3.0, 2.0]);
        assert_eq!(p_of_t(&RicciSpectrum::einstein(3, 1.0)).0, vec![1.0, 3.0, 3.0, 1.0]);
    }

    #[test]
    fn w_inv_of_unit_eigenvalue() {
        let w = w_inv_closed(&PolyT(vec![1.0, 1.0])).unwrap();
        let want = RationalT::new(PolyT(vec![0.0, 2.0, 1.0]), PolyT(vec![2.0, 2.0])).unwrap();
        assert!(w.deviation(&want) < 1e-15);
        let s = w.series(6);
        let expected = [0.0, 1.0, -0.5, 0.5, -0.5, 0.5, -0.5];
        for (a, b) in s.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(cw_identity_residual(&w, &PolyT(vec![1.0, 1.0])) < 1e-15);
    }

    #[test]
    fn flat_w_inv_is_t() {
        let w = w_inv_closed(&PolyT::constant(1.0)).unwrap();
        assert_eq!(w.series(4), vec![0.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn requires_unit_constant_term() {
        assert!(w_inv_closed(&PolyT(vec![2.0, 1.0])).is_err());
    }

    #[test]
    fn fubini_study_spectrum() {
        let h = builtin_metric("fubini_study_chart:1,1", 12).unwrap();
        let s = ricci_spectrum(&h, 1e-6).unwrap();
        assert!((s.eigenvalues[0] - 2.0).abs() < 1e-9);
        let h = builtin_metric("fubini_study_chart:1,2", 12).unwrap();
        let s = ricci_spectrum(&h, 1e-6).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn omega_determinant_matches_p() {
        let h = builtin_metric("fubini_study_chart:2,1", 10).unwrap();
        let rho = ricci_form(&h.h).unwrap();
        let spec = ricci_spectrum(&h, 1e-6).unwrap();
        let om = omega_of_t(&h.h, &rho, 3).unwrap();
        assert!(om.det_deviation(&p_of_t(&spec)).unwrap() < 1e-10);
    }

    #[test]
    fn calibrates_fubini_study() {
        let h = builtin_metric("fubini_study_chart:1,1", 12).unwrap();
        let sol = solve(&h, &SolverConfig::new(1.0, 5, 12)).unwrap();
        let rep = calibrate(&sol, 1e-9).unwrap();
        assert_eq!(rep.kappa, Some(4.0));
        assert!(rep.deviation <= 1e-9, "{}", rep.deviation);
    }

    #[test]
    fn rejects_varying_spectrum() {
        let h = builtin_metric("perturbed_flat:1,0.1,7,4", 10).unwrap();
        let sol = solve(&h, &SolverConfig::new(1.0, 3, 10)).unwrap();
        assert!(matches!(calibrate(&sol, 1e-9), Err(Error::Precondition(_))));
    }
}
