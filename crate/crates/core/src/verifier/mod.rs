//! Residual checks of the identities a solver output must satisfy.
//!
//! Every identity is evaluated coefficientwise in `t` and per homogeneous
//! spatial degree block, only through the degrees both sides are valid for.
//! A block's residual is scaled by the largest term entering the same
//! `t`-order at this or any lower degree:
//!
//! ```text
//! residual = max |sum of terms| / max(1, max |term at this t-order, degree <= d|)
//! ```
//!
//! so an identity between numbers of size 1e3 is judged relative to 1e3,
//! while small quantities are judged absolutely. Rounding error in a degree
//! block comes from products of lower blocks, hence the running maximum:
//! spatially constant series leave only noise from their large constant
//! terms in the higher blocks, while a defect in a low block is not hidden
//! behind large high-degree coefficients.
//!
//! All identities involving `w = (1/t + v_t) / c` are rewritten in the
//! regular quantities `v` and `w_inv`. The pole `1/(ct)` is spatially
//! constant, so it drops out of every spatial derivative of `w`.

mod curvature;
mod quadrature;
mod smoothness;

pub use curvature::{curvature_and_class, curvature_form, ClassIntegral, CurvatureForm, CurvatureReport};
pub use quadrature::gauss_legendre;
pub use smoothness::{smoothness_check, SmoothnessReport};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::jet::{Jet, TJet};
use crate::kahler::{mixed_hessian_entry, HermitianJetMatrix};
use crate::solver::Solution;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }

    /// Combines verdicts: any failure fails, all-skipped is skipped.
    pub fn combine(items: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Skipped;
        for v in items {
            out = match (out, v) {
                (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
                (Verdict::Pass, _) | (_, Verdict::Pass) => Verdict::Pass,
                _ => Verdict::Skipped,
            };
        }
        out
    }
}

/// One `(t-order, degree)` block of one identity.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualEntry {
    pub identity: String,
    pub t_order: usize,
    pub degree: usize,
    pub residual: f64,
    pub absolute: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub identity: String,
    pub description: String,
    pub verdict: Verdict,
    pub max_residual: f64,
    /// `(t_order, highest degree checked)` for each order.
    pub orders_checked: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
    #[serde(skip)]
    pub entries: Vec<ResidualEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub check: String,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub identities: Vec<IdentityResult>,
}

impl ResidualReport {
    fn new(check: &str, tolerance: f64, identities: Vec<IdentityResult>) -> ResidualReport {
        ResidualReport {
            check: check.into(),
            tolerance,
            verdict: Verdict::combine(identities.iter().map(|i| i.verdict)),
            identities,
        }
    }

    pub fn identity(&self, name: &str) -> Option<&IdentityResult> {
        self.identities.iter().find(|i| i.identity == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.identities.iter().fold(0.0, |m, i| m.max(i.max_residual))
    }

    pub fn entries(&self) -> impl Iterator<Item = &ResidualEntry> {
        self.identities.iter().flat_map(|i| i.entries.iter())
    }
}

/// Collects per-block maxima of a residual and of its terms.
pub(crate) struct Accumulator {
    identity: String,
    description: String,
    tolerance: f64,
    /// `(order, degree) -> (max |residual|, max |term|)`
    blocks: BTreeMap<(usize, usize), (f64, f64)>,
}

impl Accumulator {
    pub(crate) fn new(identity: &str, description: &str, tolerance: f64) -> Accumulator {
        Accumulator {
            identity: identity.into(),
            description: description.into(),
            tolerance,
            blocks: BTreeMap::new(),
        }
    }

    /// Records `sum(terms)` as the order-`t_order` residual.
    pub(crate) fn add(&mut self, t_order: usize, terms: &[Jet]) -> Result<()> {
        self.add_scaled(t_order, terms, &[])
    }

    /// As [`Accumulator::add`], with extra jets that only enter the scale:
    /// majorants of terms computed through cancelling recursions.
    pub(crate) fn add_scaled(&mut self, t_order: usize, terms: &[Jet], bounds: &[Jet]) -> Result<()> {
        let mut sum = terms[0].clone();
        for t in &terms[1..] {
            sum = sum.try_add(t)?;
        }
        for d in 0..=sum.valid_degree() {
            let term_max = terms
                .iter()
                .chain(bounds)
                .fold(0.0f64, |m, t| m.max(t.max_abs_in_degree(d)));
            let e = self.blocks.entry((t_order, d)).or_insert((0.0, 0.0));
            e.0 = e.0.max(sum.max_abs_in_degree(d));
            e.1 = e.1.max(term_max);
        }
        Ok(())
    }

    pub(crate) fn finish(self) -> IdentityResult {
        if self.blocks.is_empty() {
            return skipped(&self.identity, &self.description, "no orders within validity");
        }
        let mut entries = Vec::with_capacity(self.blocks.len());
        let mut orders: BTreeMap<usize, usize> = BTreeMap::new();
        // blocks iterate by order, then ascending degree
        let mut running: (usize, f64) = (usize::MAX, 1.0);
        let mut worst: f64 = 0.0;
        for (&(t_order, degree), &(abs, scale)) in &self.blocks {
            if running.0 != t_order {
                running = (t_order, 1.0);
            }
            running.1 = running.1.max(scale);
            let residual = abs / running.1;
            worst = worst.max(residual);
            let top = orders.entry(t_order).or_insert(0);
            *top = (*top).max(degree);
            entries.push(ResidualEntry {
                identity: self.identity.clone(),
                t_order,
                degree,
                residual,
                absolute: abs,
                tolerance: self.tolerance,
                verdict: if residual <= self.tolerance { Verdict::Pass } else { Verdict::Fail },
            });
        }
        IdentityResult {
            verdict: if worst <= self.tolerance { Verdict::Pass } else { Verdict::Fail },
            identity: self.identity,
            description: self.description,
            max_residual: worst,
            orders_checked: orders.into_iter().collect(),
            skip_reason: None,
            entries,
        }
    }
}

pub(crate) fn skipped(identity: &str, description: &str, reason: &str) -> IdentityResult {
    IdentityResult {
        identity: identity.into(),
        description: description.into(),
        verdict: Verdict::Skipped,
        max_residual: 0.0,
        orders_checked: Vec::new(),
        skip_reason: Some(reason.into()),
        entries: Vec::new(),
    }
}

/// `1 + t v_t` through order `K`.
fn one_plus_t_vt(sol: &Solution) -> TJet {
    sol.one_plus_t_vt()
}

/// Checks the defining system:
///
/// * `pp`: `H(v) + c g_t = 0`, orders `0..K-1`;
/// * `toda2`: `(e^u)_t = c det g`, i.e. `(k+1) (e^v)_k = c (det g)_k`,
///   orders `0..K`;
/// * `cw`: `u_t = c w`, i.e. `w_inv (1 + t v_t) = c t`, orders `0..K`;
/// * `u`: `det g = w e^u`, i.e. `w_inv det g = e^u`, orders `0..K`.
pub fn residual_system(sol: &Solution, tol: f64) -> Result<ResidualReport> {
    let n = sol.n();
    let c = sol.config.c;
    let k_max = sol.reached_order;

    let mut pp = Accumulator::new("pp", "4 u_{z_i zbar_j} + c (g_ij)_t = 0", tol);
    for k in 0..k_max {
        let vk = sol.v.coeff(k);
        if vk.valid_degree() < 2 {
            break;
        }
        for i in 0..n {
            for j in 0..n {
                let h = mixed_hessian_entry(vk, i, j)?;
                let g = sol.g.get(i, j).coeff(k + 1).scale(c * (k + 1) as f64);
                pp.add(k, &[h, g])?;
            }
        }
    }

    // e^v, det g and their products cancel heavily when v grows
    // geometrically in t; their majorants set the scale
    let det = sol.det_g()?;
    let det_major = sol.g.map(TJet::modulus).permanent()?;
    let ev = sol.v.exp()?;
    let ev_major = sol.v.modulus().exp()?;
    let mut toda = Accumulator::new("toda2", "(e^u)_t = c det g", tol);
    for k in 0..=k_max {
        let kk = (k + 1) as f64;
        toda.add_scaled(
            k,
            &[ev.coeff(k).scale(kk), det.coeff(k).scale(-c)],
            &[ev_major.coeff(k).scale(kk), det_major.coeff(k).scale(c.abs())],
        )?;
    }

    let opt = one_plus_t_vt(sol);
    let w_major = sol.w_inv.modulus();
    let lhs = sol.w_inv.try_mul(&opt)?;
    let lhs_major = w_major.try_mul(&opt.modulus())?;
    let mut cw = Accumulator::new("cw", "u_t = c w", tol);
    for k in 0..=k_max {
        let ct = if k == 1 { c } else { 0.0 };
        let a = lhs.coeff(k);
        cw.add_scaled(k, &[a.clone(), a.constant_like(-ct)], &[lhs_major.coeff(k).clone()])?;
    }

    let wd = sol.w_inv.try_mul(&det)?;
    let wd_major = w_major.try_mul(&det_major)?;
    let eu_major = ev_major.shift_up();
    let mut u = Accumulator::new("u", "det g = w e^u", tol);
    for k in 0..=k_max {
        u.add_scaled(
            k,
            &[wd.coeff(k).clone(), sol.exp_u.coeff(k).scale(-1.0)],
            &[wd_major.coeff(k).clone(), eu_major.coeff(k).clone()],
        )?;
    }

    Ok(ResidualReport::new(
        "system",
        tol,
        vec![pp.finish(), toda.finish(), cw.finish(), u.finish()],
    ))
}

/// Checks `4 w_{z_i zbar_j} + (g_ij)_tt = 0`, which follows from the
/// system when `c != 0`. With `w = (1/t + v_t)/c` this reads
/// `(1/c) H(v_t) + g_tt = 0`, checked through order `K - 2`.
pub fn residual_consequence(sol: &Solution, tol: f64) -> Result<ResidualReport> {
    let desc = "4 w_{z_i zbar_j} + (g_ij)_tt = 0";
    let k_max = sol.reached_order;
    if k_max < 2 {
        return Ok(ResidualReport::new(
            "consequence",
            tol,
            vec![skipped("new", desc, "needs t-order at least 2")],
        ));
    }
    let n = sol.n();
    let c = sol.config.c;
    let vt = sol.v.t_derive();
    let gtt = sol.g.t_derive().t_derive();
    let mut acc = Accumulator::new("new", desc, tol);
    for k in 0..=k_max - 2 {
        let a = vt.coeff(k);
        if a.valid_degree() < 2 {
            break;
        }
        for i in 0..n {
            for j in 0..n {
                let h = mixed_hessian_entry(a, i, j)?.scale(1.0 / c);
                acc.add(k, &[h, gtt.get(i, j).coeff(k).clone()])?;
            }
        }
    }
    Ok(ResidualReport::new("consequence", tol, vec![acc.finish()]))
}

/// `tr(g^{-1} A)` for a series matrix `A`.
pub(crate) fn trace_inverse_times(
    g: &HermitianJetMatrix<TJet>,
    a: &HermitianJetMatrix<TJet>,
) -> Result<TJet> {
    let n = g.n();
    let det = g.det()?;
    if n == 1 {
        return a.get(0, 0).try_div(&det);
    }
    let adj = g.adjugate()?;
    let mut acc: Option<TJet> = None;
    for i in 0..n {
        for k in 0..n {
            let term = adj.get(i, k).try_mul(a.get(k, i))?;
            acc = Some(match acc {
                None => term,
                Some(s) => s.try_add(&term)?,
            });
        }
    }
    acc.expect("n >= 1").try_div(&det)
}

/// `Delta_G t = w^{-1} g^{ij} (g_ij)_t + (w^{-1})_t`, which must equal `c`.
pub fn laplacian_moment(sol: &Solution, tol: f64) -> Result<ResidualReport> {
    let desc = "Delta_G t = c";
    if sol.reached_order < 1 {
        return Ok(ResidualReport::new(
            "laplacian",
            tol,
            vec![skipped("laplacian", desc, "needs t-order at least 1")],
        ));
    }
    let c = sol.config.c;
    let gt = sol.g.t_derive();
    let tr = trace_inverse_times(&sol.g, &gt)?;
    let first = sol.w_inv.try_mul(&tr)?;
    let second = sol.w_inv.t_derive();
    let mut acc = Accumulator::new("laplacian", desc, tol);
    for k in 0..=first.max_order().min(second.max_order()) {
        let a = first.coeff(k);
        let target = if k == 0 { c } else { 0.0 };
        acc.add(k, &[a.clone(), second.coeff(k).clone(), a.constant_like(-target)])?;
    }
    Ok(ResidualReport::new("laplacian", tol, vec![acc.finish()]))
}
