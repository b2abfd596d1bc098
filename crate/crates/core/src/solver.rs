//! Series solution of the singular Cauchy problem for the Ricci-flat
//! extension.
//!
//! With `e^u = t e^v` the unknowns are the regular series `v(t, x)` and
//! `g_ij(t, x)`, subject to
//!
//! ```text
//! H(v) + c g_t = 0,            g(0) = h,
//! t v_t = -1 + c e^{-v} det g,  e^{v(0)} = c det h,
//! ```
//!
//! where `H = 4 d dbar` is [`complex_mixed_hessian`]. Order by order:
//! the `t^m` part of the first equation gives `g_{m+1} = -H(v_m) / (c (m+1))`;
//! the `t^{m+1}` part of the second is linear in `v_{m+1}` with coefficient
//! `-c e^{-v_0} det h = -1`, so `(m+2) v_{m+1}` equals the `t^{m+1}`
//! coefficient of `c e^{-v} det g` evaluated with `v_{m+1} = 0`.
//!
//! The state caches the coefficients of `e^{-v}` and of the row-leading
//! minors of `g`, so a step costs `O(m)` jet products rather than
//! re-expanding both series.
//!
//! Each order consumes two spatial degrees: order `m` is trusted through
//! degree `D - 2m`. When the requested order outruns the degree budget the
//! solve stops early and the reached order is recorded.

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{Jet, TJet};
use crate::kahler::{mixed_hessian_entry, HermitianJetMatrix, InitialData};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverConfig {
    pub c: f64,
    /// Requested `t`-truncation order `M`.
    pub order: usize,
    /// Spatial degree cap `D`.
    pub degree: usize,
    pub tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            c: 1.0,
            order: 8,
            degree: 20,
            tolerance: 1e-9,
        }
    }
}

impl SolverConfig {
    pub fn new(c: f64, order: usize, degree: usize) -> SolverConfig {
        SolverConfig {
            c,
            order,
            degree,
            ..SolverConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.c == 0.0 || !self.c.is_finite() {
            return Err(Error::InvalidInput("c must be a finite nonzero real".into()));
        }
        if self.order == 0 {
            return Err(Error::InvalidInput("t-order M must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Highest order the degree budget supports.
    pub fn reachable_order(&self) -> usize {
        self.order.min(self.degree / 2)
    }
}

/// Partial solution: `v_0..v_m` and `g_0..g_m`.
#[derive(Clone, Debug)]
pub struct SolverState {
    config: SolverConfig,
    v: Vec<Jet>,
    /// `g[i * n + j][k]` is the `t^k` coefficient of `g_ij`.
    g: Vec<Vec<Jet>>,
    /// Coefficients of `e^{-v}`, final through the current order.
    e_neg_v: Vec<Jet>,
    /// `minors[S][k]`: `t^k` coefficient of the determinant of rows
    /// `0..|S|` and the columns in bitmask `S`; `minors[full]` is `det g`.
    minors: Vec<Vec<Jet>>,
    n: usize,
}

impl SolverState {
    pub fn order(&self) -> usize {
        self.v.len() - 1
    }

    pub fn v(&self) -> &[Jet] {
        &self.v
    }

    pub fn g_entry(&self, i: usize, j: usize) -> &[Jet] {
        &self.g[i * self.n + j]
    }

    /// Whether another step fits in the degree budget.
    pub fn can_step(&self) -> bool {
        self.v[self.order()].valid_degree() >= 2
    }

    /// Advances from order `m` to `m + 1`.
    pub fn step(mut self) -> Result<SolverState> {
        let m = self.order();
        let c = self.config.c;
        let n = self.n;
        let vm = &self.v[m];
        if vm.valid_degree() < 2 {
            return Err(Error::ValidityExhausted {
                what: format!("solver step to order {}", m + 1),
                needed: 2,
                available: vm.valid_degree(),
            });
        }
        let factor = -1.0 / (c * (m + 1) as f64);
        for i in 0..n {
            for j in 0..n {
                let next = mixed_hessian_entry(vm, i, j)?.scale(factor);
                self.g[i * n + j].push(next);
            }
        }
        self.extend_minors(m + 1)?;
        let det_next = self.minors[(1 << n) - 1][m + 1].clone();

        // e^{-v} at order m+1 with v_{m+1} = 0, from
        // k E_k = -sum_j j v_j E_{k-j}
        let mut e_partial = self.v[0].zero_like(self.v[0].valid_degree());
        for j in 1..=m {
            let term = self.v[j].try_mul(&self.e_neg_v[m + 1 - j])?.scale(-(j as f64));
            e_partial = e_partial.try_add(&term)?;
        }
        let e_partial = e_partial.scale(1.0 / (m + 1) as f64);

        let det = &self.minors[(1 << n) - 1];
        let mut sum = e_partial.try_mul(&det[0])?;
        for k in 0..=m {
            let d = if k == 0 { &det_next } else { &det[m + 1 - k] };
            sum = sum.try_add(&self.e_neg_v[k].try_mul(d)?)?;
        }
        let v_next = sum.scale(c / (m + 2) as f64);
        let e_next = e_partial.try_sub(&v_next.try_mul(&self.e_neg_v[0])?)?;
        self.e_neg_v.push(e_next);
        self.v.push(v_next);
        Ok(self)
    }

    /// Appends the order-`k` coefficient of every minor; needs `g_k`.
    fn extend_minors(&mut self, k: usize) -> Result<()> {
        let n = self.n;
        for set in 1usize..(1 << n) {
            let row = set.count_ones() as usize - 1;
            let mut acc: Option<Jet> = None;
            let mut pos = 0;
            for col in 0..n {
                if set & (1 << col) == 0 {
                    continue;
                }
                let sign = if (row + pos) % 2 == 0 { 1.0 } else { -1.0 };
                pos += 1;
                let rest = set & !(1 << col);
                let entry = &self.g[row * n + col];
                let term = if rest == 0 {
                    entry[k].clone()
                } else {
                    let sub = &self.minors[rest];
                    let mut t = sub[0].try_mul(&entry[k])?;
                    for i in 1..=k {
                        t = t.try_add(&sub[i].try_mul(&entry[k - i])?)?;
                    }
                    t
                }
                .scale(sign);
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.try_add(&term)?,
                });
            }
            let value = acc.expect("nonempty column set");
            self.minors[set].push(value);
        }
        Ok(())
    }
}

/// Sets up order zero: `v_0 = log(c det h)`, `g_0 = h`.
pub fn init_state(input: &InitialData, config: &SolverConfig) -> Result<SolverState> {
    config.validate()?;
    if input.max_degree() != config.degree {
        return Err(Error::InvalidInput(format!(
            "initial data has degree cap {}, solver configured for {}",
            input.max_degree(),
            config.degree
        )));
    }
    let det = input.det()?;
    let base = det.constant_term() * config.c;
    if base.re <= 0.0 || base.im.abs() > 1e-12 * base.re.abs().max(1.0) {
        return Err(Error::InvalidInput(format!(
            "c * det h at the base point must be real positive, got {base}"
        )));
    }
    let scaled = det.scale(config.c);
    let v0 = scaled.log()?;
    // e^{v0} = c det h is what makes the linear coefficient exactly -1
    let dev = v0.exp().scaled_deviation(&scaled);
    if dev > config.tolerance {
        return Err(Error::SingularInput(format!(
            "exp(v0) differs from c det h by {dev:e}"
        )));
    }
    let n = input.n();
    let g = input.h.entries().iter().map(|e| vec![e.clone()]).collect();
    let mut state = SolverState {
        config: config.clone(),
        e_neg_v: vec![v0.scale(-1.0).exp()],
        v: vec![v0],
        g,
        minors: vec![Vec::new(); 1 << n],
        n,
    };
    state.extend_minors(0)?;
    Ok(state)
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub config: SolverConfig,
    pub input: InitialData,
    /// Highest order actually computed (`<= config.order`).
    pub reached_order: usize,
    /// `v = u - log t`.
    pub v: TJet,
    pub g: HermitianJetMatrix<TJet>,
    /// `e^u = t e^v`, zero constant term.
    pub exp_u: TJet,
    /// `w^{-1} = c t / (1 + t v_t)`, zero constant term.
    pub w_inv: TJet,
    /// Scaled disagreement between `w_inv` and `c int_0^t det g / det g`.
    pub w_inv_discrepancy: f64,
}

impl Solution {
    pub fn n(&self) -> usize {
        self.input.n()
    }

    /// `u_reg` equals `v`.
    pub fn u_reg(&self) -> &TJet {
        &self.v
    }

    pub fn det_g(&self) -> Result<TJet> {
        self.g.det()
    }

    /// `1 + t v_t`.
    pub fn one_plus_t_vt(&self) -> TJet {
        let mut s = self.v.t_derive().shift_up_to(self.v.max_order());
        let one = self.v.coeff(0).constant_like(1.0);
        *s.coeff_mut(0) = one;
        s
    }
}

impl TJet {
    /// `t * self`, extended to exactly `max_order`.
    pub(crate) fn shift_up_to(&self, max_order: usize) -> TJet {
        let mut coeffs = Vec::with_capacity(max_order + 1);
        coeffs.push(self.coeff(0).zero_like(self.max_degree()));
        for k in 1..=max_order {
            coeffs.push(if k - 1 <= self.max_order() {
                self.coeff(k - 1).clone()
            } else {
                self.coeff(0).zero_like(0)
            });
        }
        TJet::new(coeffs).expect("shared basis")
    }
}

/// Runs the recursion up to the requested order (or as far as the degree
/// budget allows) and assembles `e^u` and `w^{-1}`.
pub fn solve(input: &InitialData, config: &SolverConfig) -> Result<Solution> {
    if config.degree < 2 * config.order + 2 {
        warn!(
            "degree cap {} below 2M+2 = {}; high orders lose spatial validity",
            config.degree,
            2 * config.order + 2
        );
    }
    let mut state = init_state(input, config)?;
    while state.order() < config.order {
        if !state.can_step() {
            if state.order() == 0 {
                return Err(Error::ValidityExhausted {
                    what: "first solver step".into(),
                    needed: 2,
                    available: state.v[0].valid_degree(),
                });
            }
            warn!(
                "stopping at order {} of {}: spatial degree budget exhausted",
                state.order(),
                config.order
            );
            break;
        }
        state = state.step()?;
    }
    assemble(input, config, state)
}

fn assemble(input: &InitialData, config: &SolverConfig, state: SolverState) -> Result<Solution> {
    let n = state.n;
    let reached = state.order();
    let c = config.c;
    let v = TJet::new(state.v)?;
    let g = HermitianJetMatrix::from_entries(
        n,
        state.g.into_iter().map(TJet::new).collect::<Result<Vec<_>>>()?,
    )?;

    let exp_u = v.exp()?.shift_up();

    let mut sol = Solution {
        config: config.clone(),
        input: input.clone(),
        reached_order: reached,
        w_inv: exp_u.clone(),
        v,
        g,
        exp_u,
        w_inv_discrepancy: 0.0,
    };
    let denom = sol.one_plus_t_vt();
    let ones = TJet::constant_in_t(&denom.coeff(0).clone(), reached);
    sol.w_inv = ones.try_div(&denom)?.shift_up().scale(c);

    let det = sol.det_g()?;
    let alt = det.t_integrate().scale(c).try_div(&det)?;
    sol.w_inv_discrepancy = alt
        .coeffs()
        .iter()
        .zip(sol.w_inv.coeffs())
        .fold(0.0, |m, (a, b)| m.max(b.scaled_deviation(a)));
    if sol.w_inv_discrepancy > config.tolerance {
        warn!(
            "w_inv disagrees with c*int(det g)/det g by {:e}",
            sol.w_inv_discrepancy
        );
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kahler::builtin_metric;

    #[test]
    fn flat_initial_state() {
        let h = builtin_metric("flat:2", 6).unwrap();
        let st = init_state(&h, &SolverConfig::new(1.0, 2, 6)).unwrap();
        assert!(st.v()[0].is_zero());
        let st = init_state(&builtin_metric("flat:1", 6).unwrap(), &SolverConfig::new(2.0, 2, 6)).unwrap();
        assert!((st.v()[0].constant_term().re - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive_c_det_h() {
        let h = builtin_metric("flat:1", 6).unwrap();
        let err = init_state(&h, &SolverConfig::new(-1.0, 2, 6)).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        let err = init_state(&h, &SolverConfig::new(0.0, 2, 6)).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn flat_steps_are_trivial() {
        let h = builtin_metric("flat:2", 10).unwrap();
        let sol = solve(&h, &SolverConfig::new(1.0, 4, 10)).unwrap();
        assert_eq!(sol.reached_order, 4);
        for k in 1..=4 {
            assert!(sol.v.coeff(k).is_zero());
            assert!(sol.g.get(0, 0).coeff(k).is_zero());
        }
        assert_eq!(sol.w_inv.coeff(1).constant_term().re, 1.0);
        assert!(sol.w_inv.coeff(2).is_zero());
    }

    #[test]
    fn c_two_doubles_w_inv() {
        let h = builtin_metric("flat:1", 8).unwrap();
        let sol = solve(&h, &SolverConfig::new(2.0, 3, 8)).unwrap();
        assert_eq!(sol.w_inv.coeff(1).constant_term().re, 2.0);
        assert!(sol.w_inv.coeff(0).is_zero());
    }

    #[test]
    fn stops_at_degree_budget() {
        let h = builtin_metric("fubini_study_chart:1,1", 6).unwrap();
        let sol = solve(&h, &SolverConfig::new(1.0, 8, 6)).unwrap();
        assert_eq!(sol.reached_order, 3);
        let st = init_state(&h, &SolverConfig::new(1.0, 8, 6)).unwrap();
        let st = st.step().unwrap().step().unwrap().step().unwrap();
        assert!(matches!(st.step(), Err(Error::ValidityExhausted { .. })));
    }

    #[test]
    fn degree_mismatch_is_invalid() {
        let h = builtin_metric("flat:1", 6).unwrap();
        assert!(matches!(
            solve(&h, &SolverConfig::new(1.0, 2, 8)),
            Err(Error::InvalidInput(_))
        ));
    }
}
