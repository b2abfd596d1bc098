//! Coefficient bounds for the nonlinearity of the reduced equation.
//!
//! In the shifted unknowns `Z = v - v_0` and `Y_ij = int_0^t L_ij(Z)` with
//! `L_ij = -H_ij / c`, the metric is `g = h + t A + Y` where
//! `A = L(v_0) = g_1`, and the scalar equation reads
//!
//! ```text
//! (t d/dt + 1) Z = t b + G(t, Z, Y),
//! G = e^{-Z} det(I + h^{-1} (t A + Y)) - 1 + Z - t b,   b = tr(h^{-1} A).
//! ```
//!
//! Writing `det(I + h^{-1}(tA + Y)) = sum D_{p,beta}(x) t^p Y^beta`, the
//! coefficient of `t^p Z^q Y^beta` in `G` is `(-1)^q D_{p,beta} / q!`, except
//! for the three low-weight monomials `1`, `Z`, `t` which cancel exactly.

use std::collections::BTreeMap;

use serde::Serialize;

use super::sampling::polydisc_points;
use crate::error::{Error, Result};
use crate::jet::C64;
use crate::solver::Solution;

/// Bound on the coefficients of `t^p Z^q U^s X^alpha Y^beta` with
/// `|alpha| = alpha`, `|beta| = beta`, summed over the multi-indices of those
/// lengths.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermBound {
    pub p: usize,
    pub q: usize,
    pub s: usize,
    pub alpha: usize,
    pub beta: usize,
    pub bound: f64,
}

impl TermBound {
    /// `p + q + s + |alpha| + 2|beta|`.
    pub fn weight(&self) -> usize {
        self.p + self.q + self.s + self.alpha + 2 * self.beta
    }

    /// Total power of `Y` the term contributes in the majorant equation.
    pub fn y_power(&self) -> usize {
        self.q + self.s + self.alpha + self.beta
    }
}

/// Source of the finitely many coefficient bounds the recursion needs.
pub trait BoundProvider {
    /// Highest order `m` whose recursion step is fully covered.
    fn max_order(&self) -> usize;
    fn terms(&self) -> &[TermBound];
}

/// A fixed list of bounds, complete through `max_order`.
#[derive(Clone, Debug)]
pub struct ExplicitBounds {
    pub max_order: usize,
    pub terms: Vec<TermBound>,
}

impl BoundProvider for ExplicitBounds {
    fn max_order(&self) -> usize {
        self.max_order
    }
    fn terms(&self) -> &[TermBound] {
        &self.terms
    }
}

/// Sparse polynomial in `(t, Y_00, Y_01, ...)`.
type Poly = BTreeMap<Vec<u8>, C64>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(C64::new(0.0, 0.0)) += ca * cb;
        }
    }
    out
}

fn poly_add_scaled(acc: &mut Poly, a: &Poly, s: f64) {
    for (e, c) in a {
        *acc.entry(e.clone()).or_insert(C64::new(0.0, 0.0)) += c * s;
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<(Vec<usize>, f64)>) {
        if prefix.len() == n {
            let mut sign = 1.0;
            for i in 0..n {
                for j in i + 1..n {
                    if prefix[i] > prefix[j] {
                        sign = -sign;
                    }
                }
            }
            out.push((prefix.clone(), sign));
            return;
        }
        for k in 0..n {
            if !prefix.contains(&k) {
                prefix.push(k);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), n, &mut out);
    out
}

/// `det(I + t B + hinv Y)` as a polynomial in `t` and the `n^2` entries of `Y`.
fn det_polynomial(hinv: &nalgebra::DMatrix<C64>, b: &nalgebra::DMatrix<C64>) -> Poly {
    let n = hinv.nrows();
    let nv = 1 + n * n;
    let entry = |i: usize, k: usize| -> Poly {
        let mut p = Poly::new();
        let zero = vec![0u8; nv];
        if i == k {
            p.insert(zero.clone(), C64::new(1.0, 0.0));
        }
        let mut et = zero.clone();
        et[0] = 1;
        p.insert(et, b[(i, k)]);
        // (h^{-1} Y)_{ik} = sum_j hinv_ij Y_jk
        for j in 0..n {
            let mut ey = zero.clone();
            ey[1 + j * n + k] = 1;
            p.insert(ey, hinv[(i, j)]);
        }
        p
    };
    let entries: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|k| entry(i, k)).collect()).collect();
    let mut det = Poly::new();
    for (perm, sign) in permutations(n) {
        let mut term: Poly = [(vec![0u8; nv], C64::new(1.0, 0.0))].into_iter().collect();
        for (i, &k) in perm.iter().enumerate() {
            term = poly_mul(&term, &entries[i][k]);
        }
        poly_add_scaled(&mut det, &term, sign);
    }
    det
}

/// Bounds sampled from the solution's initial data on the polydisc of
/// radius `radius` in the complexified chart.
#[derive(Clone, Debug, Serialize)]
pub struct SampledBounds {
    pub radius: f64,
    pub sample_points: usize,
    /// `S_{p,b} = sum_{|beta| = b} sup |D_{p,beta}|`, keyed by `(p, b)`.
    pub det_sups: BTreeMap<String, f64>,
    max_order: usize,
    terms: Vec<TermBound>,
}

impl BoundProvider for SampledBounds {
    fn max_order(&self) -> usize {
        self.max_order
    }
    fn terms(&self) -> &[TermBound] {
        &self.terms
    }
}

pub const BOUND_SAMPLES: usize = 96;

impl SampledBounds {
    /// Covers recursion orders through `max_order` (powers `Z^q` with
    /// `q <= max_order`).
    pub fn from_solution(sol: &Solution, radius: f64, max_order: usize) -> Result<SampledBounds> {
        if sol.reached_order < 1 {
            return Err(Error::MissingBounds("needs the first-order metric coefficient".into()));
        }
        let n = sol.n();
        let h = &sol.input.h;
        let a = sol.g.coeff(1);
        let mut sups: BTreeMap<(usize, usize), BTreeMap<Vec<u8>, f64>> = BTreeMap::new();
        let points = polydisc_points(2 * n, radius, BOUND_SAMPLES);
        for pt in &points {
            let hm = h.eval_complex(pt);
            let hinv = hm
                .try_inverse()
                .ok_or_else(|| Error::SingularInput("h singular on the bound polydisc".into()))?;
            let b = &hinv * a.eval_complex(pt);
            for (e, coef) in det_polynomial(&hinv, &b) {
                let p = e[0] as usize;
                let bl: usize = e[1..].iter().map(|&x| x as usize).sum();
                let slot = sups.entry((p, bl)).or_default().entry(e).or_insert(0.0);
                *slot = slot.max(coef.norm());
            }
        }
        let mut det_sups = BTreeMap::new();
        let mut terms = Vec::new();
        for (&(p, bl), per_beta) in &sups {
            let s: f64 = per_beta.values().sum();
            det_sups.insert(format!("p{p}_beta{bl}"), s);
            if s == 0.0 {
                continue;
            }
            let mut fact = 1.0;
            for q in 0..=max_order {
                if q > 0 {
                    fact *= q as f64;
                }
                let t = TermBound {
                    p,
                    q,
                    s: 0,
                    alpha: 0,
                    beta: bl,
                    bound: s / fact,
                };
                if t.weight() >= 2 {
                    terms.push(t);
                }
            }
        }
        Ok(SampledBounds {
            radius,
            sample_points: points.len(),
            det_sups,
            max_order,
            terms,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn det_polynomial_identity() {
        let n = 2;
        let hinv = DMatrix::<C64>::identity(n, n);
        let b = DMatrix::<C64>::from_diagonal_element(n, n, C64::new(2.0, 0.0));
        let d = det_polynomial(&hinv, &b);
        // det(I(1 + 2t) + Y): t-part (1 + 2t)^2
        assert_eq!(d[&vec![0, 0, 0, 0, 0]], C64::new(1.0, 0.0));
        assert_eq!(d[&vec![1, 0, 0, 0, 0]], C64::new(4.0, 0.0));
        assert_eq!(d[&vec![2, 0, 0, 0, 0]], C64::new(4.0, 0.0));
        // Y_00 Y_11 - Y_01 Y_10
        assert_eq!(d[&vec![0, 1, 0, 0, 1]], C64::new(1.0, 0.0));
        assert_eq!(d[&vec![0, 0, 1, 1, 0]], C64::new(-1.0, 0.0));
        // t Y_00 has coefficient 2 (from (1 + 2t) Y_00 ... and Y_11)
        assert_eq!(d[&vec![1, 1, 0, 0, 0]], C64::new(2.0, 0.0));
    }

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().map(|(_, s)| s).sum::<f64>(), 0.0);
    }
}
