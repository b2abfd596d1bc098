//! Truncated multivariate Taylor polynomials ("jets") and power series in
//! `t` with jet coefficients.
//!
//! A [`Jet`] lives in the real coordinates `(x1, y1, ..., xn, yn)` of a
//! complex `n`-dimensional chart and stores every monomial of total degree
//! at most `D` densely, in the order fixed by [`Basis`]. Alongside the
//! coefficients it carries a *valid degree*: the degree through which the
//! coefficients are trusted. Operations propagate it (products take the
//! minimum, derivatives lose one) and only coefficients through it are
//! stored, so a jet is always exactly the polynomial it trusts and work
//! shrinks as validity is consumed.

mod basis;
mod series;

pub use basis::{Basis, MAX_SUPPORTED_DEGREE};
pub use series::TJet;

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Exponent vector of a monomial, one entry per real coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u8>);

impl MultiIndex {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Name of real coordinate `var`: `x1, y1, x2, y2, ...`.
pub fn coordinate_name(var: usize) -> String {
    let axis = if var % 2 == 0 { 'x' } else { 'y' };
    format!("{axis}{}", var / 2 + 1)
}

#[derive(Clone, Debug)]
pub struct Jet {
    basis: Arc<Basis>,
    coeffs: Vec<C64>,
    valid: usize,
}

impl Jet {
    /// Zero jet in complex dimension `n` with degree cap `max_degree`.
    pub fn zero(n: usize, max_degree: usize) -> Jet {
        let basis = Basis::shared(2 * n, max_degree);
        Jet {
            coeffs: vec![ZERO; basis.len()],
            valid: max_degree,
            basis,
        }
    }

    pub fn constant(n: usize, max_degree: usize, value: impl Into<C64>) -> Jet {
        let mut j = Jet::zero(n, max_degree);
        j.coeffs[0] = value.into();
        j
    }

    /// The real coordinate function number `var` (`x1` is 0, `y1` is 1, ...).
    pub fn coordinate(n: usize, max_degree: usize, var: usize) -> Jet {
        assert!(var < 2 * n, "coordinate {var} out of range");
        let mut j = Jet::zero(n, max_degree);
        if max_degree >= 1 {
            j.coeffs[1 + var] = C64::new(1.0, 0.0);
        }
        j
    }

    /// Builds a jet from `(exponents, coefficient)` pairs; monomials above
    /// the degree cap are dropped.
    pub fn from_terms<'a, I>(n: usize, max_degree: usize, terms: I) -> Result<Jet>
    where
        I: IntoIterator<Item = (&'a [u8], C64)>,
    {
        let mut j = Jet::zero(n, max_degree);
        for (exps, c) in terms {
            if exps.len() != 2 * n {
                return Err(Error::DimensionMismatch(format!(
                    "monomial has {} exponents, expected {}",
                    exps.len(),
                    2 * n
                )));
            }
            if let Some(idx) = j.basis.index_of(exps) {
                j.coeffs[idx] += c;
            }
        }
        Ok(j)
    }

    pub(crate) fn from_raw(basis: Arc<Basis>, mut coeffs: Vec<C64>, valid: usize) -> Jet {
        let valid = valid.min(basis.max_degree());
        coeffs.resize(basis.len_through(valid), ZERO);
        Jet {
            basis,
            coeffs,
            valid,
        }
    }

    /// Zero jet sharing this jet's basis, with the given valid degree.
    pub fn zero_like(&self, valid: usize) -> Jet {
        Jet::from_raw(self.basis.clone(), vec![ZERO; self.basis.len_through(valid)], valid)
    }

    pub fn constant_like(&self, value: impl Into<C64>) -> Jet {
        let mut j = self.zero_like(self.basis.max_degree());
        j.coeffs[0] = value.into();
        j
    }

    /// Complex dimension.
    pub fn n(&self) -> usize {
        self.basis.nvars() / 2
    }

    pub fn nvars(&self) -> usize {
        self.basis.nvars()
    }

    pub fn max_degree(&self) -> usize {
        self.basis.max_degree()
    }

    pub fn valid_degree(&self) -> usize {
        self.valid
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    /// Stored coefficients: every monomial through the valid degree.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Same as [`Jet::coeffs`].
    pub fn valid_coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> C64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, exps: &[u8]) -> C64 {
        self.basis
            .index_of(exps)
            .and_then(|i| self.coeffs.get(i).copied())
            .unwrap_or(ZERO)
    }

    pub fn multi_index(&self, idx: usize) -> MultiIndex {
        MultiIndex(self.basis.exponents(idx).to_vec())
    }

    /// Adds `value` to one monomial coefficient. Ignored above the valid
    /// degree.
    pub fn add_to_coeff(&mut self, exps: &[u8], value: C64) {
        if let Some(i) = self.basis.index_of(exps) {
            if let Some(c) = self.coeffs.get_mut(i) {
                *c += value;
            }
        }
    }

    /// Copy with the valid degree lowered to `valid` (never raised).
    pub fn with_valid_degree(&self, valid: usize) -> Jet {
        Jet::from_raw(self.basis.clone(), self.coeffs.clone(), valid.min(self.valid))
    }

    fn check_compatible(&self, other: &Jet, op: &str) -> Result<()> {
        if self.basis.nvars() != other.basis.nvars()
            || self.basis.max_degree() != other.basis.max_degree()
        {
            return Err(Error::DimensionMismatch(format!(
                "{op}: ({} vars, degree {}) vs ({} vars, degree {})",
                self.basis.nvars(),
                self.basis.max_degree(),
                other.basis.nvars(),
                other.basis.max_degree()
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other, "add")?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Jet::from_raw(self.basis.clone(), coeffs, self.valid.min(other.valid)))
    }

    pub fn try_sub(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other, "sub")?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Jet::from_raw(self.basis.clone(), coeffs, self.valid.min(other.valid)))
    }

    /// Truncated Cauchy product.
    pub fn try_mul(&self, other: &Jet) -> Result<Jet> {
        self.check_compatible(other, "mul")?;
        let cap = self.valid.min(other.valid);
        let b = &*self.basis;
        let mut out = vec![ZERO; b.len_through(cap)];
        for da in 0..=cap {
            accumulate(
                b,
                &self.coeffs,
                b.block(da),
                &other.coeffs,
                0..b.len_through(cap - da),
                C64::new(1.0, 0.0),
                &mut out,
                0,
            );
        }
        Ok(Jet::from_raw(self.basis.clone(), out, cap))
    }

    pub fn scale(&self, s: impl Into<C64>) -> Jet {
        let s = s.into();
        Jet::from_raw(
            self.basis.clone(),
            self.coeffs.iter().map(|c| c * s).collect(),
            self.valid,
        )
    }

    pub fn conj(&self) -> Jet {
        Jet::from_raw(
            self.basis.clone(),
            self.coeffs.iter().map(|c| c.conj()).collect(),
            self.valid,
        )
    }

    /// Coefficientwise modulus. Evaluating an expression on moduli bounds
    /// every intermediate coefficient of the same expression, which is the
    /// natural scale for its rounding error.
    pub fn modulus(&self) -> Jet {
        Jet::from_raw(
            self.basis.clone(),
            self.coeffs.iter().map(|c| C64::new(c.norm(), 0.0)).collect(),
            self.valid,
        )
    }

    /// Truncated exponential, via the Euler-operator recurrence
    /// `k F_[k] = sum_j j a_[j] F_[k-j]` on homogeneous parts.
    pub fn exp(&self) -> Jet {
        let b = &*self.basis;
        let cap = self.valid;
        let mut f = vec![ZERO; b.len_through(cap)];
        f[0] = self.coeffs[0].exp();
        for k in 1..=cap {
            let blk = b.block(k);
            let (lo, hi) = f.split_at_mut(blk.start);
            let hi = &mut hi[..blk.len()];
            for j in 1..=k {
                accumulate(
                    b,
                    &self.coeffs,
                    b.block(j),
                    lo,
                    b.block(k - j),
                    C64::new(j as f64, 0.0),
                    hi,
                    blk.start,
                );
            }
            let inv = 1.0 / k as f64;
            for c in hi.iter_mut() {
                *c *= inv;
            }
        }
        Jet::from_raw(self.basis.clone(), f, cap)
    }

    /// Truncated quotient `self / denom`; the denominator's constant term
    /// must be nonzero.
    pub fn try_div(&self, denom: &Jet) -> Result<Jet> {
        self.check_compatible(denom, "div")?;
        let a0 = denom.coeffs[0];
        if a0 == ZERO {
            return Err(Error::SingularInput(
                "division by a jet with zero constant term".into(),
            ));
        }
        let b = &*self.basis;
        let cap = self.valid.min(denom.valid);
        let inv0 = a0.inv();
        let mut q = self.coeffs[..b.len_through(cap)].to_vec();
        q[0] *= inv0;
        for k in 1..=cap {
            let blk = b.block(k);
            let (lo, hi) = q.split_at_mut(blk.start);
            let hi = &mut hi[..blk.len()];
            for j in 1..=k {
                accumulate(
                    b,
                    &denom.coeffs,
                    b.block(j),
                    lo,
                    b.block(k - j),
                    C64::new(-1.0, 0.0),
                    hi,
                    blk.start,
                );
            }
            for c in hi.iter_mut() {
                *c *= inv0;
            }
        }
        Ok(Jet::from_raw(self.basis.clone(), q, cap))
    }

    pub fn recip(&self) -> Result<Jet> {
        self.constant_like(1.0).try_div(self)
    }

    /// Truncated principal logarithm; the constant term must be nonzero.
    pub fn log(&self) -> Result<Jet> {
        let a0 = self.coeffs[0];
        if a0 == ZERO {
            return Err(Error::SingularInput(
                "logarithm of a jet with zero constant term".into(),
            ));
        }
        let b = &*self.basis;
        // E log a = (E a) / a with E the degree (Euler) operator
        let mut euler = self.coeffs.clone();
        for k in 0..=self.valid {
            for c in &mut euler[b.block(k)] {
                *c *= k as f64;
            }
        }
        let euler = Jet::from_raw(self.basis.clone(), euler, self.valid);
        let mut q = euler.try_div(self)?.coeffs;
        q[0] = a0.ln();
        for k in 1..=self.valid {
            let inv = 1.0 / k as f64;
            for c in &mut q[b.block(k)] {
                *c *= inv;
            }
        }
        Ok(Jet::from_raw(self.basis.clone(), q, self.valid))
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, mut e: u32) -> Jet {
        let mut acc = self.constant_like(1.0).with_valid_degree(self.valid);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative along real coordinate `var`.
    pub fn derive(&self, var: usize) -> Result<Jet> {
        if var >= self.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "coordinate {var} out of range for {} variables",
                self.nvars()
            )));
        }
        if self.valid == 0 {
            return Err(Error::ValidityExhausted {
                what: format!("derivative along {}", coordinate_name(var)),
                needed: 1,
                available: 0,
            });
        }
        let b = &*self.basis;
        let unit = b.unit_code(var);
        let mut out = vec![ZERO; b.len_through(self.valid - 1)];
        for i in 1..self.coeffs.len() {
            let e = b.exponents(i)[var];
            if e == 0 || self.coeffs[i] == ZERO {
                continue;
            }
            out[b.locate(b.code(i) - unit)] += self.coeffs[i] * e as f64;
        }
        Ok(Jet::from_raw(self.basis.clone(), out, self.valid - 1))
    }

    /// Evaluates the trusted polynomial at a real point.
    pub fn eval(&self, point: &[f64]) -> C64 {
        let p: Vec<C64> = point.iter().map(|&x| C64::new(x, 0.0)).collect();
        self.eval_complex(&p)
    }

    /// Evaluates the trusted polynomial at a point of the complexified chart.
    pub fn eval_complex(&self, point: &[C64]) -> C64 {
        assert_eq!(point.len(), self.nvars(), "evaluation point dimension");
        let b = &*self.basis;
        let d = self.valid;
        let mut powers = vec![vec![C64::new(1.0, 0.0); d + 1]; point.len()];
        for (v, pw) in powers.iter_mut().enumerate() {
            for k in 1..=d {
                pw[k] = pw[k - 1] * point[v];
            }
        }
        let mut sum = ZERO;
        for i in 0..b.len_through(d) {
            let c = self.coeffs[i];
            if c == ZERO {
                continue;
            }
            let mut term = c;
            for (v, &e) in b.exponents(i).iter().enumerate() {
                if e > 0 {
                    term *= powers[v][e as usize];
                }
            }
            sum += term;
        }
        sum
    }

    /// Same function in a larger chart: variable `k` becomes `offset + k`.
    pub fn embed(&self, target_n: usize, offset_vars: usize) -> Result<Jet> {
        if offset_vars + self.nvars() > 2 * target_n {
            return Err(Error::DimensionMismatch(format!(
                "cannot embed {} variables at offset {offset_vars} into {}",
                self.nvars(),
                2 * target_n
            )));
        }
        let target = Basis::shared(2 * target_n, self.max_degree());
        let mut out = vec![ZERO; target.len_through(self.valid)];
        let mut exps = vec![0u8; 2 * target_n];
        for i in 0..self.basis.len_through(self.valid) {
            if self.coeffs[i] == ZERO {
                continue;
            }
            exps.iter_mut().for_each(|e| *e = 0);
            exps[offset_vars..offset_vars + self.nvars()].copy_from_slice(self.basis.exponents(i));
            let idx = target.index_of(&exps).expect("degree preserved by embedding");
            out[idx] = self.coeffs[i];
        }
        Ok(Jet::from_raw(target, out, self.valid))
    }

    /// Re-expresses the jet with a different degree cap.
    pub fn with_max_degree(&self, max_degree: usize) -> Jet {
        let target = Basis::shared(self.nvars(), max_degree);
        let valid = self.valid.min(max_degree);
        let mut out = vec![ZERO; target.len_through(valid)];
        let keep = self.basis.len_through(valid).min(target.len_through(valid));
        out[..keep].copy_from_slice(&self.coeffs[..keep]);
        Jet::from_raw(target, out, valid)
    }

    /// Largest coefficient modulus within the valid degree.
    pub fn max_abs(&self) -> f64 {
        self.valid_coeffs().iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Largest coefficient modulus in the homogeneous degree-`d` block.
    pub fn max_abs_in_degree(&self, d: usize) -> f64 {
        if d > self.valid {
            return 0.0;
        }
        self.coeffs[self.basis.block(d)].iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.valid_coeffs().iter().all(|c| *c == ZERO)
    }

    /// Scaled deviation `max |a - b| / max(1, max |b|)` through the smaller
    /// valid degree.
    pub fn scaled_deviation(&self, reference: &Jet) -> f64 {
        let upto = self.coeffs.len().min(reference.coeffs.len());
        let mut diff: f64 = 0.0;
        let mut scale: f64 = 1.0;
        for i in 0..upto {
            diff = diff.max((self.coeffs[i] - reference.coeffs[i]).norm());
            scale = scale.max(reference.coeffs[i].norm());
        }
        diff / scale
    }

    /// Coefficientwise agreement through the smaller valid degree.
    pub fn approx_eq(&self, other: &Jet, tol: f64) -> bool {
        self.nvars() == other.nvars()
            && self.max_degree() == other.max_degree()
            && self.scaled_deviation(other) <= tol
    }

    /// Iterator over `(index, multi-index, coefficient)` through the valid
    /// degree, in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, MultiIndex, C64)> + '_ {
        (0..self.basis.len_through(self.valid)).map(|i| (i, self.multi_index(i), self.coeffs[i]))
    }
}

/// `out[idx(a_i * b_j) - offset] += scale * a[i] * b[j]` over the index
/// ranges; summation order is fixed by the ranges.
#[allow(clippy::too_many_arguments)]
#[inline]
fn accumulate(
    basis: &Basis,
    a: &[C64],
    ar: Range<usize>,
    b: &[C64],
    br: Range<usize>,
    scale: C64,
    out: &mut [C64],
    offset: usize,
) {
    for i in ar {
        let ai = a[i];
        if ai == ZERO {
            continue;
        }
        let ai = ai * scale;
        let ci = basis.code(i);
        for j in br.clone() {
            let bj = b[j];
            if bj == ZERO {
                continue;
            }
            out[basis.locate(ci + basis.code(j)) - offset] += ai * bj;
        }
    }
}

impl std::ops::Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.try_add(rhs).expect("jet add")
    }
}

impl std::ops::Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.try_sub(rhs).expect("jet sub")
    }
}

impl std::ops::Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.try_mul(rhs).expect("jet mul")
    }
}

impl std::ops::Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

/// Minimal algebra shared by [`Jet`] and [`TJet`] so that matrix routines
/// (determinants, adjugates) are written once.
pub trait SeriesAlgebra: Clone {
    fn add_checked(&self, other: &Self) -> Result<Self>;
    fn sub_checked(&self, other: &Self) -> Result<Self>;
    fn mul_checked(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn conjugate(&self) -> Self;
    fn max_abs_diff(&self, other: &Self) -> f64;
}

impl SeriesAlgebra for Jet {
    fn add_checked(&self, other: &Self) -> Result<Self> {
        self.try_add(other)
    }
    fn sub_checked(&self, other: &Self) -> Result<Self> {
        self.try_sub(other)
    }
    fn mul_checked(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)
    }
    fn neg(&self) -> Self {
        self.scale(-1.0)
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.with_valid_degree(other.valid).try_sub(other).map_or(f64::INFINITY, |d| d.max_abs())
    }
}
