//! Power series in `t` with [`Jet`] coefficients.

use super::{Jet, SeriesAlgebra, C64};
use crate::error::{Error, Result};

/// `sum_{m=0}^{M} a_m(x) t^m`, truncated at order `M`. Each coefficient
/// keeps its own valid spatial degree.
#[derive(Clone, Debug)]
pub struct TJet {
    coeffs: Vec<Jet>,
}

impl TJet {
    pub fn new(coeffs: Vec<Jet>) -> Result<TJet> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidInput("t-series needs at least one coefficient".into()))?;
        for c in &coeffs[1..] {
            if c.nvars() != first.nvars() || c.max_degree() != first.max_degree() {
                return Err(Error::DimensionMismatch(
                    "t-series coefficients must share dimension and degree cap".into(),
                ));
            }
        }
        Ok(TJet { coeffs })
    }

    pub fn zero(n: usize, max_degree: usize, max_order: usize) -> TJet {
        TJet {
            coeffs: vec![Jet::zero(n, max_degree); max_order + 1],
        }
    }

    /// `t`-independent series with the given jet as constant term.
    pub fn constant_in_t(c: &Jet, max_order: usize) -> TJet {
        let mut coeffs = vec![c.zero_like(c.max_degree()); max_order + 1];
        coeffs[0] = c.clone();
        TJet { coeffs }
    }

    pub fn max_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn n(&self) -> usize {
        self.coeffs[0].n()
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs[0].max_degree()
    }

    /// Coefficient of `t^m`.
    pub fn coeff(&self, m: usize) -> &Jet {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[Jet] {
        &self.coeffs
    }

    pub fn coeff_mut(&mut self, m: usize) -> &mut Jet {
        &mut self.coeffs[m]
    }

    pub fn valid_degrees(&self) -> Vec<usize> {
        self.coeffs.iter().map(Jet::valid_degree).collect()
    }

    fn zero_coeff(&self, valid: usize) -> Jet {
        self.coeffs[0].zero_like(valid)
    }

    pub fn truncate_order(&self, max_order: usize) -> TJet {
        TJet {
            coeffs: self.coeffs[..=max_order.min(self.max_order())].to_vec(),
        }
    }

    pub fn try_add(&self, other: &TJet) -> Result<TJet> {
        let m = self.max_order().min(other.max_order());
        let coeffs = (0..=m)
            .map(|k| self.coeffs[k].try_add(&other.coeffs[k]))
            .collect::<Result<_>>()?;
        Ok(TJet { coeffs })
    }

    pub fn try_sub(&self, other: &TJet) -> Result<TJet> {
        let m = self.max_order().min(other.max_order());
        let coeffs = (0..=m)
            .map(|k| self.coeffs[k].try_sub(&other.coeffs[k]))
            .collect::<Result<_>>()?;
        Ok(TJet { coeffs })
    }

    /// Cauchy product in `t`, truncated at the smaller order.
    pub fn try_mul(&self, other: &TJet) -> Result<TJet> {
        let m = self.max_order().min(other.max_order());
        let mut coeffs = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let mut acc = self.coeffs[0].try_mul(&other.coeffs[k])?;
            for i in 1..=k {
                acc = acc.try_add(&self.coeffs[i].try_mul(&other.coeffs[k - i])?)?;
            }
            coeffs.push(acc);
        }
        Ok(TJet { coeffs })
    }

    /// Multiplies every coefficient by a spatial jet.
    pub fn mul_jet(&self, j: &Jet) -> Result<TJet> {
        let coeffs = self.coeffs.iter().map(|c| c.try_mul(j)).collect::<Result<_>>()?;
        Ok(TJet { coeffs })
    }

    pub fn scale(&self, s: impl Into<C64>) -> TJet {
        let s = s.into();
        TJet {
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn conj(&self) -> TJet {
        TJet {
            coeffs: self.coeffs.iter().map(Jet::conj).collect(),
        }
    }

    /// Coefficientwise modulus; see [`Jet::modulus`].
    pub fn modulus(&self) -> TJet {
        TJet {
            coeffs: self.coeffs.iter().map(Jet::modulus).collect(),
        }
    }

    /// `exp` of the series: `F_0 = exp(a_0)`, `k F_k = sum_j j a_j F_{k-j}`.
    pub fn exp(&self) -> Result<TJet> {
        let mut f = Vec::with_capacity(self.coeffs.len());
        f.push(self.coeffs[0].exp());
        for k in 1..=self.max_order() {
            let mut acc = self.coeffs[1].try_mul(&f[k - 1])?;
            for j in 2..=k {
                acc = acc.try_add(&self.coeffs[j].scale(j as f64).try_mul(&f[k - j])?)?;
            }
            f.push(acc.scale(1.0 / k as f64));
        }
        Ok(TJet { coeffs: f })
    }

    /// Series quotient; the denominator's `t^0` coefficient must be
    /// invertible as a jet.
    pub fn try_div(&self, denom: &TJet) -> Result<TJet> {
        let m = self.max_order().min(denom.max_order());
        let inv0 = denom.coeffs[0].recip()?;
        let mut q: Vec<Jet> = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let mut num = self.coeffs[k].clone();
            for j in 1..=k {
                num = num.try_sub(&denom.coeffs[j].try_mul(&q[k - j])?)?;
            }
            q.push(num.try_mul(&inv0)?);
        }
        Ok(TJet { coeffs: q })
    }

    /// `d/dt`; the result is known through order `M - 1`.
    pub fn t_derive(&self) -> TJet {
        if self.max_order() == 0 {
            return TJet {
                coeffs: vec![self.zero_coeff(self.max_degree())],
            };
        }
        TJet {
            coeffs: (1..=self.max_order())
                .map(|m| self.coeffs[m].scale(m as f64))
                .collect(),
        }
    }

    /// `int_0^t`; the top coefficient is dropped so the order stays `M`.
    pub fn t_integrate(&self) -> TJet {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(self.zero_coeff(self.max_degree()));
        for m in 0..self.max_order() {
            coeffs.push(self.coeffs[m].scale(1.0 / (m + 1) as f64));
        }
        TJet { coeffs }
    }

    /// Multiplication by `t`, keeping order `M`.
    pub fn shift_up(&self) -> TJet {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(self.zero_coeff(self.max_degree()));
        coeffs.extend(self.coeffs[..self.max_order()].iter().cloned());
        TJet { coeffs }
    }

    /// Applies a fallible spatial operation to every coefficient.
    pub fn try_map(&self, f: impl Fn(&Jet) -> Result<Jet>) -> Result<TJet> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<_>>()?;
        Ok(TJet { coeffs })
    }

    pub fn eval(&self, point: &[f64], t: f64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, c| acc * t + c.eval(point))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }
}

impl SeriesAlgebra for TJet {
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
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |m, (a, b)| m.max(a.max_abs_diff(b)))
    }
}
