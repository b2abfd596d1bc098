//! Kähler data on a chart: initial metrics, complex derivative operators,
//! determinants and the Ricci form.
//!
//! # Conventions
//!
//! All normalisations in the crate are fixed here and nowhere else:
//!
//! * `d/dz_k = (d/dx_k - i d/dy_k) / 2`, `d/dzbar_k = (d/dx_k + i d/dy_k) / 2`.
//! * [`complex_mixed_hessian`] returns `H_ij = 4 d^2 f / dz_i dzbar_j`, so
//!   `H_ii = f_{x_i x_i} + f_{y_i y_i}`. The first Ricci-flat equation is
//!   implemented verbatim as `H(u) + c g_t = 0`.
//! * [`ricci_form`] returns `rho_ij = -d^2 log det g / dz_i dzbar_j` with no
//!   extra factor, i.e. `rho = -H(log det g) / 4`.
//!
//! Closed-form comparisons reconcile against these conventions through an
//! explicit calibration scalar (see [`crate::closed_form::calibrate`]).

mod builtin;
mod matrix;

pub use builtin::{builtin_metric, list_builtin_metrics, MetricSpec};
pub use matrix::HermitianJetMatrix;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{Jet, TJet, C64};

/// What the initial metric is, as far as scenario-specific checks care.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChartKind {
    Flat,
    FubiniStudy { n: usize, scale: f64 },
    Product { factors: Vec<ChartKind> },
    PerturbedFlat { epsilon: f64, seed: u64, degree: usize },
    Inline,
}

/// Initial metric `h` on a chart around a base point.
#[derive(Clone, Debug)]
pub struct InitialData {
    pub name: String,
    pub chart: ChartKind,
    pub h: HermitianJetMatrix<Jet>,
    /// Chart coordinates of the expansion point; jets are centred there.
    pub base_point: Vec<f64>,
    /// Radius of a polydisc (in the complexified chart) on which the data
    /// is holomorphic.
    pub polydisc_radius: f64,
}

impl InitialData {
    /// Validates Hermitian symmetry and positivity at the base point.
    pub fn new(
        name: impl Into<String>,
        chart: ChartKind,
        h: HermitianJetMatrix<Jet>,
        polydisc_radius: f64,
    ) -> Result<InitialData> {
        let n = h.n();
        if n == 0 || n > 4 {
            return Err(Error::InvalidInput(format!(
                "complex dimension {n} unsupported (1..=4)"
            )));
        }
        let defect = h.hermitian_defect();
        if defect > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "initial metric is not Hermitian (defect {defect:e})"
            )));
        }
        let at_base = h.eval(&vec![0.0; 2 * n]);
        if !is_positive_definite(&at_base) {
            return Err(Error::InvalidInput(
                "initial metric is not positive definite at the base point".into(),
            ));
        }
        if polydisc_radius.is_nan() || polydisc_radius <= 0.0 {
            return Err(Error::InvalidInput("polydisc radius must be positive".into()));
        }
        Ok(InitialData {
            name: name.into(),
            chart,
            base_point: vec![0.0; 2 * n],
            polydisc_radius,
            h,
        })
    }

    pub fn n(&self) -> usize {
        self.h.n()
    }

    pub fn max_degree(&self) -> usize {
        self.h.get(0, 0).max_degree()
    }

    /// The same metric with every jet re-expressed at degree cap `degree`.
    pub fn with_max_degree(&self, degree: usize) -> InitialData {
        InitialData {
            h: self.h.map(|j| j.with_max_degree(degree)),
            ..self.clone()
        }
    }

    pub fn det(&self) -> Result<Jet> {
        self.h.det()
    }
}

pub(crate) fn is_positive_definite(m: &nalgebra::DMatrix<C64>) -> bool {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    herm.symmetric_eigenvalues().iter().all(|&l| l > 0.0)
}

/// Real coordinate indices of `x_k` and `y_k`.
pub fn xy(k: usize) -> (usize, usize) {
    (2 * k, 2 * k + 1)
}

/// `d f / dz_k`.
pub fn d_z(f: &Jet, k: usize) -> Result<Jet> {
    let (x, y) = xy(k);
    Ok((&f.derive(x)? - &f.derive(y)?.scale(C64::i())).scale(0.5))
}

/// `d f / dzbar_k`.
pub fn d_zbar(f: &Jet, k: usize) -> Result<Jet> {
    let (x, y) = xy(k);
    Ok((&f.derive(x)? + &f.derive(y)?.scale(C64::i())).scale(0.5))
}

pub fn d_z_series(f: &TJet, k: usize) -> Result<TJet> {
    f.try_map(|c| d_z(c, k))
}

pub fn d_zbar_series(f: &TJet, k: usize) -> Result<TJet> {
    f.try_map(|c| d_zbar(c, k))
}

/// One entry `4 d^2 f / dz_i dzbar_j` of the complex Hessian.
pub fn mixed_hessian_entry(f: &Jet, i: usize, j: usize) -> Result<Jet> {
    if f.valid_degree() < 2 {
        return Err(Error::ValidityExhausted {
            what: "complex Hessian".into(),
            needed: 2,
            available: f.valid_degree(),
        });
    }
    let (xi, yi) = xy(i);
    let (xj, yj) = xy(j);
    let fx = f.derive(xi)?;
    let fy = f.derive(yi)?;
    let real = &fx.derive(xj)? + &fy.derive(yj)?;
    let imag = &fx.derive(yj)? - &fy.derive(xj)?;
    Ok(&real + &imag.scale(C64::i()))
}

/// `H_ij = 4 d^2 f / dz_i dzbar_j`; the valid degree drops by two.
pub fn complex_mixed_hessian(f: &Jet) -> Result<HermitianJetMatrix<Jet>> {
    let n = f.n();
    HermitianJetMatrix::try_from_fn(n, |i, j| mixed_hessian_entry(f, i, j))
}

/// Ricci form `rho_ij = -d^2 log det g / dz_i dzbar_j`.
pub fn ricci_form(g: &HermitianJetMatrix<Jet>) -> Result<HermitianJetMatrix<Jet>> {
    let log_det = g.det()?.log()?;
    Ok(complex_mixed_hessian(&log_det)?.map(|e| e.scale(-0.25)))
}
