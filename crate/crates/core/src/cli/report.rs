//! Report files.
//!
//! Every command writes one JSON report,
//!
//! ```json
//! { "tool": "kcanon", "version": "...", "command": "verify",
//!   "generated_at": "...",            // omitted with --no-timestamp
//!   "config": { ...resolved scenario... },
//!   "conventions": { ... },
//!   "verdict": "pass", "exit_code": 0,
//!   "result": { ... } }
//! ```
//!
//! plus CSV tables. Series tables list the nonzero coefficients within the
//! valid degree, graded-lex in space and ascending in `t`, with columns
//! `field,row,col,t_order,index,exponents,re,im,valid_degree`; `exponents`
//! is `;`-separated in the order `x1;y1;x2;y2;...`.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::closed_form::KAPPA_CANDIDATES;
use crate::error::{Error, Result};
use crate::jet::TJet;
use crate::kahler::HermitianJetMatrix;
use crate::verifier::ResidualReport;

#[derive(Serialize)]
pub struct Conventions {
    pub d_z: &'static str,
    pub complex_hessian: &'static str,
    pub ricci_form: &'static str,
    pub series: &'static str,
    pub coefficient_order: &'static str,
    pub kappa_candidates: [f64; 5],
    pub majorant_m_const: &'static str,
}

pub const CONVENTIONS: Conventions = Conventions {
    d_z: "d/dz_k = (d/dx_k - i d/dy_k)/2",
    complex_hessian: "H_ij(f) = 4 d^2 f/dz_i dzbar_j",
    ricci_form: "rho_ij = -d^2 log det g/dz_i dzbar_j",
    series: "v = u - log t; w_inv = 1/w; exp_u = t e^v",
    coefficient_order: "graded-lex in (x1, y1, ..., xn, yn); ascending in t",
    kappa_candidates: KAPPA_CANDIDATES,
    majorant_m_const: "4/|c|",
};

#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
    pub config: &'a C,
    pub conventions: &'static Conventions,
    pub verdict: &'a str,
    pub exit_code: i32,
    pub result: &'a R,
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidInput(format!("serialising report: {e}")))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Writes a header and rows.
pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub const SERIES_HEADER: [&str; 9] =
    ["field", "row", "col", "t_order", "index", "exponents", "re", "im", "valid_degree"];

pub fn series_rows(field: &str, row: usize, col: usize, s: &TJet) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for (k, jet) in s.coeffs().iter().enumerate() {
        let basis = jet.basis();
        for (idx, c) in jet.valid_coeffs().iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            let exps: Vec<String> = basis.exponents(idx).iter().map(u8::to_string).collect();
            out.push(vec![
                field.to_string(),
                row.to_string(),
                col.to_string(),
                k.to_string(),
                idx.to_string(),
                exps.join(";"),
                c.re.to_string(),
                c.im.to_string(),
                jet.valid_degree().to_string(),
            ]);
        }
    }
    out
}

pub fn matrix_rows(field: &str, m: &HermitianJetMatrix<TJet>) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for i in 0..m.n() {
        for j in 0..m.n() {
            out.extend(series_rows(field, i, j, m.get(i, j)));
        }
    }
    out
}

pub const RESIDUAL_HEADER: [&str; 6] = ["identity", "t_order", "degree", "residual", "tolerance", "verdict"];

pub fn residual_rows<'a>(reports: impl IntoIterator<Item = &'a ResidualReport>) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for rep in reports {
        for e in rep.entries() {
            out.push(vec![
                e.identity.clone(),
                e.t_order.to_string(),
                e.degree.to_string(),
                format!("{:e}", e.residual),
                format!("{:e}", e.tolerance),
                e.verdict.as_str().to_string(),
            ]);
        }
    }
    out
}

#[derive(Serialize)]
pub struct SeriesSummary {
    pub valid_degrees: Vec<usize>,
    /// Largest coefficient modulus per `t`-order.
    pub max_abs: Vec<f64>,
    /// Value at the base point per `t`-order, as `[re, im]`.
    pub at_base: Vec<[f64; 2]>,
}

pub fn summarize(s: &TJet) -> SeriesSummary {
    SeriesSummary {
        valid_degrees: s.valid_degrees(),
        max_abs: s.coeffs().iter().map(|c| c.max_abs()).collect(),
        at_base: s
            .coeffs()
            .iter()
            .map(|c| {
                let z = c.constant_term();
                [z.re, z.im]
            })
            .collect(),
    }
}
