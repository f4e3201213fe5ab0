//! CSV and JSON exports for expansions, fits and numeric matrices.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{GaussianFit, ShiftableExpansion1D};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// One decimal value with 17 significant digits.
fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV text: the header row followed by the data rows.
pub fn csv_matrix_string(headers: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = headers.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv_matrix(
    headers: &[&str],
    rows: &[Vec<f64>],
    path: impl AsRef<Path>,
) -> Result<(), ReportError> {
    std::fs::write(path, csv_matrix_string(headers, rows))?;
    Ok(())
}

/// CSV text of an expansion: one row per basis term with its kind, frequency
/// or degree, and fixed weight.
pub fn expansion_csv_string(expansion: &ShiftableExpansion1D) -> String {
    let mut out = String::from("kind,frequency_or_degree,weight\n");
    for i in 0..expansion.order() {
        let basis = expansion.basis(i);
        out.push_str(&format!(
            "{},{},{}\n",
            basis.kind_name(),
            format_value(basis.frequency_or_degree()),
            format_value(expansion.weight(i)),
        ));
    }
    out
}

pub fn write_expansion_csv(
    expansion: &ShiftableExpansion1D,
    path: impl AsRef<Path>,
) -> Result<(), ReportError> {
    std::fs::write(path, expansion_csv_string(expansion))?;
    Ok(())
}

/// Pretty JSON with keys in struct declaration order.
pub fn json_report_string<T: Serialize>(report: &T) -> Result<String, ReportError> {
    Ok(serde_json::to_string_pretty(report)?)
}

pub fn write_json_report<T: Serialize>(
    report: &T,
    path: impl AsRef<Path>,
) -> Result<(), ReportError> {
    std::fs::write(path, json_report_string(report)?)?;
    Ok(())
}

/// Flat JSON view of a Gaussian fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub sigma: f64,
    #[serde(rename = "T")]
    pub halfwidth: f64,
    #[serde(rename = "N")]
    pub order: u32,
    pub variant: String,
    pub sup_error: f64,
    pub truncated_terms: usize,
}

impl From<&GaussianFit> for FitReport {
    fn from(fit: &GaussianFit) -> Self {
        Self {
            sigma: fit.sigma,
            halfwidth: fit.halfwidth,
            order: fit.order,
            variant: fit.variant.name().to_string(),
            sup_error: fit.sup_error,
            truncated_terms: fit.truncated_terms,
        }
    }
}
