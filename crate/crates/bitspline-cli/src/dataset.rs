//! CSV ingestion for the real-data pipeline.
//!
//! The estimation and testing machinery assumes responses observed on the
//! regular design `x_i = i/n`. Real covariates rarely are, so ingestion
//! offers two mappings: `rank` sorts records by the covariate (ties broken
//! by input order) and relabels the design points as `i/n`, recording that
//! the grid was transformed; `none` accepts data already on the grid and
//! verifies it.

use std::error::Error;
use std::path::Path;

use clap::ValueEnum;

/// How covariates are mapped onto the regular design grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mapping {
    /// Sort by covariate (ties by input order) and relabel as `i/n`.
    Rank,
    /// Require the covariate to already equal `i/n` within 1e-9.
    None,
}

/// A response vector bound to the regular design.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// Design points, exactly `(1/n, ..., 1)` after rank mapping.
    pub x: Vec<f64>,
    /// Responses, reordered alongside `x` under rank mapping.
    pub y: Vec<f64>,
    /// Whether the covariate was remapped onto the grid.
    pub mapped_grid: bool,
}

/// Smallest accepted sample size.
pub const MIN_ROWS: usize = 8;

/// Reads `(x, y)` columns from a headed CSV file and binds them to the
/// design grid. Row numbers in error messages are 1-based file lines
/// (the header is line 1).
pub fn ingest_csv(
    path: &Path,
    x_col: &str,
    y_col: &str,
    mapping: Mapping,
) -> Result<Dataset, Box<dyn Error>> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| format!("cannot open {}: {e}", path.display()))?;
    let headers = reader.headers()?.clone();
    let x_idx = headers
        .iter()
        .position(|h| h == x_col)
        .ok_or_else(|| format!("column '{x_col}' not found in {}", path.display()))?;
    let y_idx = headers
        .iter()
        .position(|h| h == y_col)
        .ok_or_else(|| format!("column '{y_col}' not found in {}", path.display()))?;

    let mut x = Vec::new();
    let mut y = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let line = index + 2; // line 1 is the header
        let record = record.map_err(|e| format!("line {line}: {e}"))?;
        x.push(parse_cell(&record, x_idx, x_col, line)?);
        y.push(parse_cell(&record, y_idx, y_col, line)?);
    }
    let n = x.len();
    if n < MIN_ROWS {
        return Err(format!("need at least {MIN_ROWS} rows, got {n}").into());
    }

    match mapping {
        Mapping::Rank => {
            let mut order: Vec<usize> = (0..n).collect();
            // Stable sort keeps input order among tied covariates.
            order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
            let y_sorted: Vec<f64> = order.iter().map(|&i| y[i]).collect();
            let grid: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
            Ok(Dataset {
                x: grid,
                y: y_sorted,
                mapped_grid: true,
            })
        }
        Mapping::None => {
            let mut sorted = x.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(
                    "tied covariate values cannot lie on the design grid; use --mapping rank"
                        .into(),
                );
            }
            for (i, &xi) in x.iter().enumerate() {
                let expected = (i + 1) as f64 / n as f64;
                if (xi - expected).abs() > 1e-9 {
                    return Err(format!(
                        "line {}: mapping 'none' requires x = i/n; got {xi}, expected {expected}",
                        i + 2
                    )
                    .into());
                }
            }
            Ok(Dataset {
                x,
                y,
                mapped_grid: false,
            })
        }
    }
}

fn parse_cell(
    record: &csv::StringRecord,
    idx: usize,
    col: &str,
    line: usize,
) -> Result<f64, Box<dyn Error>> {
    let raw = record
        .get(idx)
        .ok_or_else(|| format!("line {line}: missing value in column '{col}'"))?;
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(format!("line {line}: missing value in column '{col}'").into());
    }
    let value: f64 = trimmed
        .parse()
        .map_err(|_| format!("line {line}: non-numeric value '{raw}' in column '{col}'"))?;
    if !value.is_finite() {
        return Err(format!("line {line}: non-finite value '{raw}' in column '{col}'").into());
    }
    Ok(value)
}
