//! Delimited-file loading and the household-survey preprocessing pipeline:
//! complete-case filtering, negative-value drops, equivalization by household
//! size, replication by integer weight, and outlier exclusion.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::numeric::{fmt_full, weighted_mean_std};

/// A parsed delimited table. Cells that are empty or fail numeric parsing
/// are kept as missing and flag the row incomplete downstream.
#[derive(Clone, Debug)]
pub struct RawTable {
    headers: Vec<String>,
    cells: Vec<Option<f64>>, // row-major
    n_rows: usize,
    n_cols: usize,
}

impl RawTable {
    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn cell(&self, row: usize, col: usize) -> Option<f64> {
        self.cells[row * self.n_cols + col]
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn { name: name.to_string() })
    }

    fn from_csv_reader<R: std::io::Read>(mut reader: csv::Reader<R>, has_header: bool) -> Result<Self> {
        let headers: Vec<String> = if has_header {
            reader
                .headers()
                .map_err(|e| Error::ParseError { row: 1, msg: e.to_string() })?
                .iter()
                .map(|h| h.trim().to_string())
                .collect()
        } else {
            Vec::new()
        };
        let mut cells = Vec::new();
        let mut n_cols = if has_header { headers.len() } else { 0 };
        let mut n_rows = 0;
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::ParseError { row: i + 1, msg: e.to_string() })?;
            if n_cols == 0 {
                n_cols = record.len();
            }
            for cell in record.iter() {
                cells.push(parse_cell(cell));
            }
            n_rows += 1;
        }
        let headers = if has_header {
            headers
        } else {
            (1..=n_cols).map(|i| format!("col{i}")).collect()
        };
        if n_cols == 0 || headers.len() != n_cols {
            return Err(Error::EmptyResult("table has no columns".into()));
        }
        Ok(RawTable { headers, cells, n_rows, n_cols })
    }
}

fn parse_cell(cell: &str) -> Option<f64> {
    let trimmed = cell.trim();
    if trimmed.is_empty() {
        return None;
    }
    match trimmed.parse::<f64>() {
        Ok(v) if v.is_finite() => Some(v),
        _ => None,
    }
}

/// Reads a delimited UTF-8 file into a typed table.
pub fn load_table(path: &Path, delimiter: u8, has_header: bool) -> Result<RawTable> {
    let reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(has_header)
        .flexible(false)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io(std::io::Error::other(e.to_string())),
            _ => Error::ParseError { row: 0, msg: e.to_string() },
        })?;
    RawTable::from_csv_reader(reader, has_header)
}

/// Parses delimited text already in memory (tests, pipes).
pub fn parse_table(text: &str, delimiter: u8, has_header: bool) -> Result<RawTable> {
    let reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(has_header)
        .flexible(false)
        .from_reader(text.as_bytes());
    RawTable::from_csv_reader(reader, has_header)
}

/// Which rows feed the outlier statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutlierStats {
    /// Weighted statistics over the expanded (per-person) rows.
    PostReplication,
    /// Unweighted statistics over the source (household) rows.
    PreReplication,
}

/// Pipeline configuration, mirrored one-to-one in JSON and TOML documents.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub value_columns: Vec<String>,
    pub weight_column: Option<String>,
    pub household_size_column: Option<String>,
    pub drop_negative: bool,
    pub equivalize_exponent: f64,
    /// Default: on when both weight and household size columns are present.
    pub replicate: Option<bool>,
    pub outlier_sigma: f64,
    pub outlier_stats: OutlierStats,
    /// Materialized-row ceiling; past it the pipeline falls back to weighted
    /// mode (weights = replication counts), which leaves every downstream
    /// estimate unchanged.
    pub replication_cap: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            value_columns: Vec::new(),
            weight_column: None,
            household_size_column: None,
            drop_negative: true,
            equivalize_exponent: 0.5,
            replicate: None,
            outlier_sigma: 30.0,
            outlier_stats: OutlierStats::PostReplication,
            replication_cap: 10_000_000,
        }
    }
}

/// Loads a config document; the extension picks the format, otherwise JSON is
/// tried first.
pub fn load_config(path: &Path) -> Result<PipelineConfig> {
    let text = std::fs::read_to_string(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    match ext {
        "toml" => toml::from_str(&text).map_err(|e| Error::ConfigError(e.to_string())),
        "json" => serde_json::from_str(&text).map_err(|e| Error::ConfigError(e.to_string())),
        _ => serde_json::from_str(&text)
            .or_else(|_| toml::from_str(&text))
            .map_err(|e| Error::ConfigError(e.to_string())),
    }
}

/// Row counts removed by each pipeline step.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropReport {
    pub input_rows: usize,
    pub dropped_incomplete: usize,
    pub dropped_negative: usize,
    pub dropped_zero_replication: usize,
    /// Counted in output units: expanded rows when replicating, source rows
    /// in weighted mode.
    pub dropped_outlier: usize,
    pub replicated_rows: usize,
    pub output_rows: usize,
    pub weighted_fallback: bool,
}

struct StagedRow {
    values: Vec<f64>,
    replication: u64,
    weight: f64,
}

/// Runs the fixed pipeline order: complete-case filter, negative drop,
/// equivalization, replication (households times integer part of the weight,
/// zero-replication rows excluded), then outlier exclusion.
pub fn preprocess(table: &RawTable, config: &PipelineConfig) -> Result<(Dataset, DropReport)> {
    if config.value_columns.is_empty() {
        return Err(Error::ConfigError("value_columns must not be empty".into()));
    }
    if !(config.equivalize_exponent >= 0.0 && config.equivalize_exponent.is_finite()) {
        return Err(Error::ConfigError("equivalize_exponent must be >= 0".into()));
    }
    if !(config.outlier_sigma >= 0.0 && config.outlier_sigma.is_finite()) {
        return Err(Error::ConfigError("outlier_sigma must be >= 0".into()));
    }
    if config.replication_cap == 0 {
        return Err(Error::ConfigError("replication_cap must be positive".into()));
    }
    let value_idx: Vec<usize> = config
        .value_columns
        .iter()
        .map(|name| table.column_index(name))
        .collect::<Result<_>>()?;
    let weight_idx = config.weight_column.as_deref().map(|n| table.column_index(n)).transpose()?;
    let size_idx = config
        .household_size_column
        .as_deref()
        .map(|n| table.column_index(n))
        .transpose()?;
    let replicate = config.replicate.unwrap_or(weight_idx.is_some() && size_idx.is_some());

    let mut report = DropReport { input_rows: table.n_rows(), ..DropReport::default() };
    let mut staged: Vec<StagedRow> = Vec::new();
    for r in 0..table.n_rows() {
        // step 1: complete cases only
        let mut used: Vec<Option<f64>> = value_idx.iter().map(|&c| table.cell(r, c)).collect();
        let weight_cell = weight_idx.map(|c| table.cell(r, c));
        let size_cell = size_idx.map(|c| table.cell(r, c));
        if used.iter().any(Option::is_none)
            || weight_cell == Some(None)
            || size_cell == Some(None)
        {
            report.dropped_incomplete += 1;
            continue;
        }
        let mut values: Vec<f64> = used.drain(..).map(Option::unwrap).collect();
        let raw_weight = weight_cell.flatten().unwrap_or(1.0);
        let members = size_cell.flatten().unwrap_or(1.0);
        // step 2: negative values
        if config.drop_negative && values.iter().any(|&v| v < 0.0) {
            report.dropped_negative += 1;
            continue;
        }
        // step 3: equivalization to per-person amounts
        if size_idx.is_some() {
            if members <= 0.0 {
                report.dropped_zero_replication += 1;
                continue;
            }
            let scale = members.powf(-config.equivalize_exponent);
            for v in values.iter_mut() {
                *v *= scale;
            }
        }
        // step 4: replication factor
        if replicate {
            let k = (members * raw_weight.floor()).floor();
            if k < 1.0 {
                report.dropped_zero_replication += 1;
                continue;
            }
            staged.push(StagedRow { values, replication: k as u64, weight: 1.0 });
        } else {
            let w = members * raw_weight;
            if !(w > 0.0 && w.is_finite()) {
                report.dropped_zero_replication += 1;
                continue;
            }
            staged.push(StagedRow { values, replication: 1, weight: w });
        }
    }

    // materialize replication, falling back to weighted mode past the cap
    let total_replicated: u64 = staged.iter().map(|s| s.replication).sum();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    if replicate && total_replicated as usize > config.replication_cap {
        report.weighted_fallback = true;
        for s in &staged {
            rows.push(s.values.clone());
            weights.push(s.replication as f64);
        }
    } else if replicate {
        for s in &staged {
            for _ in 0..s.replication {
                rows.push(s.values.clone());
                weights.push(1.0);
            }
        }
    } else {
        for s in &staged {
            rows.push(s.values.clone());
            weights.push(s.weight);
        }
    }
    report.replicated_rows = rows.len();

    // step 5: outlier exclusion per variable
    if config.outlier_sigma > 0.0 && !rows.is_empty() {
        let d = value_idx.len();
        let mut keep = vec![true; rows.len()];
        for c in 0..d {
            let col: Vec<f64> = rows.iter().map(|row| row[c]).collect();
            let (mean, std) = match config.outlier_stats {
                OutlierStats::PostReplication => weighted_mean_std(&col, &weights),
                OutlierStats::PreReplication => {
                    let src: Vec<f64> = staged.iter().map(|s| s.values[c]).collect();
                    let unit = vec![1.0; src.len()];
                    weighted_mean_std(&src, &unit)
                }
            };
            let bound = config.outlier_sigma * std;
            for (i, row) in rows.iter().enumerate() {
                if (row[c] - mean).abs() > bound {
                    keep[i] = false;
                }
            }
        }
        let mut kept_rows = Vec::with_capacity(rows.len());
        let mut kept_weights = Vec::with_capacity(weights.len());
        for (i, row) in rows.into_iter().enumerate() {
            if keep[i] {
                kept_rows.push(row);
                kept_weights.push(weights[i]);
            } else {
                report.dropped_outlier += 1;
            }
        }
        rows = kept_rows;
        weights = kept_weights;
    }

    if rows.is_empty() {
        return Err(Error::EmptyResult("every row was dropped by the pipeline".into()));
    }
    report.output_rows = rows.len();
    let dataset = Dataset::from_rows(&rows, Some(weights), Some(config.value_columns.clone()))?;
    Ok((dataset, report))
}

/// Serializes a dataset back to CSV with full-precision decimals, weight
/// column last. Output parses back bit-identically.
pub fn write_dataset_csv(data: &Dataset, include_weight: bool) -> String {
    let mut out = String::new();
    for (i, name) in data.var_names().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(name);
    }
    if include_weight {
        out.push_str(",weight");
    }
    out.push('\n');
    for r in 0..data.n() {
        for c in 0..data.dim() {
            if c > 0 {
                out.push(',');
            }
            out.push_str(&fmt_full(data.value(r, c)));
        }
        if include_weight {
            out.push(',');
            out.push_str(&fmt_full(data.weights()[r]));
        }
        out.push('\n');
    }
    out
}
