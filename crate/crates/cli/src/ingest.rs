//! CSV ingestion: turn a headered CSV file into a model-ready design.
//!
//! Numeric columns pass through unchanged. A column with any cell that does
//! not parse as a number is treated as categorical and expanded into one-hot
//! indicators with levels sorted lexicographically and the first level
//! dropped as the reference. An intercept column is prepended unless the
//! caller opts out.

use std::collections::BTreeSet;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use robust_gamma::data::Dataset;

use crate::CliError;

/// One original CSV column after type sniffing.
enum Column {
    Numeric(Vec<f64>),
    Categorical(Vec<String>),
}

fn parse_cell(raw: &str) -> Option<f64> {
    raw.parse::<f64>().ok()
}

fn sniff(name: &str, cells: &[String]) -> Result<Column, CliError> {
    let mut values = Vec::with_capacity(cells.len());
    for cell in cells {
        match parse_cell(cell) {
            Some(v) => values.push(v),
            None => return Ok(Column::Categorical(cells.to_vec())),
        }
    }
    if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
        return Err(CliError::Data(format!(
            "column '{name}' has a non-finite value at data row {}",
            bad + 1
        )));
    }
    Ok(Column::Numeric(values))
}

/// Read `path` and assemble a [`Dataset`] with `response` as the response
/// column. Column order follows the file; categorical expansions are named
/// `column=level`.
pub fn load_csv(path: &Path, response: &str, intercept: bool) -> Result<Dataset, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Data(format!("bad header row: {e}")))?
        .iter()
        .map(str::to_owned)
        .collect();
    if headers.is_empty() {
        return Err(CliError::Data("the CSV file has no columns".into()));
    }
    for (j, name) in headers.iter().enumerate() {
        if name.is_empty() {
            return Err(CliError::Data(format!("column {} has an empty header", j + 1)));
        }
        if headers[..j].contains(name) {
            return Err(CliError::Data(format!("duplicate column name '{name}'")));
        }
    }
    let response_idx = headers.iter().position(|h| h == response).ok_or_else(|| {
        CliError::Data(format!(
            "response column '{response}' not found; available: {}",
            headers.join(", ")
        ))
    })?;

    let mut cells: Vec<Vec<String>> = vec![Vec::new(); headers.len()];
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Data(format!("data row {}: {e}", i + 1)))?;
        for (j, raw) in record.iter().enumerate() {
            if raw.is_empty() {
                return Err(CliError::Data(format!(
                    "missing value in column '{}' at data row {}",
                    headers[j],
                    i + 1
                )));
            }
            cells[j].push(raw.to_owned());
        }
    }
    let n = cells[response_idx].len();
    if n == 0 {
        return Err(CliError::Data("the CSV file has no data rows".into()));
    }

    let mut y = Vec::with_capacity(n);
    for (i, raw) in cells[response_idx].iter().enumerate() {
        let v = parse_cell(raw).ok_or_else(|| {
            CliError::Data(format!(
                "response column '{response}' has non-numeric value '{raw}' at data row {}",
                i + 1
            ))
        })?;
        y.push(v);
    }

    let mut names: Vec<String> = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    if intercept {
        names.push("intercept".into());
        columns.push(vec![1.0; n]);
    }
    for (j, name) in headers.iter().enumerate() {
        if j == response_idx {
            continue;
        }
        match sniff(name, &cells[j])? {
            Column::Numeric(values) => {
                names.push(name.clone());
                columns.push(values);
            }
            Column::Categorical(raw) => {
                let levels: Vec<&String> = raw.iter().collect::<BTreeSet<_>>().into_iter().collect();
                if levels.len() < 2 {
                    return Err(CliError::Data(format!(
                        "categorical column '{name}' has a single level and carries no information"
                    )));
                }
                // The first sorted level is the reference and gets no column.
                for level in &levels[1..] {
                    names.push(format!("{name}={level}"));
                    columns.push(raw.iter().map(|cell| f64::from(cell == *level)).collect());
                }
            }
        }
    }
    if columns.is_empty() {
        return Err(CliError::Data(
            "no covariate columns remain; pass at least one feature or keep the intercept".into(),
        ));
    }

    let p = columns.len();
    let x = DMatrix::from_fn(n, p, |i, j| columns[j][i]);
    Dataset::new(x, DVector::from_vec(y), Some(names)).map_err(CliError::from)
}
