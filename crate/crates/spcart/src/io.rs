//! Dense-matrix CSV ingestion and serialization.
//!
//! Format: one row per line, comma-separated decimal floats, row-major.
//! Lines starting with `#` are comments. A single leading header row is
//! allowed and detected by its non-numeric fields. Values are written with
//! the shortest decimal representation that parses back to the identical
//! float, so a write/read round-trip is bit-faithful.

use std::io::Read;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Reads a matrix from a CSV file.
pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| {
        Error::input(format!("cannot open {}: {e}", path.display()))
    })?;
    read_matrix(file).map_err(|e| match e {
        Error::InvalidInput(msg) => {
            Error::input(format!("{}: {msg}", path.display()))
        }
        other => other,
    })
}

/// Reads a matrix from any CSV reader.
pub fn read_matrix(reader: impl Read) -> Result<DMatrix<f64>> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, record) in csv_reader.records().enumerate() {
        let record = record.map_err(|e| Error::input(format!("csv parse error: {e}")))?;
        let fields: Vec<&str> = record.iter().filter(|f| !f.is_empty()).collect();
        if fields.is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(values) => {
                if let Some(w) = width {
                    if values.len() != w {
                        return Err(Error::input(format!(
                            "row {} has {} columns, expected {w}",
                            idx + 1,
                            values.len()
                        )));
                    }
                } else {
                    width = Some(values.len());
                }
                rows.push(values);
            }
            Err(_) if rows.is_empty() && width.is_none() => {
                // non-numeric first row: header, skip
            }
            Err(e) => {
                return Err(Error::input(format!(
                    "row {}: non-numeric field ({e})",
                    idx + 1
                )));
            }
        }
    }
    let ncols = width.ok_or_else(|| Error::input("no data rows".to_string()))?;
    let nrows = rows.len();
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

/// Writes a matrix as CSV.
pub fn write_matrix_csv(matrix: &DMatrix<f64>, path: impl AsRef<Path>) -> Result<()> {
    write_matrix_csv_with_comments(matrix, path, &[])
}

/// Writes a matrix as CSV with leading `#` comment lines (seed provenance,
/// column names and the like).
pub fn write_matrix_csv_with_comments(
    matrix: &DMatrix<f64>,
    path: impl AsRef<Path>,
    comments: &[String],
) -> Result<()> {
    let mut out = String::new();
    for line in comments {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&matrix_to_csv_string(matrix));
    std::fs::write(path.as_ref(), out)?;
    Ok(())
}

/// Renders a matrix as CSV text.
pub fn matrix_to_csv_string(matrix: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..matrix.nrows() {
        for j in 0..matrix.ncols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{}", matrix[(i, j)]));
        }
        out.push('\n');
    }
    out
}
