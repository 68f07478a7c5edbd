//! Matrix file formats: Matrix Market array (real or complex,
//! column-major), plain CSV of real rows, and a JSON object with explicit
//! re/im pairs. JSON round-trips bit-exactly; the text formats are written
//! with 17 significant digits, which also recovers every double exactly.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    MatrixMarket,
    CsvReal,
    JsonComplex,
}

impl MatrixFormat {
    pub fn from_extension(path: &Path) -> Result<Self> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("mtx") | Some("mm") => Ok(MatrixFormat::MatrixMarket),
            Some("csv") => Ok(MatrixFormat::CsvReal),
            Some("json") => Ok(MatrixFormat::JsonComplex),
            other => Err(Error::Parse(format!(
                "cannot infer matrix format from extension {:?} of {}",
                other.unwrap_or(""),
                path.display()
            ))),
        }
    }

    pub fn from_flag(name: &str) -> Result<Self> {
        match name {
            "matrix-market" | "mtx" => Ok(MatrixFormat::MatrixMarket),
            "csv-real" | "csv" => Ok(MatrixFormat::CsvReal),
            "json-complex" | "json" => Ok(MatrixFormat::JsonComplex),
            other => Err(Error::Parse(format!("unknown matrix format {other:?}"))),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            MatrixFormat::MatrixMarket => "mtx",
            MatrixFormat::CsvReal => "csv",
            MatrixFormat::JsonComplex => "json",
        }
    }
}

/// Reads a matrix file. A recognized extension wins; `fallback` covers
/// files whose extension does not determine a format.
pub fn read_matrix(path: &Path, fallback: Option<MatrixFormat>) -> Result<Matrix> {
    let format = match MatrixFormat::from_extension(path) {
        Ok(f) => f,
        Err(err) => fallback.ok_or(err)?,
    };
    let text = std::fs::read_to_string(path)?;
    parse_matrix(format, &text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Writes a matrix file. An explicit `format` wins over the extension;
/// with neither, json-complex is used.
pub fn write_matrix(path: &Path, matrix: &Matrix, format: Option<MatrixFormat>) -> Result<()> {
    let format = format
        .or_else(|| MatrixFormat::from_extension(path).ok())
        .unwrap_or(MatrixFormat::JsonComplex);
    std::fs::write(path, serialize_matrix(format, matrix)?)?;
    Ok(())
}

pub fn parse_matrix(format: MatrixFormat, text: &str) -> Result<Matrix> {
    match format {
        MatrixFormat::MatrixMarket => parse_matrix_market(text),
        MatrixFormat::CsvReal => parse_csv(text),
        MatrixFormat::JsonComplex => parse_json(text),
    }
}

pub fn serialize_matrix(format: MatrixFormat, matrix: &Matrix) -> Result<String> {
    match format {
        MatrixFormat::MatrixMarket => Ok(to_matrix_market(matrix)),
        MatrixFormat::CsvReal => to_csv(matrix),
        MatrixFormat::JsonComplex => Ok(to_json(matrix)),
    }
}

// --- Matrix Market array format ---------------------------------------

fn parse_matrix_market(text: &str) -> Result<Matrix> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() < 4 || !tokens[0].eq_ignore_ascii_case("%%MatrixMarket") {
        return Err(Error::Parse("missing %%MatrixMarket header".into()));
    }
    if !tokens[1].eq_ignore_ascii_case("matrix") || !tokens[2].eq_ignore_ascii_case("array") {
        return Err(Error::Parse(
            "only the dense `matrix array` layout is supported".into(),
        ));
    }
    let complex = match tokens[3].to_ascii_lowercase().as_str() {
        "real" | "integer" => false,
        "complex" => true,
        other => return Err(Error::Parse(format!("unsupported field type {other:?}"))),
    };
    if let Some(symmetry) = tokens.get(4) {
        if !symmetry.eq_ignore_ascii_case("general") {
            return Err(Error::Parse(format!(
                "unsupported symmetry {symmetry:?}, expected general"
            )));
        }
    }

    let mut body = lines.filter(|l| !l.trim_start().starts_with('%'));
    let dims = body
        .next()
        .ok_or_else(|| Error::Parse("missing size line".into()))?;
    let mut parts = dims.split_whitespace();
    let rows: usize = parse_token(parts.next(), "row count")?;
    let cols: usize = parse_token(parts.next(), "column count")?;
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix);
    }

    let mut data = vec![Complex64::new(0.0, 0.0); rows * cols];
    let mut count = 0usize;
    for line in body {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if count >= rows * cols {
            return Err(Error::Parse("too many values".into()));
        }
        let mut values = trimmed.split_whitespace();
        let re: f64 = parse_token(values.next(), "value")?;
        let im: f64 = if complex {
            parse_token(values.next(), "imaginary part")?
        } else {
            0.0
        };
        // Values are stored column-major.
        let (i, j) = (count % rows, count / rows);
        data[i * cols + j] = Complex64::new(re, im);
        count += 1;
    }
    if count != rows * cols {
        return Err(Error::Parse(format!(
            "expected {} values, found {count}",
            rows * cols
        )));
    }
    Matrix::new(rows, cols, data)
}

fn to_matrix_market(matrix: &Matrix) -> String {
    let complex = matrix.max_abs_imag() != 0.0;
    let field = if complex { "complex" } else { "real" };
    let mut out = format!(
        "%%MatrixMarket matrix array {field} general\n{} {}\n",
        matrix.rows(),
        matrix.cols()
    );
    for j in 0..matrix.cols() {
        for i in 0..matrix.rows() {
            let z = matrix.get(i, j);
            if complex {
                out.push_str(&format!("{:.16e} {:.16e}\n", z.re, z.im));
            } else {
                out.push_str(&format!("{:.16e}\n", z.re));
            }
        }
    }
    out
}

fn parse_token<T: std::str::FromStr>(token: Option<&str>, what: &str) -> Result<T> {
    token
        .ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("invalid {what}: {token:?}")))
}

// --- CSV (real) ---------------------------------------------------------

fn parse_csv(text: &str) -> Result<Matrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let row: Vec<f64> = trimmed
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("invalid number {tok:?}")))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("ragged csv rows".into()));
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Matrix::from_real(flat.len() / cols.max(1), cols, &flat)
}

fn to_csv(matrix: &Matrix) -> Result<String> {
    if matrix.max_abs_imag() != 0.0 {
        return Err(Error::Format(
            "csv-real cannot store complex entries; use json-complex or matrix-market".into(),
        ));
    }
    let mut out = String::new();
    for i in 0..matrix.rows() {
        let row: Vec<String> = (0..matrix.cols())
            .map(|j| format!("{:.16e}", matrix.get(i, j).re))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

// --- JSON with explicit re/im ------------------------------------------

#[derive(Serialize, Deserialize)]
struct JsonEntry {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<JsonEntry>>,
}

fn parse_json(text: &str) -> Result<Matrix> {
    let parsed: JsonMatrix =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if parsed.data.len() != parsed.rows || parsed.data.iter().any(|r| r.len() != parsed.cols) {
        return Err(Error::Parse("data shape disagrees with rows/cols".into()));
    }
    for row in &parsed.data {
        for entry in row {
            if !entry.re.is_finite() || !entry.im.is_finite() {
                return Err(Error::Parse("nonfinite entry".into()));
            }
        }
    }
    let data: Vec<Complex64> = parsed
        .data
        .iter()
        .flatten()
        .map(|e| Complex64::new(e.re, e.im))
        .collect();
    Matrix::new(parsed.rows, parsed.cols, data)
}

fn to_json(matrix: &Matrix) -> String {
    let value = matrix_to_json_value(matrix);
    let mut text = serde_json::to_string_pretty(&value).expect("serializable");
    text.push('\n');
    text
}

/// JSON value in the same rows/cols/data schema, for embedding matrices in
/// command reports.
pub fn matrix_to_json_value(matrix: &Matrix) -> serde_json::Value {
    let data: Vec<Vec<serde_json::Value>> = (0..matrix.rows())
        .map(|i| {
            (0..matrix.cols())
                .map(|j| {
                    let z = matrix.get(i, j);
                    serde_json::json!({ "re": z.re, "im": z.im })
                })
                .collect()
        })
        .collect();
    serde_json::json!({
        "rows": matrix.rows(),
        "cols": matrix.cols(),
        "data": data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn matrix_market_round_trip() {
        let mut rng = SplitMix64::new(10);
        for complex in [false, true] {
            let a = if complex {
                rng.complex_matrix(3, 4)
            } else {
                rng.uniform_matrix(4, 2)
            };
            let text = to_matrix_market(&a);
            assert!(text.starts_with("%%MatrixMarket matrix array"));
            let back = parse_matrix_market(&text).unwrap();
            assert_eq!(a, back, "bit-exact round trip");
        }
    }

    #[test]
    fn matrix_market_is_column_major() {
        let text = "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n";
        let a = parse_matrix_market(text).unwrap();
        assert_eq!(a, Matrix::from_real_rows(&[&[1.0, 3.0], &[2.0, 4.0]]).unwrap());
    }

    #[test]
    fn matrix_market_rejects_garbage() {
        assert!(parse_matrix_market("junk\n1 1\n0\n").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 0\n").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n").is_err());
    }

    #[test]
    fn csv_round_trips_and_rejects_complex() {
        let a = Matrix::from_real_rows(&[&[1.5, -2.25], &[1.0 / 3.0, 4.0]]).unwrap();
        let text = to_csv(&a).unwrap();
        let back = parse_csv(&text).unwrap();
        assert_eq!(a, back);

        let mut rng = SplitMix64::new(1);
        assert!(to_csv(&rng.complex_matrix(2, 2)).is_err());
        assert!(parse_csv("1,2\n3\n").is_err());
    }

    #[test]
    fn json_round_trips_bit_exactly() {
        let mut rng = SplitMix64::new(2);
        let a = rng.complex_matrix(3, 3);
        let text = to_json(&a);
        let back = parse_json(&text).unwrap();
        assert_eq!(a, back);
        assert!(parse_json("{\"rows\":2,\"cols\":1,\"data\":[[{\"re\":0,\"im\":0}]]}").is_err());
    }
}

