//! JSON reports, CSV tables and the small numeric helpers shared by the
//! subcommands.
//!
//! JSON floats are shortest round-trip decimals; every reported number also
//! carries its hex-float spelling. CSV cells are shortest round-trip decimals.

use std::fs;
use std::io::Write;
use std::path::Path;

use hopfjoin::hexfloat;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// A number with its exact hex spelling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Num {
    pub value: f64,
    pub hex: String,
}

impl From<f64> for Num {
    fn from(value: f64) -> Self {
        Num { value, hex: hexfloat::format(value) }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Series {
    pub values: Vec<f64>,
    pub hex: Vec<String>,
}

impl From<Vec<f64>> for Series {
    fn from(values: Vec<f64>) -> Self {
        let hex = hexfloat::format_slice(&values);
        Series { values, hex }
    }
}

impl Series {
    pub fn max_abs(&self) -> f64 {
        max_abs(self.values.iter().copied())
    }
}

/// Largest magnitude; NaN if any entry is NaN, 0 for an empty sequence.
pub fn max_abs(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |acc: f64, x| {
        if acc.is_nan() || x.is_nan() {
            f64::NAN
        } else {
            acc.max(x.abs())
        }
    })
}

/// `n` equispaced points over `[lo, hi]`, both ends included.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / last })
        .collect()
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => write_text(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn csv_float(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| csv_float(x))).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    write_text(path, &String::from_utf8(bytes).expect("csv output is ascii"))
}

/// A numeric CSV file with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn read_csv(path: &Path) -> CliResult<Table> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let bad = |line: usize, what: String| CliError::Config(format!("{}:{line}: {what}", path.display()));
    let header: Vec<String> = r
        .headers()
        .map_err(|e| bad(1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(|e| bad(i + 2, e.to_string()))?;
        let row = record
            .iter()
            .map(|cell| cell.parse::<f64>().map_err(|_| bad(i + 2, format!("'{cell}' is not a number"))))
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, std::f64::consts::PI, 5e-324] {
            assert_eq!(csv_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(csv_float(0.5), "0.5");
    }

    #[test]
    fn max_abs_propagates_nan() {
        assert_eq!(max_abs([1.0, -3.0, 2.0]), 3.0);
        assert!(max_abs([1.0, f64::NAN, 2.0]).is_nan());
        assert_eq!(max_abs([]), 0.0);
    }

    #[test]
    fn grid_hits_both_ends() {
        let g = grid(0.1, 0.7, 7);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[6], 0.7);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
