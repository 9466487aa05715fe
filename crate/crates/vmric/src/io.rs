//! Strict CSV ingestion and emission for sample files.
//!
//! Sample files have one header row naming the columns; response columns are
//! `y1..yw` and every other column is a candidate predictor series. Parsing
//! rejects missing cells, non-numeric text and non-finite values.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::selection::DataSet;

/// Parsed sample file: named columns in file order.
#[derive(Debug, Clone)]
pub struct SampleCsv {
    pub columns: Vec<(String, Vec<f64>)>,
}

impl SampleCsv {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    /// Split the columns into predictors and the `y1..yw` response block.
    pub fn into_dataset(self) -> Result<DataSet> {
        let mut responses: Vec<(usize, Vec<f64>)> = Vec::new();
        let mut predictors: Vec<(String, Vec<f64>)> = Vec::new();
        for (name, values) in self.columns {
            match response_index(&name) {
                Some(idx) => responses.push((idx, values)),
                None => predictors.push((name, values)),
            }
        }
        if responses.is_empty() {
            return Err(Error::Parse("no response columns y1..yw found".into()));
        }
        responses.sort_by_key(|(idx, _)| *idx);
        for (pos, (idx, _)) in responses.iter().enumerate() {
            if *idx != pos + 1 {
                return Err(Error::Parse(format!(
                    "response columns must be y1..y{}, found gap at y{}",
                    responses.len(),
                    idx
                )));
            }
        }
        let n = responses[0].1.len();
        let w = responses.len();
        let mut y = Array2::zeros((n, w));
        for (j, (_, col)) in responses.iter().enumerate() {
            for (t, v) in col.iter().enumerate() {
                y[(t, j)] = *v;
            }
        }
        DataSet::new(predictors, y)
    }
}

fn response_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('y')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

/// Read a sample CSV, strictly: header required, every row complete, every
/// cell a finite number.
pub fn read_sample_csv(path: &Path) -> Result<SampleCsv> {
    let file = File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file: missing header row".into()))??;
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    if names.iter().any(|n| n.is_empty()) {
        return Err(Error::Parse("empty column name in header".into()));
    }
    let mut columns: Vec<(String, Vec<f64>)> = names.into_iter().map(|n| (n, Vec::new())).collect();
    for (row_idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            return Err(Error::Parse(format!("blank row at line {}", row_idx + 2)));
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != columns.len() {
            return Err(Error::Parse(format!(
                "row {} has {} cells, expected {}",
                row_idx + 2,
                cells.len(),
                columns.len()
            )));
        }
        for (col, cell) in columns.iter_mut().zip(cells) {
            let value: f64 = cell.trim().parse().map_err(|_| {
                Error::Parse(format!(
                    "row {}, column '{}': cannot parse '{}'",
                    row_idx + 2,
                    col.0,
                    cell.trim()
                ))
            })?;
            if !value.is_finite() {
                return Err(Error::Parse(format!(
                    "row {}, column '{}': non-finite value",
                    row_idx + 2,
                    col.0
                )));
            }
            col.1.push(value);
        }
    }
    if columns[0].1.is_empty() {
        return Err(Error::Parse("no data rows".into()));
    }
    Ok(SampleCsv { columns })
}

/// Write named columns as CSV with a header row.
pub fn write_columns_csv(path: &Path, columns: &[(&str, &[f64])]) -> Result<()> {
    let n = columns.first().map(|(_, v)| v.len()).unwrap_or(0);
    let mut out = BufWriter::new(File::create(path)?);
    let header: Vec<&str> = columns.iter().map(|(n, _)| *n).collect();
    writeln!(out, "{}", header.join(","))?;
    for t in 0..n {
        let mut row = String::new();
        for (i, (_, values)) in columns.iter().enumerate() {
            if i > 0 {
                row.push(',');
            }
            row.push_str(&format!("{:.12}", values[t]));
        }
        writeln!(out, "{row}")?;
    }
    out.flush()?;
    Ok(())
}

/// Write arbitrary pre-formatted rows under a header (table outputs).
pub fn write_table_csv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{header}")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(content: &str) -> std::path::PathBuf {
        let path = std::env::temp_dir().join(format!(
            "vmric_io_test_{}_{}.csv",
            std::process::id(),
            content.len()
        ));
        let mut f = File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    #[test]
    fn parses_wellformed_sample() {
        let path = write_temp("x,y1,y2\n1.0,2.0,3.0\n-1.5,0.25,4.0\n");
        let csv = read_sample_csv(&path).unwrap();
        assert_eq!(csv.column("x").unwrap(), &[1.0, -1.5]);
        let data = csv.into_dataset().unwrap();
        assert_eq!(data.width(), 2);
        assert_eq!(data.predictor("x").unwrap(), &[1.0, -1.5]);
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn rejects_nan_and_missing_cells() {
        let path = write_temp("x,y1\nNaN,1.0\n");
        assert!(matches!(read_sample_csv(&path), Err(Error::Parse(_))));
        std::fs::remove_file(path).ok();

        let path = write_temp("x,y1\n1.0\n");
        assert!(matches!(read_sample_csv(&path), Err(Error::Parse(_))));
        std::fs::remove_file(path).ok();

        let path = write_temp("x,y1\n1.0,oops\n");
        assert!(matches!(read_sample_csv(&path), Err(Error::Parse(_))));
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn rejects_response_gap() {
        let path = write_temp("x,y1,y3\n1.0,1.0,1.0\n");
        let csv = read_sample_csv(&path).unwrap();
        assert!(csv.into_dataset().is_err());
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn roundtrip_write_read() {
        let path = std::env::temp_dir().join(format!("vmric_io_rt_{}.csv", std::process::id()));
        let x = [0.5, -2.0, 1.25];
        let y = [1.0, 2.0, 3.0];
        write_columns_csv(&path, &[("x", &x), ("y1", &y)]).unwrap();
        let csv = read_sample_csv(&path).unwrap();
        assert_eq!(csv.column("x").unwrap(), &x);
        assert_eq!(csv.column("y1").unwrap(), &y);
        std::fs::remove_file(path).ok();
    }
}
