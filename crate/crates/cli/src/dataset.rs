//! Rectangular numeric tables read from and written to CSV.
//!
//! Every cell must parse as a float except those of an optional block
//! column, which holds free-form labels.

use std::path::Path;

use sparseperm::DesignMatrix;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TabularDataset {
    /// Header in file order, block column included.
    pub header: Vec<String>,
    /// Numeric cells row by row, block column excluded.
    pub rows: Vec<Vec<f64>>,
    /// Position of the block column in `header`.
    pub block_index: Option<usize>,
    pub blocks: Vec<String>,
}

impl TabularDataset {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Names of the numeric columns in order.
    pub fn numeric_columns(&self) -> Vec<&str> {
        self.header
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != self.block_index)
            .map(|(_, h)| h.as_str())
            .collect()
    }

    fn position(&self, name: &str) -> Result<usize> {
        self.numeric_columns()
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| {
                CliError::Config(format!(
                    "no numeric column named {name:?} (have {})",
                    self.numeric_columns().join(", ")
                ))
            })
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let j = self.position(name)?;
        Ok(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn block_labels(&self) -> Option<&[String]> {
        self.block_index.map(|_| self.blocks.as_slice())
    }

    /// Design matrix and response. Predictors default to every numeric column
    /// other than the response; `intercept` prepends a column of ones.
    pub fn regression(
        &self,
        response: &str,
        predictors: Option<&[String]>,
        intercept: bool,
    ) -> Result<(DesignMatrix, Vec<f64>, Vec<String>)> {
        let y = self.column(response)?;
        let mut names: Vec<String> = match predictors {
            Some(p) => p.to_vec(),
            None => self
                .numeric_columns()
                .into_iter()
                .filter(|h| *h != response)
                .map(String::from)
                .collect(),
        };
        if names.iter().any(|p| p == response) {
            return Err(CliError::Config(format!(
                "response {response:?} listed as a predictor"
            )));
        }
        let idx: Vec<usize> = names
            .iter()
            .map(|p| self.position(p))
            .collect::<Result<_>>()?;
        if intercept {
            names.insert(0, "intercept".into());
        }
        if names.is_empty() {
            return Err(CliError::Config("no predictor columns".into()));
        }
        let rows: Vec<Vec<f64>> = self
            .rows
            .iter()
            .map(|r| {
                let mut row: Vec<f64> = Vec::with_capacity(names.len());
                if intercept {
                    row.push(1.0);
                }
                row.extend(idx.iter().map(|&j| r[j]));
                row
            })
            .collect();
        Ok((DesignMatrix::from_rows(&rows)?, y, names))
    }
}

/// Reads a comma-separated table with a header row. Row numbers in errors
/// count the header as row 1.
pub fn load_csv(path: &Path, block_column: Option<&str>) -> Result<TabularDataset> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    parse_csv(file, block_column).map_err(|e| match e {
        CliError::Io { message, .. } => CliError::io(path, message),
        other => other,
    })
}

pub fn parse_csv<R: std::io::Read>(
    reader: R,
    block_column: Option<&str>,
) -> Result<TabularDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| CliError::io("<csv>", e))?
        .iter()
        .map(String::from)
        .collect();
    if header.is_empty() || header.iter().all(|h| h.is_empty()) {
        return Err(CliError::io("<csv>", "missing header row"));
    }
    let block_index = match block_column {
        Some(b) => Some(
            header
                .iter()
                .position(|h| h == b)
                .ok_or_else(|| CliError::Config(format!("no column named {b:?} for blocks")))?,
        ),
        None => None,
    };

    let mut rows = Vec::new();
    let mut blocks = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| CliError::io("<csv>", format!("row {line}: {e}")))?;
        if rec.len() != header.len() {
            return Err(CliError::io(
                "<csv>",
                format!(
                    "row {line} has {} fields, header has {}",
                    rec.len(),
                    header.len()
                ),
            ));
        }
        let mut row = Vec::with_capacity(header.len());
        for (j, cell) in rec.iter().enumerate() {
            if Some(j) == block_index {
                blocks.push(cell.to_string());
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| {
                CliError::io(
                    "<csv>",
                    format!(
                        "row {line}, column {:?}: {cell:?} is not a number",
                        header[j]
                    ),
                )
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    Ok(TabularDataset {
        header,
        rows,
        block_index,
        blocks,
    })
}

/// Writes `data` so that [`load_csv`] reproduces it bit for bit.
pub fn write_csv(data: &TabularDataset, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let io = |e: csv::Error| CliError::io(path, e);
    w.write_record(&data.header).map_err(io)?;
    for (i, row) in data.rows.iter().enumerate() {
        let mut nums = row.iter();
        let record: Vec<String> = (0..data.header.len())
            .map(|j| {
                if Some(j) == data.block_index {
                    data.blocks[i].clone()
                } else {
                    nums.next().map(|v| v.to_string()).unwrap_or_default()
                }
            })
            .collect();
        w.write_record(&record).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_notation_and_blocks() {
        let text = "site,y,x\nA,1e-3,2\nB, -4.5 ,0.25\n";
        let d = parse_csv(text.as_bytes(), Some("site")).unwrap();
        assert_eq!(d.column("y").unwrap(), vec![0.001, -4.5]);
        assert_eq!(d.blocks, vec!["A", "B"]);
        assert_eq!(d.numeric_columns(), vec!["y", "x"]);
    }

    #[test]
    fn ragged_row_is_named() {
        let err = parse_csv("a,b\n1,2\n3\n".as_bytes(), None).unwrap_err();
        assert!(err.to_string().contains("row 3"), "{err}");
    }

    #[test]
    fn text_outside_block_column_is_rejected() {
        let err = parse_csv("a,b\n1,x\n".as_bytes(), None).unwrap_err();
        assert!(err.to_string().contains("row 2"), "{err}");
        assert!(matches!(err, CliError::Io { .. }));
    }

    #[test]
    fn regression_with_intercept() {
        let d = parse_csv("y,a,b\n1,2,3\n4,5,6\n7,8,10\n".as_bytes(), None).unwrap();
        let (x, y, names) = d.regression("y", None, true).unwrap();
        assert_eq!(names, vec!["intercept", "a", "b"]);
        assert_eq!(x.row(2), vec![1.0, 8.0, 10.0]);
        assert_eq!(y, vec![1.0, 4.0, 7.0]);
        assert!(matches!(
            d.regression("z", None, false),
            Err(CliError::Config(_))
        ));
    }
}
