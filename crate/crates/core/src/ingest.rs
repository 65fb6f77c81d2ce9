//! CSV ingestion: comma-delimited, header row required, `.` decimal,
//! RFC 4180 quoting. Empty cells, `NA` and `NaN` are missing.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::FeatureSeries;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub features: Vec<FeatureSeries>,
    pub rows: usize,
    /// Cells per column that were neither numeric nor a missing token.
    pub invalid_cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnDiagnostic {
    pub name: String,
    pub missing: usize,
    pub invalid: usize,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<&FeatureSeries> {
        self.features.iter().find(|f| f.name == name)
    }

    pub fn diagnostics(&self) -> Vec<ColumnDiagnostic> {
        self.features
            .iter()
            .zip(&self.invalid_cells)
            .map(|(f, &invalid)| ColumnDiagnostic {
                name: f.name.clone(),
                missing: f.missing_count,
                invalid,
            })
            .collect()
    }
}

enum Cell {
    Value(f64),
    Missing,
    Invalid,
}

fn parse_cell(raw: &str) -> Cell {
    let t = raw.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("na") || t.eq_ignore_ascii_case("nan") {
        return Cell::Missing;
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Cell::Value(v),
        Ok(_) => Cell::Missing,
        Err(_) => Cell::Invalid,
    }
}

pub fn parse_csv(bytes: &[u8]) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(bytes);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Parse(format!("unreadable header: {e}")))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::Parse("missing header row".into()));
    }

    let mut cells: Vec<Vec<Option<f64>>> = vec![Vec::new(); header.len()];
    let mut invalid = vec![0usize; header.len()];
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(format!("malformed CSV: {e}")))?;
        rows += 1;
        for (col, out) in cells.iter_mut().enumerate() {
            let cell = record.get(col).map_or(Cell::Missing, parse_cell);
            out.push(match cell {
                Cell::Value(v) => Some(v),
                Cell::Missing => None,
                Cell::Invalid => {
                    invalid[col] += 1;
                    None
                }
            });
        }
    }
    if rows == 0 {
        return Err(Error::Parse("no data rows".into()));
    }
    let features = header
        .into_iter()
        .zip(cells)
        .map(|(name, col)| FeatureSeries::from_cells(name, col))
        .collect();
    Ok(Table {
        features,
        rows,
        invalid_cells: invalid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_cell_counted() {
        let t = parse_csv(b"a,b\n1,2\n3,\n").unwrap();
        assert_eq!(t.rows, 2);
        assert_eq!(t.features[0].values(), &[1.0, 3.0]);
        assert_eq!(t.features[1].values(), &[2.0]);
        assert_eq!(t.features[1].missing_count, 1);
    }

    #[test]
    fn missing_tokens_and_quotes() {
        let t = parse_csv(b"x,\"y, z\"\nNA,1.5\nNaN,\"2.5\"\n 4 ,abc\n").unwrap();
        assert_eq!(t.features[1].name, "y, z");
        assert_eq!(t.features[0].values(), &[4.0]);
        assert_eq!(t.features[0].missing_count, 2);
        assert_eq!(t.features[1].values(), &[1.5, 2.5]);
        assert_eq!(t.invalid_cells, vec![0, 1]);
        assert_eq!(t.diagnostics()[1].invalid, 1);
    }

    #[test]
    fn short_rows_are_missing() {
        let t = parse_csv(b"a,b,c\n1\n2,3,4\n").unwrap();
        assert_eq!(t.features[2].missing_count, 1);
        assert_eq!(t.column("c").unwrap().values(), &[4.0]);
        assert!(t.column("d").is_none());
    }

    #[test]
    fn infinities_are_missing() {
        let t = parse_csv(b"a\ninf\n-Infinity\n1e400\n7\n").unwrap();
        assert_eq!(t.features[0].values(), &[7.0]);
        assert_eq!(t.features[0].missing_count, 3);
    }

    #[test]
    fn empty_inputs_rejected() {
        assert!(parse_csv(b"").is_err());
        assert!(parse_csv(b"a,b\n").is_err());
        assert!(parse_csv(b"\n\n").is_err());
    }
}
