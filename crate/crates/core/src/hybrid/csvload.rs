use std::collections::BTreeSet;
use std::path::Path;

use crate::engine::parse_number;
use crate::kernel::{Atom, Term};

use super::HybridError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvHeader {
    Present,
    Absent,
}

fn is_null(cell: &str) -> bool {
    cell.eq_ignore_ascii_case("null")
}

/// Reads a file with [`parse_facts_csv`].
pub fn load_facts_csv(
    path: impl AsRef<Path>,
    pred: &str,
    header: CsvHeader,
    numeric_cols: Option<&BTreeSet<usize>>,
) -> Result<Vec<Atom>, HybridError> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|source| HybridError::Io { path: path.to_path_buf(), source })?;
    parse_facts_csv(&text, pred, header, numeric_cols)
}

/// One fact per row. Cells in `numeric_cols` (0-based) must be numbers;
/// without an explicit set, a column is numeric when every non-null cell in
/// it parses as one. `null` in any case becomes the constant `null`.
pub fn parse_facts_csv(
    text: &str,
    pred: &str,
    header: CsvHeader,
    numeric_cols: Option<&BTreeSet<usize>>,
) -> Result<Vec<Atom>, HybridError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header == CsvHeader::Present)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<(u64, Vec<String>)> = Vec::new();
    let mut width = None;
    if header == CsvHeader::Present {
        let h = reader.headers().map_err(|e| HybridError::Csv(e.to_string()))?;
        width = Some(h.len());
    }
    for rec in reader.records() {
        let rec = rec.map_err(|e| HybridError::Csv(e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let expected = *width.get_or_insert(rec.len());
        if rec.len() != expected {
            return Err(HybridError::RaggedRow { line, expected, found: rec.len() });
        }
        rows.push((line, rec.iter().map(str::to_string).collect()));
    }
    let width = width.unwrap_or(0);
    let numeric: BTreeSet<usize> = match numeric_cols {
        Some(cols) => cols.clone(),
        None => (0..width)
            .filter(|&c| {
                let cells: Vec<&str> = rows.iter().map(|(_, r)| r[c].as_str()).filter(|s| !is_null(s)).collect();
                !cells.is_empty() && cells.iter().all(|s| parse_number(s).is_some())
            })
            .collect(),
    };
    rows.into_iter()
        .enumerate()
        .map(|(i, (_, cells))| {
            let args = cells
                .into_iter()
                .enumerate()
                .map(|(c, cell)| {
                    if is_null(&cell) {
                        Ok(Term::constant("null"))
                    } else if numeric.contains(&c) {
                        parse_number(&cell)
                            .map(Term::Num)
                            .ok_or(HybridError::NumericParseError { row: i + 1, column: c + 1, cell })
                    } else {
                        Ok(Term::constant(cell))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Atom::new(pred, args))
        })
        .collect()
}
