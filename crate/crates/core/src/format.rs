//! Text grid, CSV and JSON renderings of arrays and Youden squares.
//!
//! Grids look like
//!
//! ```text
//! # form=standard rows=2 cols=3
//! # symbols: x y z
//! *  c0 c1 c2
//! r0 x  y  z
//! r1 y  z  x
//! ```
//!
//! with `.` marking a blank cell. They parse back to the same array.

use serde::{Deserialize, Serialize};

use crate::array::{ArrayError, ArrayForm, RowColumnArray};
use crate::designs::{BlockDesign, YoudenSquare};

const BLANK: &str = ".";
const CORNER: &str = "*";

fn form_name(form: ArrayForm) -> &'static str {
    match form {
        ArrayForm::Standard => "standard",
        ArrayForm::Rl => "rl",
    }
}

/// Left-aligned columns separated by one space, no trailing whitespace.
fn aligned(lines: &[Vec<String>]) -> String {
    let width = lines
        .iter()
        .flatten()
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for line in lines {
        let mut text = String::new();
        for (i, cell) in line.iter().enumerate() {
            if i > 0 {
                text.push(' ');
            }
            text.push_str(cell);
            if i + 1 < line.len() {
                text.push_str(&" ".repeat(width - cell.chars().count()));
            }
        }
        out.push_str(&text);
        out.push('\n');
    }
    out
}

fn table_lines(cols: &[String], rows: &[String], cells: &[Vec<String>]) -> Vec<Vec<String>> {
    let mut lines = Vec::with_capacity(rows.len() + 1);
    lines.push(
        std::iter::once(CORNER.to_string())
            .chain(cols.iter().cloned())
            .collect(),
    );
    for (label, row) in rows.iter().zip(cells) {
        lines.push(
            std::iter::once(label.clone())
                .chain(row.iter().cloned())
                .collect(),
        );
    }
    lines
}

fn array_cells(a: &RowColumnArray, blank: &str) -> Vec<Vec<String>> {
    let (r, c) = a.shape();
    (0..r)
        .map(|i| {
            (0..c)
                .map(|j| a.cell_label(i, j).unwrap_or(blank).to_string())
                .collect()
        })
        .collect()
}

pub fn array_to_grid(a: &RowColumnArray) -> String {
    let (r, c) = a.shape();
    let mut out = format!("# form={} rows={r} cols={c}\n", form_name(a.form()));
    out.push_str(&format!("# symbols: {}\n", a.symbols().join(" ")));
    out.push_str(&aligned(&table_lines(
        a.cols(),
        a.rows(),
        &array_cells(a, BLANK),
    )));
    out
}

/// Parses [`array_to_grid`] output. Without a `# symbols:` line the symbols
/// are taken in order of first appearance.
pub fn parse_grid(text: &str) -> Result<RowColumnArray, ArrayError> {
    let malformed = |m: &str| ArrayError::Malformed(m.to_string());
    let mut form = ArrayForm::Standard;
    let mut symbols: Option<Vec<String>> = None;
    let mut table: Vec<Vec<String>> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(list) = comment.strip_prefix("symbols:") {
                symbols = Some(list.split_whitespace().map(str::to_string).collect());
            } else {
                for field in comment.split_whitespace() {
                    match field {
                        "form=rl" => form = ArrayForm::Rl,
                        "form=standard" => form = ArrayForm::Standard,
                        _ => {}
                    }
                }
            }
            continue;
        }
        table.push(line.split_whitespace().map(str::to_string).collect());
    }
    let header = table
        .first()
        .ok_or_else(|| malformed("grid has no header line"))?;
    if header.first().map(String::as_str) != Some(CORNER) {
        return Err(malformed("grid header must start with `*`"));
    }
    let cols: Vec<String> = header[1..].to_vec();
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for line in &table[1..] {
        if line.len() != cols.len() + 1 {
            return Err(ArrayError::Malformed(format!(
                "row `{}` has {} cells, expected {}",
                line[0],
                line.len() - 1,
                cols.len()
            )));
        }
        rows.push(line[0].clone());
        cells.push(
            line[1..]
                .iter()
                .map(|s| (s != BLANK).then(|| s.clone()))
                .collect::<Vec<_>>(),
        );
    }
    let symbols = symbols.unwrap_or_else(|| {
        let mut seen = Vec::new();
        for s in cells.iter().flatten().flatten() {
            if !seen.contains(s) {
                seen.push(s.clone());
            }
        }
        seen
    });
    RowColumnArray::from_labels(form, rows, cols, symbols, cells)
}

/// CSV with a header of column labels; the first field of each record is the
/// row label and blank cells are empty fields.
pub fn array_to_csv(a: &RowColumnArray) -> Result<String, csv::Error> {
    let cells = array_cells(a, "");
    write_csv(a.cols(), a.rows(), &cells)
}

fn write_csv(
    cols: &[String],
    rows: &[String],
    cells: &[Vec<String>],
) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(std::iter::once("").chain(cols.iter().map(String::as_str)))?;
    for (label, row) in rows.iter().zip(cells) {
        w.write_record(std::iter::once(label.as_str()).chain(row.iter().map(String::as_str)))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("labels are UTF-8"))
}

/// JSON array interchange; blank cells are `""`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayJson {
    pub form: ArrayForm,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub symbols: Vec<String>,
    pub cells: Vec<Vec<String>>,
}

impl ArrayJson {
    pub fn from_array(a: &RowColumnArray) -> Self {
        Self {
            form: a.form(),
            rows: a.rows().to_vec(),
            cols: a.cols().to_vec(),
            symbols: a.symbols().to_vec(),
            cells: array_cells(a, ""),
        }
    }

    pub fn into_array(self) -> Result<RowColumnArray, ArrayError> {
        let cells = self
            .cells
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|s| (!s.is_empty()).then_some(s))
                    .collect()
            })
            .collect();
        RowColumnArray::from_labels(self.form, self.rows, self.cols, self.symbols, cells)
    }
}

/// Reads either a JSON document or a text grid.
pub fn parse_array(text: &str) -> Result<RowColumnArray, ArrayError> {
    if text.trim_start().starts_with('{') {
        let json: ArrayJson = serde_json::from_str(text)
            .map_err(|e| ArrayError::Malformed(format!("invalid array JSON: {e}")))?;
        json.into_array()
    } else {
        parse_grid(text)
    }
}

/// Youden square / block-list JSON: `{"rows", "cols", "cells"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridJson {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub cells: Vec<Vec<String>>,
}

impl GridJson {
    pub fn from_youden(y: &YoudenSquare) -> Self {
        Self {
            rows: y.row_labels(),
            cols: y.col_labels(),
            cells: y.cell_labels(),
        }
    }

    /// One row per block, `cols` numbering the positions within a block.
    pub fn from_design(bd: &BlockDesign) -> Self {
        let k = bd.blocks().iter().map(Vec::len).max().unwrap_or(0);
        Self {
            rows: (0..bd.blocks().len()).map(|b| b.to_string()).collect(),
            cols: (0..k).map(|i| i.to_string()).collect(),
            cells: (0..bd.blocks().len())
                .map(|b| bd.block_labels(b).into_iter().map(str::to_string).collect())
                .collect(),
        }
    }

    pub fn to_grid(&self) -> String {
        aligned(&table_lines(&self.cols, &self.rows, &self.cells))
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        write_csv(&self.cols, &self.rows, &self.cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::direct_construct;
    use crate::catalog::load_entry;
    use crate::designs::build_youden;

    #[test]
    fn grid_round_trip() {
        let d = load_entry("D.8").unwrap();
        let a = direct_construct(&d, None);
        let text = array_to_grid(&a);
        assert!(text.starts_with("# form=standard rows=6 cols=10\n"));
        assert_eq!(parse_grid(&text).unwrap(), a);

        let rl = build_youden(&d, None).unwrap().delete_column(3).unwrap();
        let text = array_to_grid(&rl);
        assert!(text.contains(" . "));
        let back = parse_grid(&text).unwrap();
        assert_eq!(back, rl);
        assert_eq!(back.verify().unwrap(), rl.verify().unwrap());
    }

    #[test]
    fn grid_without_symbol_line() {
        let text = "* c0 c1\nr0 x y\nr1 y x\n";
        let a = parse_grid(text).unwrap();
        assert_eq!(a.symbols(), ["x", "y"]);
        assert_eq!(a.verify().unwrap().k, Some(2));
        assert!(parse_grid("c0 c1\nr0 x y\n").is_err());
        assert!(parse_grid("* c0 c1\nr0 x\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = load_entry("Fano").unwrap();
        let rl = build_youden(&d, None).unwrap().delete_column(0).unwrap();
        let text = serde_json::to_string(&ArrayJson::from_array(&rl)).unwrap();
        assert!(text.contains("\"form\":\"rl\"") && text.contains("\"\""));
        assert_eq!(parse_array(&text).unwrap(), rl);
    }

    #[test]
    fn csv_output() {
        let d = load_entry("Fano").unwrap();
        let csv = array_to_csv(&direct_construct(&d, None)).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(",0,3,5,6"));
        assert_eq!(lines.count(), 3);
    }
}
