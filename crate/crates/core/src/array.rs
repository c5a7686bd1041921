//! Row-column arrays, in standard form and in RL-form.
//!
//! A standard `r x c` array places one of `v` symbols in every cell with no
//! repeats in any row or column. Swapping the roles of columns and symbols
//! gives the RL-form: an incomplete `r x v` array whose entries are the
//! original columns. Verification counts the four triple-array conditions
//! directly in whichever form the array is in:
//!
//! | standard | RL-form |
//! |----------|---------|
//! | TA1: every symbol occurs `k` times | RTA1: every column has `k` filled cells |
//! | TA2: two rows share `λrr` symbols | RTA2: two rows are both filled in `λrr` columns |
//! | TA3: two columns share `λcc` symbols | RTA3: two symbols share `λcc` columns |
//! | TA4: a row and a column share `λrc` symbols | RTA4: the columns filled in a row hold every symbol `λrc` times |

use std::collections::{HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffset::DifferenceSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrayForm {
    Standard,
    Rl,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrayError {
    #[error("malformed array: {0}")]
    Malformed(String),
    #[error("degenerate {rows}x{cols} array: pairwise conditions are vacuous")]
    Degenerate { rows: usize, cols: usize },
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowColumnArray {
    form: ArrayForm,
    rows: Vec<String>,
    cols: Vec<String>,
    symbols: Vec<String>,
    /// Row-major symbol ids.
    cells: Vec<Option<usize>>,
}

fn check_unique(kind: &str, labels: &[String]) -> Result<(), ArrayError> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(ArrayError::Malformed(format!(
                "duplicate {kind} label `{l}`"
            )));
        }
    }
    Ok(())
}

impl RowColumnArray {
    pub fn new(
        form: ArrayForm,
        rows: Vec<String>,
        cols: Vec<String>,
        symbols: Vec<String>,
        cells: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, ArrayError> {
        check_unique("row", &rows)?;
        check_unique("column", &cols)?;
        check_unique("symbol", &symbols)?;
        if cells.len() != rows.len() {
            return Err(ArrayError::Malformed(format!(
                "{} cell rows for {} row labels",
                cells.len(),
                rows.len()
            )));
        }
        let (r, c) = (rows.len(), cols.len());
        let mut flat = Vec::with_capacity(r * c);
        for (i, row) in cells.into_iter().enumerate() {
            if row.len() != c {
                return Err(ArrayError::Malformed(format!(
                    "row `{}` has {} cells, expected {c}",
                    rows[i],
                    row.len()
                )));
            }
            flat.extend(row);
        }
        let a = Self {
            form,
            rows,
            cols,
            symbols,
            cells: flat,
        };
        a.check_structure()?;
        Ok(a)
    }

    /// Builds an array from label strings; `None` marks a blank cell.
    pub fn from_labels(
        form: ArrayForm,
        rows: Vec<String>,
        cols: Vec<String>,
        symbols: Vec<String>,
        cells: Vec<Vec<Option<String>>>,
    ) -> Result<Self, ArrayError> {
        let lookup: HashMap<&str, usize> = symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let ids =
            cells
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|cell| match cell {
                            None => Ok(None),
                            Some(s) => lookup.get(s.as_str()).copied().map(Some).ok_or_else(|| {
                                ArrayError::Malformed(format!("unknown symbol `{s}`"))
                            }),
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
        Self::new(form, rows, cols, symbols, ids)
    }

    fn check_structure(&self) -> Result<(), ArrayError> {
        let (r, c, m) = (self.rows.len(), self.cols.len(), self.symbols.len());
        let mut seen = vec![false; m];
        for i in 0..r {
            seen.fill(false);
            for j in 0..c {
                match self.cells[i * c + j] {
                    Some(s) if s >= m => {
                        return Err(ArrayError::Malformed(format!("symbol id {s} out of range")))
                    }
                    Some(s) => {
                        if std::mem::replace(&mut seen[s], true) {
                            return Err(ArrayError::Malformed(format!(
                                "symbol `{}` repeated in row `{}`",
                                self.symbols[s], self.rows[i]
                            )));
                        }
                    }
                    None if self.form == ArrayForm::Standard => {
                        return Err(ArrayError::Malformed(format!(
                            "standard-form cell ({}, {}) is empty",
                            self.rows[i], self.cols[j]
                        )))
                    }
                    None => {}
                }
            }
        }
        for j in 0..c {
            seen.fill(false);
            for i in 0..r {
                if let Some(s) = self.cells[i * c + j] {
                    if std::mem::replace(&mut seen[s], true) {
                        return Err(ArrayError::Malformed(format!(
                            "symbol `{}` repeated in column `{}`",
                            self.symbols[s], self.cols[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn form(&self) -> ArrayForm {
        self.form
    }

    pub fn rows(&self) -> &[String] {
        &self.rows
    }

    pub fn cols(&self) -> &[String] {
        &self.cols
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// `(rows, columns)` of the array as stored.
    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn cell(&self, i: usize, j: usize) -> Option<usize> {
        self.cells[i * self.cols.len() + j]
    }

    pub fn cell_label(&self, i: usize, j: usize) -> Option<&str> {
        self.cell(i, j).map(|s| self.symbols[s].as_str())
    }

    pub fn filled_in_row(&self, i: usize) -> usize {
        (0..self.cols.len())
            .filter(|&j| self.cell(i, j).is_some())
            .count()
    }

    pub fn filled_in_col(&self, j: usize) -> usize {
        (0..self.rows.len())
            .filter(|&i| self.cell(i, j).is_some())
            .count()
    }

    /// For each RL row, the column holding each symbol. Fails unless every
    /// symbol appears exactly once per row, i.e. unless the standard form
    /// would be complete.
    fn rl_positions(&self) -> Result<Vec<Vec<usize>>, ArrayError> {
        let c = self.cols.len();
        (0..self.rows.len())
            .map(|i| {
                let mut pos = vec![usize::MAX; self.symbols.len()];
                for j in 0..c {
                    if let Some(s) = self.cell(i, j) {
                        pos[s] = j;
                    }
                }
                if let Some(s) = pos.iter().position(|&p| p == usize::MAX) {
                    return Err(ArrayError::Malformed(format!(
                        "RL row `{}` does not contain symbol `{}`",
                        self.rows[i], self.symbols[s]
                    )));
                }
                Ok(pos)
            })
            .collect()
    }

    pub fn rl_to_standard(&self) -> Result<RowColumnArray, ArrayError> {
        if self.form != ArrayForm::Rl {
            return Err(ArrayError::Malformed("array is not in RL-form".into()));
        }
        let positions = self.rl_positions()?;
        let cells = positions
            .into_iter()
            .map(|pos| pos.into_iter().map(Some).collect())
            .collect();
        RowColumnArray::new(
            ArrayForm::Standard,
            self.rows.clone(),
            self.symbols.clone(),
            self.cols.clone(),
            cells,
        )
    }

    pub fn standard_to_rl(&self) -> Result<RowColumnArray, ArrayError> {
        if self.form != ArrayForm::Standard {
            return Err(ArrayError::Malformed(
                "array is not in standard form".into(),
            ));
        }
        let (r, c) = self.shape();
        let cells = (0..r)
            .map(|i| {
                let mut row = vec![None; self.symbols.len()];
                for j in 0..c {
                    let s = self.cell(i, j).expect("standard form is complete");
                    row[s] = Some(j);
                }
                row
            })
            .collect();
        RowColumnArray::new(
            ArrayForm::Rl,
            self.rows.clone(),
            self.symbols.clone(),
            self.cols.clone(),
            cells,
        )
    }

    /// Counts all four conditions in the array's own form.
    pub fn verify(&self) -> Result<ArrayVerdict, ArrayError> {
        match self.form {
            ArrayForm::Standard => self.verify_standard(),
            ArrayForm::Rl => self.verify_rl(),
        }
    }

    fn verify_standard(&self) -> Result<ArrayVerdict, ArrayError> {
        let (r, c) = self.shape();
        let m = self.symbols.len();
        if r < 2 || c < 2 {
            return Err(ArrayError::Degenerate { rows: r, cols: c });
        }
        let mut row_sets = vec![FixedBitSet::with_capacity(m); r];
        let mut col_sets = vec![FixedBitSet::with_capacity(m); c];
        let mut replication = vec![0usize; m];
        for (i, row_set) in row_sets.iter_mut().enumerate() {
            for (j, col_set) in col_sets.iter_mut().enumerate() {
                let s = self.cell(i, j).expect("standard form is complete");
                row_set.insert(s);
                col_set.insert(s);
                replication[s] += 1;
            }
        }
        let mut v = Tally::new(ArrayForm::Standard, r, c, m);
        v.k = constant(replication.iter().enumerate().map(|(s, &n)| (n, s))).map_err(
            |((a, sa), (b, sb))| {
                format!(
                    "symbol `{}` occurs {a} times but `{}` occurs {b} times",
                    self.symbols[sa], self.symbols[sb]
                )
            },
        );
        v.rr = constant(pair_intersections(&row_sets)).map_err(|((a, (i1, i2)), (b, (j1, j2)))| {
            format!(
                "rows `{}`/`{}` share {a} symbols but rows `{}`/`{}` share {b}",
                self.rows[i1], self.rows[i2], self.rows[j1], self.rows[j2]
            )
        });
        v.cc = constant(pair_intersections(&col_sets)).map_err(|((a, (i1, i2)), (b, (j1, j2)))| {
            format!(
                "columns `{}`/`{}` share {a} symbols but columns `{}`/`{}` share {b}",
                self.cols[i1], self.cols[i2], self.cols[j1], self.cols[j2]
            )
        });
        v.rc = constant(cross_intersections(&row_sets, &col_sets)).map_err(
            |((a, (i1, j1)), (b, (i2, j2)))| {
                format!(
                    "row `{}` and column `{}` share {a} symbols but row `{}` and column `{}` share {b}",
                    self.rows[i1], self.cols[j1], self.rows[i2], self.cols[j2]
                )
            },
        );
        Ok(v.finish())
    }

    fn verify_rl(&self) -> Result<ArrayVerdict, ArrayError> {
        // RL: r rows, `width` columns (the standard symbols), `syms` symbols
        // (the standard columns).
        let (r, width) = self.shape();
        let syms = self.symbols.len();
        if r < 2 || syms < 2 {
            return Err(ArrayError::Degenerate {
                rows: r,
                cols: syms,
            });
        }
        self.rl_positions()?;
        let mut occupied = vec![FixedBitSet::with_capacity(width); r];
        let mut column_symbols: Vec<Vec<usize>> = vec![Vec::new(); width];
        for (i, row) in occupied.iter_mut().enumerate() {
            for (j, symbols) in column_symbols.iter_mut().enumerate() {
                if let Some(s) = self.cell(i, j) {
                    row.insert(j);
                    symbols.push(s);
                }
            }
        }
        let mut v = Tally::new(ArrayForm::Rl, r, syms, width);
        v.k = constant(
            column_symbols
                .iter()
                .enumerate()
                .map(|(j, col)| (col.len(), j)),
        )
        .map_err(|((a, ja), (b, jb))| {
            format!(
                "column `{}` has {a} filled cells but column `{}` has {b}",
                self.cols[ja], self.cols[jb]
            )
        });
        v.rr = constant(pair_intersections(&occupied)).map_err(|((a, (i1, i2)), (b, (j1, j2)))| {
            format!(
                "rows `{}`/`{}` are both filled in {a} columns but rows `{}`/`{}` in {b}",
                self.rows[i1], self.rows[i2], self.rows[j1], self.rows[j2]
            )
        });
        let mut together = vec![0usize; syms * syms];
        for col in &column_symbols {
            for (a, &s) in col.iter().enumerate() {
                for &t in &col[a + 1..] {
                    let (lo, hi) = if s < t { (s, t) } else { (t, s) };
                    together[lo * syms + hi] += 1;
                }
            }
        }
        let pairs = (0..syms).flat_map(|s| (s + 1..syms).map(move |t| (s, t)));
        v.cc = constant(pairs.map(|(s, t)| (together[s * syms + t], (s, t)))).map_err(
            |((a, (s1, t1)), (b, (s2, t2)))| {
                format!(
                    "symbols `{}`/`{}` share {a} columns but `{}`/`{}` share {b}",
                    self.symbols[s1], self.symbols[t1], self.symbols[s2], self.symbols[t2]
                )
            },
        );
        let coverage: Vec<Vec<usize>> = (0..r)
            .into_par_iter()
            .map(|i| {
                let mut counts = vec![0usize; syms];
                for j in occupied[i].ones() {
                    for &s in &column_symbols[j] {
                        counts[s] += 1;
                    }
                }
                counts
            })
            .collect();
        let cells = coverage
            .iter()
            .enumerate()
            .flat_map(|(i, counts)| counts.iter().enumerate().map(move |(s, &n)| (n, (i, s))));
        v.rc = constant(cells).map_err(|((a, (i1, s1)), (b, (i2, s2)))| {
            format!(
                "columns filled in row `{}` hold `{}` {a} times but columns filled in row `{}` hold `{}` {b} times",
                self.rows[i1], self.symbols[s1], self.rows[i2], self.symbols[s2]
            )
        });
        Ok(v.finish())
    }
}

type Disagreement<W> = ((usize, W), (usize, W));

/// First value of the sequence, or the first pair of disagreeing entries.
fn constant<W: Copy>(
    mut values: impl Iterator<Item = (usize, W)>,
) -> Result<usize, Disagreement<W>> {
    let first = values.next().expect("at least one value");
    for other in values {
        if other.0 != first.0 {
            return Err((first, other));
        }
    }
    Ok(first.0)
}

fn pair_intersections(sets: &[FixedBitSet]) -> impl Iterator<Item = (usize, (usize, usize))> {
    let counts: Vec<Vec<usize>> = (0..sets.len())
        .into_par_iter()
        .map(|i| {
            ((i + 1)..sets.len())
                .map(|j| sets[i].intersection_count(&sets[j]))
                .collect()
        })
        .collect();
    counts.into_iter().enumerate().flat_map(|(i, row)| {
        row.into_iter()
            .enumerate()
            .map(move |(d, n)| (n, (i, i + 1 + d)))
    })
}

fn cross_intersections(
    rows: &[FixedBitSet],
    cols: &[FixedBitSet],
) -> impl Iterator<Item = (usize, (usize, usize))> {
    let counts: Vec<Vec<usize>> = rows
        .par_iter()
        .map(|r| cols.iter().map(|c| r.intersection_count(c)).collect())
        .collect();
    counts
        .into_iter()
        .enumerate()
        .flat_map(|(i, row)| row.into_iter().enumerate().map(move |(j, n)| (n, (i, j))))
}

struct Tally {
    form: ArrayForm,
    rows: usize,
    cols: usize,
    symbols: usize,
    k: Result<usize, String>,
    rr: Result<usize, String>,
    cc: Result<usize, String>,
    rc: Result<usize, String>,
}

impl Tally {
    fn new(form: ArrayForm, rows: usize, cols: usize, symbols: usize) -> Self {
        let pending = || Err(String::new());
        Self {
            form,
            rows,
            cols,
            symbols,
            k: pending(),
            rr: pending(),
            cc: pending(),
            rc: pending(),
        }
    }

    fn finish(self) -> ArrayVerdict {
        let mut violations = Vec::new();
        let conditions = [
            (Condition::Replication, &self.k),
            (Condition::RowRow, &self.rr),
            (Condition::ColCol, &self.cc),
            (Condition::RowCol, &self.rc),
        ];
        for (condition, result) in conditions {
            if let Err(witness) = result {
                violations.push(Violation {
                    condition,
                    form: self.form,
                    witness: witness.clone(),
                });
            }
        }
        let double_array = self.k.is_ok() && self.rr.is_ok() && self.cc.is_ok();
        ArrayVerdict {
            form: self.form,
            rows: self.rows,
            cols: self.cols,
            symbols: self.symbols,
            k: self.k.ok(),
            lambda_rr: self.rr.ok(),
            lambda_cc: self.cc.ok(),
            lambda_rc: self.rc.as_ref().ok().copied(),
            double_array,
            triple_array: double_array && self.rc.is_ok(),
            extremal: self.symbols + 1 == self.rows + self.cols,
            violations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    Replication,
    RowRow,
    ColCol,
    RowCol,
}

impl Condition {
    pub fn label(self, form: ArrayForm) -> &'static str {
        match (form, self) {
            (ArrayForm::Standard, Condition::Replication) => "TA1",
            (ArrayForm::Standard, Condition::RowRow) => "TA2",
            (ArrayForm::Standard, Condition::ColCol) => "TA3",
            (ArrayForm::Standard, Condition::RowCol) => "TA4",
            (ArrayForm::Rl, Condition::Replication) => "RTA1",
            (ArrayForm::Rl, Condition::RowRow) => "RTA2",
            (ArrayForm::Rl, Condition::ColCol) => "RTA3",
            (ArrayForm::Rl, Condition::RowCol) => "RTA4",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub form: ArrayForm,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violated: {}",
            self.condition.label(self.form),
            self.witness
        )
    }
}

/// Outcome of counting the four conditions.
///
/// `rows`, `cols` and `symbols` always describe the standard form, so the
/// verdict of an array and of its RL-form agree field by field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArrayVerdict {
    pub form: ArrayForm,
    pub rows: usize,
    pub cols: usize,
    pub symbols: usize,
    pub k: Option<usize>,
    pub lambda_rr: Option<usize>,
    pub lambda_cc: Option<usize>,
    pub lambda_rc: Option<usize>,
    pub double_array: bool,
    pub triple_array: bool,
    pub extremal: bool,
    pub violations: Vec<Violation>,
}

impl ArrayVerdict {
    pub fn is_equireplicate(&self) -> bool {
        self.k.is_some()
    }

    pub fn ta_params(&self) -> Option<TaParams> {
        if !self.triple_array {
            return None;
        }
        Some(TaParams {
            v: self.symbols,
            k: self.k?,
            lambda_rr: self.lambda_rr?,
            lambda_cc: self.lambda_cc?,
            lambda_rc: self.lambda_rc?,
            rows: self.rows,
            cols: self.cols,
        })
    }

    /// The counted values with the form stripped, for cross-form comparison.
    pub fn counts(&self) -> (usize, usize, usize, [Option<usize>; 4], bool, bool, bool) {
        (
            self.rows,
            self.cols,
            self.symbols,
            [self.k, self.lambda_rr, self.lambda_cc, self.lambda_rc],
            self.double_array,
            self.triple_array,
            self.extremal,
        )
    }

    /// One-line summary such as `TA(15,4,6,2,4 : 6x10)`.
    pub fn summary(&self) -> String {
        if let Some(p) = self.ta_params() {
            return p.to_string();
        }
        if self.double_array {
            let first = self
                .violations
                .first()
                .map(|v| format!("; {v}"))
                .unwrap_or_default();
            return format!(
                "DA({},{},{},{} : {}x{}){first}",
                self.symbols,
                self.k.unwrap_or(0),
                self.lambda_rr.unwrap_or(0),
                self.lambda_cc.unwrap_or(0),
                self.rows,
                self.cols
            );
        }
        let reasons: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        format!(
            "not a double array ({}x{} on {} symbols): {}",
            self.rows,
            self.cols,
            self.symbols,
            reasons.join("; ")
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TaParams {
    pub v: usize,
    pub k: usize,
    pub lambda_rr: usize,
    pub lambda_cc: usize,
    pub lambda_rc: usize,
    pub rows: usize,
    pub cols: usize,
}

impl TaParams {
    /// `λrc = r - λcc` (extremal case).
    pub fn lambda_rc_identity_holds(&self) -> bool {
        self.lambda_rc + self.lambda_cc == self.rows
    }
}

impl fmt::Display for TaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TA({},{},{},{},{} : {}x{})",
            self.v, self.k, self.lambda_rr, self.lambda_cc, self.lambda_rc, self.rows, self.cols
        )
    }
}

/// Parameters every extremal `r x c` triple array with replication `k` must
/// have: `TA(r+c-1, k, c-k, r-k, k : r x c)`.
pub fn derive_parameters(rows: usize, cols: usize, k: usize) -> Result<TaParams, ArrayError> {
    if rows == 0 || cols == 0 || k == 0 || k > rows || k > cols {
        return Err(ArrayError::ParameterMismatch(format!(
            "k = {k} is incompatible with a {rows}x{cols} array"
        )));
    }
    let v = rows + cols - 1;
    if rows * cols != v * k {
        return Err(ArrayError::ParameterMismatch(format!(
            "{rows}x{cols} cells cannot hold {v} symbols {k} times each"
        )));
    }
    let p = TaParams {
        v,
        k,
        lambda_rr: cols - k,
        lambda_cc: rows - k,
        lambda_rc: k,
        rows,
        cols,
    };
    debug_assert!(p.lambda_rc_identity_holds());
    Ok(p)
}

/// The array `A(G,D)`: rows indexed by `D`, columns by `G \ D`, entry
/// `x⁻¹y`, over the non-identity elements.
pub fn direct_construct(d: &DifferenceSet, row_order: Option<&[usize]>) -> RowColumnArray {
    let g = d.group();
    let rows: Vec<usize> = row_order.map_or_else(|| d.members().to_vec(), <[usize]>::to_vec);
    let cols: Vec<usize> = (0..g.order()).filter(|&y| !d.contains(y)).collect();
    let symbols: Vec<usize> = (0..g.order()).filter(|&z| z != g.identity()).collect();
    let mut symbol_id = vec![usize::MAX; g.order()];
    for (i, &z) in symbols.iter().enumerate() {
        symbol_id[z] = i;
    }
    let cells = rows
        .iter()
        .map(|&x| {
            cols.iter()
                .map(|&y| Some(symbol_id[g.mul(g.inv(x), y)]))
                .collect()
        })
        .collect();
    let label = |v: &[usize]| v.iter().map(|&x| g.name(x).to_string()).collect();
    RowColumnArray::new(
        ArrayForm::Standard,
        label(&rows),
        label(&cols),
        label(&symbols),
        cells,
    )
    .expect("cancellation keeps lines repeat-free")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TripleCriterion {
    /// `|x⁻¹D ∩ D⁽⁻¹⁾y|` is the same for all pairs; the row-column overlap
    /// of `A(G,D)` is then `k` minus that value.
    Constant {
        intersection: usize,
        lambda_rc: usize,
    },
    Varies {
        first: (String, String, usize),
        second: (String, String, usize),
    },
}

impl TripleCriterion {
    pub fn holds(&self) -> bool {
        matches!(self, TripleCriterion::Constant { .. })
    }
}

/// Evaluates `|x⁻¹D ∩ D⁽⁻¹⁾y|` over `x ∈ D`, `y ∈ G \ D`.
pub fn triple_criterion(d: &DifferenceSet) -> TripleCriterion {
    let g = d.group();
    let v = g.order();
    let inverse: Vec<usize> = d.inverse_members();
    let mut first: Option<(usize, usize, usize)> = None;
    for &x in d.members() {
        let mut row = FixedBitSet::with_capacity(v);
        for &z in d.members() {
            row.insert(g.mul(g.inv(x), z));
        }
        for y in (0..v).filter(|&y| !d.contains(y)) {
            let size = inverse
                .iter()
                .filter(|&&z| row.contains(g.mul(z, y)))
                .count();
            match first {
                None => first = Some((x, y, size)),
                Some((fx, fy, fs)) if fs != size => {
                    return TripleCriterion::Varies {
                        first: (g.name(fx).into(), g.name(fy).into(), fs),
                        second: (g.name(x).into(), g.name(y).into(), size),
                    }
                }
                Some(_) => {}
            }
        }
    }
    let intersection = first.map_or(0, |(_, _, s)| s);
    TripleCriterion::Constant {
        intersection,
        lambda_rc: d.params().k - intersection,
    }
}
