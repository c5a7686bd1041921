//! Block designs and Youden squares developed from a difference set.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::array::{ArrayForm, RowColumnArray};
use crate::diffset::{translate_set, DifferenceSet, Side};
use crate::group::FiniteGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesignError {
    #[error("design has no blocks")]
    Empty,
    #[error("point {point} out of range for {count} points")]
    PointOutOfRange { point: usize, count: usize },
    #[error("block {block} repeats point `{point}`")]
    RepeatedPoint { block: usize, point: String },
    #[error("block {block} is not a proper nonempty subset of the points")]
    NotProper { block: usize },
    #[error("block {block} has size {size}, block 0 has size {expected}")]
    BlockSize {
        block: usize,
        size: usize,
        expected: usize,
    },
    #[error("not symmetric: {points} points but {blocks} blocks")]
    NotSymmetric { points: usize, blocks: usize },
    #[error("point `{point}` lies in {count} blocks, point `{reference}` in {expected}")]
    Replication {
        point: String,
        count: usize,
        reference: String,
        expected: usize,
    },
    #[error("pair {{{}, {}}} lies in {count} blocks, pair {{{}, {}}} in {expected}", pair.0, pair.1, reference.0, reference.1)]
    PairCount {
        pair: (String, String),
        count: usize,
        reference: (String, String),
        expected: usize,
    },
}

/// Parameters `(v, b, r, k, λ)` of a verified design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DesignParams {
    pub v: usize,
    pub b: usize,
    pub r: usize,
    pub k: usize,
    pub lambda: usize,
}

impl DesignParams {
    pub fn is_symmetric(&self) -> bool {
        self.v == self.b
    }
}

impl fmt::Display for DesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_symmetric() {
            write!(f, "({},{},{})-SBIBD", self.v, self.k, self.lambda)
        } else {
            write!(
                f,
                "({},{},{},{},{})-BIBD",
                self.v, self.b, self.r, self.k, self.lambda
            )
        }
    }
}

/// Blocks over points `0..point_count`, kept as a list so repeats survive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDesign {
    labels: Vec<String>,
    blocks: Vec<Vec<usize>>,
}

impl BlockDesign {
    pub fn new(labels: Vec<String>, blocks: Vec<Vec<usize>>) -> Result<Self, DesignError> {
        let count = labels.len();
        for (b, block) in blocks.iter().enumerate() {
            let mut seen = HashSet::new();
            for &p in block {
                if p >= count {
                    return Err(DesignError::PointOutOfRange { point: p, count });
                }
                if !seen.insert(p) {
                    return Err(DesignError::RepeatedPoint {
                        block: b,
                        point: labels[p].clone(),
                    });
                }
            }
        }
        Ok(Self { labels, blocks })
    }

    /// Points labelled `0..v`.
    pub fn unlabelled(point_count: usize, blocks: Vec<Vec<usize>>) -> Result<Self, DesignError> {
        Self::new((0..point_count).map(|p| p.to_string()).collect(), blocks)
    }

    pub fn point_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_labels(&self, b: usize) -> Vec<&str> {
        self.blocks[b]
            .iter()
            .map(|&p| self.labels[p].as_str())
            .collect()
    }

    /// Checks block sizes, replication and pair counts, in that order.
    pub fn verify_bibd(&self) -> Result<DesignParams, DesignError> {
        self.verify(false)
    }

    /// As [`verify_bibd`](Self::verify_bibd), also requiring as many blocks as points.
    pub fn verify_sbibd(&self) -> Result<DesignParams, DesignError> {
        self.verify(true)
    }

    fn verify(&self, symmetric: bool) -> Result<DesignParams, DesignError> {
        let v = self.point_count();
        let b = self.blocks.len();
        let first = self.blocks.first().ok_or(DesignError::Empty)?;
        let k = first.len();
        for (i, block) in self.blocks.iter().enumerate() {
            if block.is_empty() || block.len() >= v {
                return Err(DesignError::NotProper { block: i });
            }
            if block.len() != k {
                return Err(DesignError::BlockSize {
                    block: i,
                    size: block.len(),
                    expected: k,
                });
            }
        }
        if symmetric && v != b {
            return Err(DesignError::NotSymmetric {
                points: v,
                blocks: b,
            });
        }
        let mut replication = vec![0usize; v];
        let mut pairs = vec![0usize; v * v];
        for block in &self.blocks {
            for (i, &p) in block.iter().enumerate() {
                replication[p] += 1;
                for &q in &block[i + 1..] {
                    let (lo, hi) = if p < q { (p, q) } else { (q, p) };
                    pairs[lo * v + hi] += 1;
                }
            }
        }
        let r = replication[0];
        if let Some(p) = (1..v).find(|&p| replication[p] != r) {
            return Err(DesignError::Replication {
                point: self.labels[p].clone(),
                count: replication[p],
                reference: self.labels[0].clone(),
                expected: r,
            });
        }
        let lambda = pairs[1];
        for p in 0..v {
            for q in p + 1..v {
                let count = pairs[p * v + q];
                if count != lambda {
                    return Err(DesignError::PairCount {
                        pair: (self.labels[p].clone(), self.labels[q].clone()),
                        count,
                        reference: (self.labels[0].clone(), self.labels[1].clone()),
                        expected: lambda,
                    });
                }
            }
        }
        Ok(DesignParams { v, b, r, k, lambda })
    }
}

/// `dev(D)`: block `g` is the right translate `Dg`.
pub fn develop(d: &DifferenceSet) -> BlockDesign {
    BlockDesign::new(d.group().names().to_vec(), d.right_translates())
        .expect("translates are subsets of the group")
}

/// A `k x v` array with `Y(i, j) = i·j`, rows indexed by the members of `D`
/// and columns by every group element in index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YoudenSquare {
    group: Arc<FiniteGroup>,
    rows: Vec<usize>,
    cells: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum YoudenError {
    #[error("row order is not a permutation of the difference set")]
    BadRowOrder,
    #[error("column {0} is out of range")]
    BadColumn(usize),
    #[error("YS1 violated: row `{row}` repeats symbol `{symbol}`")]
    RowRepeat { row: String, symbol: String },
    #[error("YS2 violated: {0}")]
    Columns(DesignError),
}

/// Builds the Youden square; `row_order` defaults to `D` in index order.
pub fn build_youden(
    d: &DifferenceSet,
    row_order: Option<&[usize]>,
) -> Result<YoudenSquare, YoudenError> {
    let rows = match row_order {
        None => d.members().to_vec(),
        Some(order) => {
            let mut sorted = order.to_vec();
            sorted.sort_unstable();
            if sorted != d.members() {
                return Err(YoudenError::BadRowOrder);
            }
            order.to_vec()
        }
    };
    let g = Arc::clone(d.group());
    let v = g.order();
    let cells = rows
        .iter()
        .flat_map(|&i| (0..v).map(move |j| (i, j)))
        .map(|(i, j)| g.mul(i, j))
        .collect();
    Ok(YoudenSquare {
        group: g,
        rows,
        cells,
    })
}

impl YoudenSquare {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.group.order()
    }

    pub fn cell(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.width() + col]
    }

    pub fn column_support(&self, col: usize) -> Vec<usize> {
        let mut s: Vec<usize> = (0..self.rows.len()).map(|i| self.cell(i, col)).collect();
        s.sort_unstable();
        s
    }

    /// YS1 and YS2; returns the parameters of the column design.
    pub fn verify(&self) -> Result<DesignParams, YoudenError> {
        let v = self.width();
        for i in 0..self.rows.len() {
            let mut seen = vec![false; v];
            for j in 0..v {
                let s = self.cell(i, j);
                if std::mem::replace(&mut seen[s], true) {
                    return Err(YoudenError::RowRepeat {
                        row: self.group.name(self.rows[i]).into(),
                        symbol: self.group.name(s).into(),
                    });
                }
            }
        }
        let blocks = (0..v).map(|j| self.column_support(j)).collect();
        BlockDesign::new(self.group.names().to_vec(), blocks)
            .and_then(|bd| bd.verify_sbibd())
            .map_err(YoudenError::Columns)
    }

    pub fn row_labels(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|&x| self.group.name(x).to_string())
            .collect()
    }

    pub fn col_labels(&self) -> Vec<String> {
        self.group.names().to_vec()
    }

    pub fn cell_labels(&self) -> Vec<Vec<String>> {
        (0..self.rows.len())
            .map(|i| {
                (0..self.width())
                    .map(|j| self.group.name(self.cell(i, j)).to_string())
                    .collect()
            })
            .collect()
    }

    /// Removes column `col` and blanks every symbol of its support, giving
    /// an RL-form array: rows as here, columns `G` minus `col` in index
    /// order, symbols the elements outside the support in index order.
    pub fn delete_column(&self, col: usize) -> Result<RowColumnArray, YoudenError> {
        let v = self.width();
        if col >= v {
            return Err(YoudenError::BadColumn(col));
        }
        let support = self.column_support(col);
        let mut symbol_id = vec![None; v];
        let mut symbols = Vec::with_capacity(v - support.len());
        for z in (0..v).filter(|z| support.binary_search(z).is_err()) {
            symbol_id[z] = Some(symbols.len());
            symbols.push(self.group.name(z).to_string());
        }
        let cols: Vec<usize> = (0..v).filter(|&j| j != col).collect();
        let cells = (0..self.rows.len())
            .map(|i| cols.iter().map(|&j| symbol_id[self.cell(i, j)]).collect())
            .collect();
        Ok(RowColumnArray::new(
            ArrayForm::Rl,
            self.row_labels(),
            cols.iter()
                .map(|&j| self.group.name(j).to_string())
                .collect(),
            symbols,
            cells,
        )
        .expect("Youden rows and columns are repeat-free"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnionVerdict {
    pub name: String,
    pub blocks: usize,
    pub params: Option<DesignParams>,
    pub error: Option<String>,
}

/// The four block collections built from left, right and two-sided
/// translates, with the design verdict of each cyclic union.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourCycle {
    /// `B1`: left translates that are right translates.
    pub b1: Vec<Vec<usize>>,
    /// `B2`: left translates that are not right translates.
    pub b2: Vec<Vec<usize>>,
    /// `B3`: two-sided translates `xDy` in none of the others.
    pub b3: Vec<Vec<usize>>,
    /// `B4`: right translates that are not left translates.
    pub b4: Vec<Vec<usize>>,
    pub unions: Vec<UnionVerdict>,
    /// Every left translate is a right translate.
    pub degenerate: bool,
}

impl FourCycle {
    pub fn collections(&self) -> [&Vec<Vec<usize>>; 4] {
        [&self.b1, &self.b2, &self.b3, &self.b4]
    }

    pub fn all_unions_symmetric(&self) -> bool {
        self.unions
            .iter()
            .all(|u| u.params.is_some_and(|p| p.is_symmetric()))
    }
}

pub fn four_cycle_blocks(d: &DifferenceSet) -> FourCycle {
    let g = d.group();
    let left: BTreeSet<Vec<usize>> = d.left_translates().into_iter().collect();
    let right: BTreeSet<Vec<usize>> = d.right_translates().into_iter().collect();
    let b1: Vec<Vec<usize>> = left.intersection(&right).cloned().collect();
    let b2: Vec<Vec<usize>> = left.difference(&right).cloned().collect();
    let b4: Vec<Vec<usize>> = right.difference(&left).cloned().collect();

    let two_sided: BTreeSet<Vec<usize>> = (0..g.order())
        .into_par_iter()
        .map(|x| {
            let xd = translate_set(g, d.members(), x, Side::Left);
            (0..g.order())
                .map(|y| translate_set(g, &xd, y, Side::Right))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let b3: Vec<Vec<usize>> = two_sided
        .into_iter()
        .filter(|s| !left.contains(s) && !right.contains(s))
        .collect();

    let parts = [&b1, &b2, &b3, &b4];
    let unions = (0..4)
        .map(|i| {
            let j = (i + 1) % 4;
            let blocks: Vec<Vec<usize>> = parts[i].iter().chain(parts[j]).cloned().collect();
            let count = blocks.len();
            let verdict =
                BlockDesign::new(g.names().to_vec(), blocks).and_then(|bd| bd.verify_sbibd());
            UnionVerdict {
                name: format!("B{}+B{}", i + 1, j + 1),
                blocks: count,
                params: verdict.as_ref().ok().copied(),
                error: verdict.err().map(|e| e.to_string()),
            }
        })
        .collect();
    let degenerate = b2.is_empty() && b4.is_empty();
    FourCycle {
        b1,
        b2,
        b3,
        b4,
        unions,
        degenerate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffset::VerifyOptions;

    fn fano() -> DifferenceSet {
        let g = Arc::new(FiniteGroup::cyclic(7).unwrap());
        DifferenceSet::verify(&g, &[1, 2, 4], VerifyOptions::default()).unwrap()
    }

    fn modular16() -> Arc<FiniteGroup> {
        let a: Vec<usize> = (0..8).map(|x| (x + 1) % 8).collect();
        let b: Vec<usize> = (0..8).map(|x| (5 * x) % 8).collect();
        Arc::new(FiniteGroup::from_permutations(8, &[a, b], None, 1024).unwrap())
    }

    fn words(g: &FiniteGroup, ws: &[&str]) -> Vec<usize> {
        ws.iter().map(|w| g.parse_element(w).unwrap()).collect()
    }

    fn j22() -> DifferenceSet {
        let g = modular16();
        let m = words(&g, &["1", "a", "a^2", "a^5", "a^4b", "a^2b"]);
        DifferenceSet::verify(&g, &m, VerifyOptions::default()).unwrap()
    }

    #[test]
    fn fano_development_matches_pair_oracle() {
        let bd = develop(&fano());
        assert_eq!(bd.blocks().len(), 7);
        assert_eq!(bd.blocks()[0], vec![1, 2, 4]);
        // every pair of points counted by hand over the seven translates
        for p in 0..7 {
            for q in p + 1..7 {
                let n = (0..7)
                    .filter(|g| {
                        let b: Vec<usize> = [1, 2, 4].iter().map(|x| (x + g) % 7).collect();
                        b.contains(&p) && b.contains(&q)
                    })
                    .count();
                assert_eq!(n, 1);
            }
        }
        let p = bd.verify_sbibd().unwrap();
        assert_eq!((p.v, p.b, p.r, p.k, p.lambda), (7, 7, 3, 3, 1));
        assert_eq!(p.to_string(), "(7,3,1)-SBIBD");
    }

    #[test]
    fn perturbed_fano_is_rejected() {
        let mut blocks = develop(&fano()).blocks().to_vec();
        blocks[0] = vec![1, 2, 5];
        let bd = BlockDesign::unlabelled(7, blocks).unwrap();
        assert!(matches!(
            bd.verify_sbibd(),
            Err(DesignError::Replication { .. } | DesignError::PairCount { .. })
        ));
    }

    #[test]
    fn repeated_blocks_are_rejected() {
        let bd = BlockDesign::unlabelled(4, vec![vec![0, 1, 2]; 4]).unwrap();
        let err = bd.verify_sbibd().unwrap_err();
        assert_eq!(
            err,
            DesignError::Replication {
                point: "3".into(),
                count: 0,
                reference: "0".into(),
                expected: 4
            }
        );
        let bd = BlockDesign::unlabelled(7, vec![vec![0, 1, 2]; 4]).unwrap();
        assert_eq!(
            bd.verify_sbibd(),
            Err(DesignError::NotSymmetric {
                points: 7,
                blocks: 4
            })
        );
    }

    #[test]
    fn non_abelian_development() {
        let d = j22();
        let p = develop(&d).verify_sbibd().unwrap();
        assert_eq!((p.v, p.k, p.lambda), (16, 6, 2));
    }

    #[test]
    fn youden_squares() {
        let y = build_youden(&fano(), None).unwrap();
        assert_eq!(y.column_support(0), vec![1, 2, 4]);
        let p = y.verify().unwrap();
        assert_eq!((p.v, p.k, p.lambda), (7, 3, 1));
        let dev = develop(&fano());
        for j in 0..7 {
            assert_eq!(y.column_support(j), dev.blocks()[j]);
        }

        let y = build_youden(&j22(), None).unwrap();
        assert_eq!((y.rows().len(), y.width()), (6, 16));
        // independent YS1 check: every row is a permutation of the group
        for i in 0..6 {
            let mut row: Vec<usize> = (0..16).map(|j| y.cell(i, j)).collect();
            row.sort_unstable();
            assert_eq!(row, (0..16).collect::<Vec<_>>());
        }
        assert!(y.verify().is_ok());

        assert_eq!(
            build_youden(&fano(), Some(&[1, 2, 3])),
            Err(YoudenError::BadRowOrder)
        );
        let reordered = build_youden(&fano(), Some(&[4, 1, 2])).unwrap();
        assert_eq!(reordered.cell(0, 1), 5);
        assert!(reordered.verify().is_ok());
    }

    #[test]
    fn deleting_a_column() {
        let y = build_youden(&fano(), None).unwrap();
        let rl = y.delete_column(0).unwrap();
        assert_eq!(rl.form(), ArrayForm::Rl);
        assert_eq!(rl.shape(), (3, 6));
        assert_eq!(rl.symbols().len(), 4);
        for j in 0..6 {
            assert_eq!(rl.filled_in_col(j), 2);
        }
        for i in 0..3 {
            assert_eq!(rl.filled_in_row(i), 4);
        }
        // every surviving cell is the Youden entry; every blank hides a deleted symbol
        let support = y.column_support(0);
        for i in 0..3 {
            for (jj, j) in (1..7).enumerate() {
                match rl.cell_label(i, jj) {
                    Some(s) => assert_eq!(s, y.group().name(y.cell(i, j))),
                    None => assert!(support.contains(&y.cell(i, j))),
                }
            }
        }
        assert_eq!(y.delete_column(7), Err(YoudenError::BadColumn(7)));
    }

    #[test]
    fn four_cycle_on_modular_group() {
        let fc = four_cycle_blocks(&j22());
        for c in fc.collections() {
            assert_eq!(c.len(), 8);
            assert!(c.iter().all(|b| b.len() == 6));
        }
        assert!(!fc.degenerate);
        assert!(fc.all_unions_symmetric());
        for u in &fc.unions {
            let p = u.params.unwrap();
            assert_eq!((p.v, p.k, p.lambda), (16, 6, 2));
        }
    }

    #[test]
    fn four_cycle_on_abelian_group_is_degenerate() {
        let fc = four_cycle_blocks(&fano());
        assert!(fc.degenerate);
        assert_eq!(fc.b1.len(), 7);
        assert!(fc.b2.is_empty() && fc.b3.is_empty() && fc.b4.is_empty());
        assert!(fc.unions[0].params.is_some());
        assert!(fc.unions[1].params.is_none());
    }
}
