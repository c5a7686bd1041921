//! Shipped difference sets and the builtin groups they live in.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::diffset::{DiffSetError, DifferenceSet, DsParams, MultiplierReport, VerifyOptions};
use crate::group::{FiniteGroup, GroupError, DEFAULT_ORDER_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("no catalog entry `{id}`; available: {}", available.join(", "))]
    NotFound { id: String, available: Vec<String> },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    DiffSet(#[from] DiffSetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    /// Builtin group spec accepted by [`builtin_group`].
    pub group_spec: &'static str,
    /// Short group name used in report rows.
    pub group_label: &'static str,
    /// Set number used in report rows.
    pub set_label: &'static str,
    pub members: &'static [&'static str],
    pub params: (usize, usize, usize),
    /// `(reversible translates, weak multiplier -1, |S|)` where known.
    pub expected_report: Option<(usize, usize, usize)>,
    pub note: &'static str,
}

impl CatalogEntry {
    pub fn ds_params(&self) -> DsParams {
        DsParams::new(self.params.0, self.params.1, self.params.2)
    }

    pub fn load(&self) -> Result<DifferenceSet, CatalogError> {
        let group = Arc::new(builtin_group(self.group_spec)?);
        let members = self
            .members
            .iter()
            .map(|w| group.parse_element(w))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DifferenceSet::verify_with_params(
            &group,
            &members,
            self.ds_params(),
            VerifyOptions::default(),
        )?)
    }

    pub fn report_matches(&self, report: &MultiplierReport) -> Option<bool> {
        self.expected_report.map(|t| t == report.triple())
    }
}

pub const ENTRIES: [CatalogEntry; 8] = [
    CatalogEntry {
        id: "B.3",
        group_spec: "B",
        group_label: "B",
        set_label: "3",
        members: &["1", "a", "a^2", "b", "ab^2", "a^2b^3"],
        params: (16, 6, 2),
        expected_report: None,
        note: "Z4 x Z4, admits -1 as multiplier",
    },
    CatalogEntry {
        id: "B.5",
        group_spec: "B",
        group_label: "B",
        set_label: "5",
        members: &["1", "a", "b", "a^2b", "ab^2", "a^2b^2"],
        params: (16, 6, 2),
        expected_report: None,
        note: "Z4 x Z4, admits -1 as multiplier",
    },
    CatalogEntry {
        id: "C.7",
        group_spec: "C",
        group_label: "C",
        set_label: "7",
        members: &["1", "a", "a^2", "ab", "ac", "a^3bc"],
        params: (16, 6, 2),
        expected_report: None,
        note: "Z4 x Z2 x Z2, admits -1 as multiplier",
    },
    CatalogEntry {
        id: "D.8",
        group_spec: "D",
        group_label: "D",
        set_label: "8",
        members: &["1", "a", "b", "c", "d", "abcd"],
        params: (16, 6, 2),
        expected_report: None,
        note: "Z2^4, reversible as listed",
    },
    CatalogEntry {
        id: "AII.17",
        group_spec: "AII",
        group_label: "AII",
        set_label: "17",
        members: &[
            "1", "a", "a^2", "c", "a^2c", "bc", "a^2bc", "b^2c", "a^2b^2c", "ad", "a^2bd", "b^2d",
            "acd", "bcd", "a^2b^2cd",
        ],
        params: (36, 15, 6),
        expected_report: None,
        note: "Z3^2 x Z2^2, admits -1 as multiplier",
    },
    CatalogEntry {
        id: "J.22",
        group_spec: "J",
        group_label: "J",
        set_label: "22",
        members: &["1", "a", "a^2", "a^5", "a^4b", "a^2b"],
        params: (16, 6, 2),
        expected_report: Some((4, 8, 8)),
        note: "<a,b : a^8 = b^2 = 1, ba = a^5b>, non-abelian",
    },
    CatalogEntry {
        id: "J.23",
        group_spec: "J",
        group_label: "J",
        set_label: "23",
        members: &["1", "a", "a^3", "a^4", "a^3b", "a^5b"],
        params: (16, 6, 2),
        expected_report: Some((4, 8, 8)),
        note: "<a,b : a^8 = b^2 = 1, ba = a^5b>, non-abelian",
    },
    CatalogEntry {
        id: "Fano",
        group_spec: "cyclic:7",
        group_label: "Z7",
        set_label: "Fano",
        members: &["1", "2", "4"],
        params: (7, 3, 1),
        expected_report: Some((0, 0, 7)),
        note: "cyclic, no reversible translate",
    },
];

pub fn list_entries() -> &'static [CatalogEntry] {
    &ENTRIES
}

pub fn entry(id: &str) -> Result<&'static CatalogEntry, CatalogError> {
    ENTRIES
        .iter()
        .find(|e| e.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| CatalogError::NotFound {
            id: id.to_string(),
            available: ENTRIES.iter().map(|e| e.id.to_string()).collect(),
        })
}

pub fn load_entry(id: &str) -> Result<DifferenceSet, CatalogError> {
    entry(id)?.load()
}

/// Names accepted by [`builtin_group`], for help text.
pub const BUILTIN_GROUP_SPECS: &str =
    "cyclic:N, cyclic:N:<gen>, abelian:N1,N2,..., B, C, D, AII, J";

/// Resolves `cyclic:N` (elements named by residue), `cyclic:N:a` (named as
/// powers of `a`), `abelian:4,2,2` (generators `a`, `b`, ...) and the named
/// groups `B`, `C`, `D`, `AII` and `J`.
pub fn builtin_group(spec: &str) -> Result<FiniteGroup, GroupError> {
    let unknown = || GroupError::UnknownSpec(spec.to_string());
    let parse_n = |s: &str| s.trim().parse::<usize>().map_err(|_| unknown());
    match spec.trim() {
        "B" => FiniteGroup::abelian(&[(4, "a"), (4, "b")]),
        "C" => FiniteGroup::abelian(&[(4, "a"), (2, "b"), (2, "c")]),
        "D" => FiniteGroup::abelian(&[(2, "a"), (2, "b"), (2, "c"), (2, "d")]),
        "AII" => FiniteGroup::abelian(&[(3, "a"), (3, "b"), (2, "c"), (2, "d")]),
        "J" => group_j(),
        s => {
            if let Some(rest) = s.strip_prefix("cyclic:") {
                let mut parts = rest.splitn(2, ':');
                let n = parse_n(parts.next().unwrap_or(""))?;
                if n > DEFAULT_ORDER_CAP {
                    return Err(GroupError::OrderTooLarge {
                        order: n,
                        cap: DEFAULT_ORDER_CAP,
                    });
                }
                match parts.next() {
                    Some(g) if !g.is_empty() => FiniteGroup::cyclic_named(n, g),
                    _ => FiniteGroup::cyclic(n),
                }
            } else if let Some(rest) = s.strip_prefix("abelian:") {
                let orders = rest
                    .split(',')
                    .map(parse_n)
                    .collect::<Result<Vec<_>, _>>()?;
                if orders.is_empty() || orders.len() > 26 {
                    return Err(unknown());
                }
                let order: usize = orders
                    .iter()
                    .try_fold(1usize, |acc, &n| acc.checked_mul(n))
                    .ok_or_else(unknown)?;
                if order > DEFAULT_ORDER_CAP {
                    return Err(GroupError::OrderTooLarge {
                        order,
                        cap: DEFAULT_ORDER_CAP,
                    });
                }
                let names: Vec<String> = (0..orders.len())
                    .map(|i| ((b'a' + i as u8) as char).to_string())
                    .collect();
                let factors: Vec<(usize, &str)> = orders
                    .iter()
                    .zip(&names)
                    .map(|(&n, s)| (n, s.as_str()))
                    .collect();
                FiniteGroup::abelian(&factors)
            } else {
                Err(unknown())
            }
        }
    }
}

/// `<a, b : a^8 = b^2 = 1, ba = a^5 b>` acting on `Z8`: `a` adds one, `b`
/// multiplies by five.
fn group_j() -> Result<FiniteGroup, GroupError> {
    let a: Vec<usize> = (0..8).map(|x| (x + 1) % 8).collect();
    let b: Vec<usize> = (0..8).map(|x| (5 * x) % 8).collect();
    FiniteGroup::from_permutations(8, &[a, b], None, DEFAULT_ORDER_CAP)
}
