//! JSON interchange for groups and difference sets.
//!
//! A group is either a builtin spec string (see
//! [`builtin_group`](crate::catalog::builtin_group)), a path to a group file,
//! or an inline object in one of two shapes:
//!
//! ```json
//! {"order": 3, "names": ["e", "x", "y"], "table": [[0,1,2],[1,2,0],[2,0,1]]}
//! {"degree": 8, "generators": [[1,2,3,4,5,6,7,0]], "generator_names": ["a"]}
//! ```
//!
//! A difference set is `{"group": ..., "members": [...], "params": [v,k,λ]}`
//! with members given by element name, word or index.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{self, builtin_group, CatalogError};
use crate::diffset::{DiffSetError, DifferenceSet, DsParams, VerifyOptions};
use crate::group::{FiniteGroup, GroupError, DEFAULT_ORDER_CAP};

#[derive(Debug, Error)]
pub enum InterchangeError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON in `{origin}`: {source}")]
    Json {
        origin: String,
        source: serde_json::Error,
    },
    #[error("member index {index} out of range for a group of order {order}")]
    MemberOutOfRange { index: usize, order: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    DiffSet(#[from] DiffSetError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupJson {
    Table {
        order: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
        table: Vec<Vec<usize>>,
    },
    Generators {
        degree: usize,
        generators: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generator_names: Option<Vec<String>>,
    },
}

impl GroupJson {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupJson::Table {
            order: g.order(),
            names: Some(g.names().to_vec()),
            table: g.table_rows(),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupJson::Table {
                order,
                names,
                table,
            } => {
                if table.len() != *order {
                    return Err(GroupError::MalformedTable(format!(
                        "declared order {order}, table has {} rows",
                        table.len()
                    )));
                }
                FiniteGroup::from_table(table, names.clone())
            }
            GroupJson::Generators {
                degree,
                generators,
                generator_names,
            } => FiniteGroup::from_permutations(
                *degree,
                generators,
                generator_names.as_deref(),
                DEFAULT_ORDER_CAP,
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    /// Builtin spec or path to a group file.
    Named(String),
    Inline(GroupJson),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MemberRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub group: GroupRef,
    pub members: Vec<MemberRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<[usize; 3]>,
}

impl DsJson {
    /// Members by name; the group is referenced by `group`.
    pub fn from_set(d: &DifferenceSet, group: GroupRef, id: Option<String>) -> Self {
        let p = d.params();
        Self {
            id,
            group,
            members: d.member_names().into_iter().map(MemberRef::Name).collect(),
            params: Some([p.v, p.k, p.lambda]),
        }
    }

    /// Resolves the group and verifies the set. Relative group paths are
    /// taken relative to `base`.
    pub fn load(
        &self,
        base: Option<&Path>,
        opts: VerifyOptions,
    ) -> Result<DifferenceSet, InterchangeError> {
        let group = Arc::new(match &self.group {
            GroupRef::Inline(g) => g.build()?,
            GroupRef::Named(s) => resolve_group(s, base)?,
        });
        let members = self
            .members
            .iter()
            .map(|m| match m {
                MemberRef::Index(i) if *i < group.order() => Ok(*i),
                MemberRef::Index(i) => Err(InterchangeError::MemberOutOfRange {
                    index: *i,
                    order: group.order(),
                }),
                MemberRef::Name(s) => Ok(group.parse_element(s)?),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(match self.params {
            Some([v, k, l]) => {
                DifferenceSet::verify_with_params(&group, &members, DsParams::new(v, k, l), opts)?
            }
            None => DifferenceSet::verify(&group, &members, opts)?,
        })
    }
}

fn read(path: &Path) -> Result<String, InterchangeError> {
    std::fs::read_to_string(path).map_err(|source| InterchangeError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_json<T: for<'de> Deserialize<'de>>(
    text: &str,
    origin: &Path,
) -> Result<T, InterchangeError> {
    serde_json::from_str(text).map_err(|source| InterchangeError::Json {
        origin: origin.display().to_string(),
        source,
    })
}

/// A builtin spec, or else a path to a group JSON file.
pub fn resolve_group(spec: &str, base: Option<&Path>) -> Result<FiniteGroup, InterchangeError> {
    match builtin_group(spec) {
        Ok(g) => Ok(g),
        Err(GroupError::UnknownSpec(_)) => {
            let path = match base {
                Some(b) if Path::new(spec).is_relative() => b.join(spec),
                _ => Path::new(spec).to_path_buf(),
            };
            if !path.exists() {
                return Err(GroupError::UnknownSpec(spec.to_string()).into());
            }
            let json: GroupJson = parse_json(&read(&path)?, &path)?;
            Ok(json.build()?)
        }
        Err(e) => Err(e.into()),
    }
}

/// A loaded set with the labels used for it in report rows.
#[derive(Debug, Clone)]
pub struct LoadedSet {
    pub set: DifferenceSet,
    pub group_label: String,
    pub set_label: String,
    /// Group reference suitable for re-export.
    pub group: GroupRef,
}

/// `catalog:ID` or a path to a difference-set JSON file.
pub fn load_set_ref(reference: &str, opts: VerifyOptions) -> Result<LoadedSet, InterchangeError> {
    if let Some(id) = reference.strip_prefix("catalog:") {
        let entry = catalog::entry(id)?;
        return Ok(LoadedSet {
            set: entry.load()?,
            group_label: entry.group_label.to_string(),
            set_label: entry.set_label.to_string(),
            group: GroupRef::Named(entry.group_spec.to_string()),
        });
    }
    let path = Path::new(reference);
    let json: DsJson = parse_json(&read(path)?, path)?;
    let set = json.load(path.parent(), opts)?;
    let set_label = json.id.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| reference.to_string())
    });
    let group_label = match &json.group {
        GroupRef::Named(s) => s.clone(),
        GroupRef::Inline(_) => format!("G{}", set.group().order()),
    };
    Ok(LoadedSet {
        set,
        group_label,
        set_label,
        group: json.group,
    })
}
