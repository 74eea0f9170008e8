//! JSON descriptions of groups and short exact sequences, as consumed by
//! the command-line tools. A sequence is given either as `G` plus the
//! elements of a normal subgroup (the quotient is computed), or fully
//! explicitly via `iota`/`pi` tables. Constant simplicial groups only.

use std::sync::Arc;

use serde::Deserialize;

use crate::group::{quotient_by_normal, semidirect, subgroup_as_group, ElemId, FiniteGroup, GroupHom};
use crate::simplicial::ShortExactSequence;
use crate::{Error, Result};

#[derive(Deserialize, Debug)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic {
        order: usize,
    },
    Symmetric {
        degree: usize,
    },
    Dihedral {
        order: usize,
    },
    Table {
        /// `mul[a][b] = a·b`
        mul: Vec<Vec<ElemId>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
    Semidirect {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
        /// `action[l][k] = l ∗ k`
        action: Vec<Vec<ElemId>>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic { order } => FiniteGroup::cyclic(*order),
            GroupSpec::Symmetric { degree } => FiniteGroup::symmetric(*degree),
            GroupSpec::Dihedral { order } => FiniteGroup::dihedral(*order),
            GroupSpec::Table { mul, labels } => {
                let n = mul.len();
                let mut flat = Vec::with_capacity(n * n);
                for row in mul {
                    if row.len() != n {
                        return Err(Error::InvalidSpec(format!(
                            "multiplication table row has length {}, expected {n}",
                            row.len()
                        )));
                    }
                    flat.extend_from_slice(row);
                }
                if let Some(ls) = labels {
                    if ls.len() != n {
                        return Err(Error::InvalidSpec(format!(
                            "{} labels for {n} elements",
                            ls.len()
                        )));
                    }
                }
                FiniteGroup::from_table(flat, labels.clone())
            }
            GroupSpec::Semidirect { left, right, action } => {
                let k = Arc::new(left.build()?);
                let l = Arc::new(right.build()?);
                Ok(semidirect(&k, &l, action)?.group.as_ref().clone())
            }
        }
    }
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
pub enum SesSpec {
    /// `K` is carved out of `G` by listing its elements; `L = G/K`.
    Quotient {
        #[serde(rename = "G")]
        g: GroupSpec,
        #[serde(rename = "K_elements")]
        k_elements: Vec<ElemId>,
        #[serde(default)]
        section: Option<Vec<ElemId>>,
    },
    /// All three groups with explicit `iota` and `pi` tables.
    Explicit {
        #[serde(rename = "K")]
        k: GroupSpec,
        #[serde(rename = "G")]
        g: GroupSpec,
        #[serde(rename = "L")]
        l: GroupSpec,
        iota: Vec<ElemId>,
        pi: Vec<ElemId>,
        #[serde(default)]
        section: Option<Vec<ElemId>>,
    },
}

pub struct BuiltSes {
    pub ses: Arc<ShortExactSequence>,
    /// Constant-level section table, if the file supplied one.
    pub section_table: Option<Vec<ElemId>>,
}

impl SesSpec {
    pub fn build(&self, cutoff: usize) -> Result<BuiltSes> {
        match self {
            SesSpec::Quotient { g, k_elements, section } => {
                let g = Arc::new(g.build()?);
                if !g.is_subgroup(k_elements) {
                    return Err(Error::InvalidSpec(
                        "K_elements is not a subgroup".to_string(),
                    ));
                }
                if !g.is_normal(k_elements) {
                    return Err(Error::InvalidSpec(
                        "K_elements is not a normal subgroup".to_string(),
                    ));
                }
                let (_sub, iota) = subgroup_as_group(&g, k_elements)?;
                let pi = quotient_by_normal(&g, k_elements)?.projection;
                let ses = ShortExactSequence::constant(iota, pi, cutoff.max(1) - 1)?;
                Ok(BuiltSes {
                    ses: Arc::new(ses),
                    section_table: section.clone(),
                })
            }
            SesSpec::Explicit { k, g, l, iota, pi, section } => {
                let k = Arc::new(k.build()?);
                let g = Arc::new(g.build()?);
                let l = Arc::new(l.build()?);
                let iota = GroupHom::new(k, g.clone(), iota.clone())?;
                let pi = GroupHom::new(g, l, pi.clone())?;
                let ses = ShortExactSequence::constant(iota, pi, cutoff.max(1) - 1)?;
                Ok(BuiltSes {
                    ses: Arc::new(ses),
                    section_table: section.clone(),
                })
            }
        }
    }
}

pub fn parse_group(json: &str) -> Result<GroupSpec> {
    serde_json::from_str(json).map_err(|e| Error::InvalidSpec(e.to_string()))
}

pub fn parse_ses(json: &str) -> Result<SesSpec> {
    serde_json::from_str(json).map_err(|e| Error::InvalidSpec(e.to_string()))
}
