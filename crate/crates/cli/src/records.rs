//! JSON shapes written and read by the tool.

use std::collections::BTreeMap;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use minrank_core::dp::DpTrace;
use minrank_core::recognize::{Explain, RecognitionOutcome};
use minrank_core::structure::{Connector, StructureReport};
use minrank_core::{Error, Graph, SimpleTreeStructure, VertexSet};

/// Structure file: parts as vertex-id arrays, parents with -1 at the root,
/// and the connectors of every part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub parts: Vec<Vec<usize>>,
    pub parent: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uc: Option<Vec<Option<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dc: Option<Vec<Vec<ConnectorFile>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectorFile {
    pub vertex: usize,
    pub children: Vec<usize>,
}

impl StructureFile {
    pub fn from_structure(t: &SimpleTreeStructure) -> Self {
        StructureFile {
            parts: t.parts().iter().map(|p| p.as_slice().to_vec()).collect(),
            parent: t.parents().iter().map(|p| p.map_or(-1, |i| i as i64)).collect(),
            uc: Some((0..t.len()).map(|i| t.uc(i)).collect()),
            dc: Some(
                (0..t.len())
                    .map(|i| {
                        t.dcs(i)
                            .iter()
                            .map(|c| ConnectorFile { vertex: c.vertex, children: c.children.clone() })
                            .collect()
                    })
                    .collect(),
            ),
        }
    }

    /// Connectors are taken from the file when present (and must then be
    /// validated), otherwise read off the graph.
    pub fn to_structure(&self, g: &Graph) -> anyhow::Result<SimpleTreeStructure> {
        let parts = self
            .parts
            .iter()
            .map(|p| VertexSet::new(p.clone()))
            .collect::<Result<Vec<_>, _>>()
            .context("structure part")?;
        let mut parent = Vec::with_capacity(self.parent.len());
        for &p in &self.parent {
            parent.push(match p {
                -1 => None,
                p if p >= 0 => Some(p as usize),
                p => bail!("parent entry {p} is neither -1 nor a part index"),
            });
        }
        match (&self.uc, &self.dc) {
            (Some(uc), Some(dc)) => {
                let dc = dc
                    .iter()
                    .map(|cs| cs.iter().map(|c| Connector { vertex: c.vertex, children: c.children.clone() }).collect())
                    .collect();
                Ok(SimpleTreeStructure::from_raw(parts, parent, uc.clone(), dc))
            }
            // Connectors that cannot be read off the edges are left empty so
            // validation reports the broken rule instead of failing to load.
            (None, None) => match SimpleTreeStructure::from_parts(g, parts.clone(), parent.clone()) {
                Err(Error::InvalidStructure(_)) if parts.len() == parent.len() => {
                    let k = parts.len();
                    Ok(SimpleTreeStructure::from_raw(parts, parent, vec![None; k], vec![Vec::new(); k]))
                }
                r => Ok(r?),
            },
            _ => bail!("structure file must give both `uc` and `dc` or neither"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsRecord {
    pub lower: usize,
    pub upper: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsRecord {
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentRecord {
    pub vertices: Vec<usize>,
    pub value: usize,
    pub lower: usize,
    pub method: String,
    pub inexact: bool,
}

/// One solved graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub graph: String,
    pub order: usize,
    pub size: usize,
    pub value: usize,
    pub lower: usize,
    pub method: String,
    pub inexact: bool,
    /// Rows of a fitting matrix of rank `value`.
    pub witness: Option<Vec<String>>,
    pub bounds: BoundsRecord,
    pub stats: StatsRecord,
    pub components: Vec<ComponentRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationRecord {
    pub rule: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationRecord {
    pub valid: bool,
    pub mdc: usize,
    pub families: Vec<Option<String>>,
    pub violations: Vec<ViolationRecord>,
}

impl From<&StructureReport> for ValidationRecord {
    fn from(r: &StructureReport) -> Self {
        ValidationRecord {
            valid: r.valid,
            mdc: r.mdc,
            families: r.families.clone(),
            violations: r
                .violations
                .iter()
                .map(|v| ViolationRecord { rule: v.rule.as_str().into(), detail: v.detail.clone() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitRecord {
    pub atom: Vec<usize>,
    pub bridge: Option<(usize, usize)>,
    pub family: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MergeRecord {
    pub node: usize,
    pub dcs: Vec<usize>,
    pub chosen: Option<Vec<usize>>,
    pub merged: Vec<usize>,
    pub subsets_examined: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootRecord {
    pub root: usize,
    pub initial_mdc: usize,
    pub accepted: bool,
    pub steps: Vec<MergeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplainRecord {
    pub splits: Vec<SplitRecord>,
    pub roots: Vec<RootRecord>,
}

impl From<&Explain> for ExplainRecord {
    fn from(e: &Explain) -> Self {
        ExplainRecord {
            splits: e
                .splits
                .iter()
                .map(|s| SplitRecord { atom: s.atom.as_slice().to_vec(), bridge: s.bridge, family: s.family.clone() })
                .collect(),
            roots: e
                .roots
                .iter()
                .map(|r| RootRecord {
                    root: r.root,
                    initial_mdc: r.initial_mdc,
                    accepted: r.accepted,
                    steps: r
                        .steps
                        .iter()
                        .map(|s| MergeRecord {
                            node: s.node,
                            dcs: s.dcs.clone(),
                            chosen: s.chosen.clone(),
                            merged: s.merged.clone(),
                            subsets_examined: s.subsets_examined,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecognitionRecord {
    pub member: bool,
    pub c: usize,
    pub registry: String,
    pub roots_tried: usize,
    pub failure_detail: Option<String>,
    pub structure: Option<StructureFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explain: Option<ExplainRecord>,
}

impl RecognitionRecord {
    pub fn new(out: &RecognitionOutcome, c: usize, registry: String, explain: bool) -> Self {
        RecognitionRecord {
            member: out.member,
            c,
            registry,
            roots_tried: out.roots_tried,
            failure_detail: out.failure_detail.clone(),
            structure: out.structure.as_ref().map(StructureFile::from_structure),
            explain: explain.then(|| ExplainRecord::from(&out.explain)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarRecord {
    pub dc: usize,
    pub children: Vec<usize>,
    pub k_full: usize,
    pub k_minus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub part: usize,
    pub uc: Option<usize>,
    pub family: String,
    pub full: usize,
    pub minus: Option<usize>,
    pub stars: Vec<StarRecord>,
    pub subsets: usize,
    pub oracle_calls: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceRecord {
    pub nodes: Vec<NodeRecord>,
}

impl From<&DpTrace> for TraceRecord {
    fn from(t: &DpTrace) -> Self {
        TraceRecord {
            nodes: t
                .nodes
                .iter()
                .map(|n| NodeRecord {
                    part: n.part,
                    uc: n.uc,
                    family: n.family.clone(),
                    full: n.table.full,
                    minus: n.table.minus,
                    stars: n
                        .stars
                        .iter()
                        .map(|s| StarRecord {
                            dc: s.dc,
                            children: s.children.clone(),
                            k_full: s.k_full,
                            k_minus: s.k_minus,
                        })
                        .collect(),
                    subsets: n.subsets,
                    oracle_calls: n.oracle_calls,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkippedRecord {
    pub line: usize,
    pub error: String,
}

/// Summary of a batch run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchSummary {
    pub processed: usize,
    pub inexact: usize,
    pub skipped: Vec<SkippedRecord>,
    /// Min-rank value (as a string key) to count.
    pub histogram: BTreeMap<String, usize>,
}
