//! Bottom-up dynamic program for the min-rank of a graph with a known
//! simple tree structure.
//!
//! For every part `i` with upward connector `v_i` the program computes
//! `minrk(S_i)` and `minrk(S_i - v_i)`, where `S_i` is the subgraph induced
//! by part `i` and all its descendants. Three facts about min-rank do the
//! work:
//!
//! * deleting a vertex lowers the min-rank by zero or one;
//! * for two graphs sharing exactly one vertex `v`, the min-rank of the
//!   union is determined by the four values `minrk(G1)`, `minrk(G1 - v)`,
//!   `minrk(G2)`, `minrk(G2 - v)` ([`combine_shared_vertex`]);
//! * the min-rank is additive over disjoint unions.
//!
//! The children hanging from one DC `u` form, together with `u`, a star
//! graph `K` whose two values follow from the children's tables
//! ([`star_merge`]). The stars of a part's DCs `u_1..u_d` are then folded
//! into the part one at a time; after folding `t` stars the program knows
//! `minrk(N_t - U)` for every `U` drawn from `v_i` and the DCs not yet
//! folded, which costs at most `2^(d+1)` family min-rank queries per part.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exact::{Method, MinrankResult, SearchStats};
use crate::family::FamilyRegistry;
use crate::graph::{Graph, VertexSet};
use crate::structure::{validate_structure, Rule, SimpleTreeStructure};

fn check_deletion_range(full: usize, minus: usize, what: &str) -> Result<()> {
    if minus > full || full > minus + 1 {
        return Err(Error::Contract(format!(
            "{what}: minrk(G - v) = {minus} is not within one below minrk(G) = {full}"
        )));
    }
    Ok(())
}

/// Min-rank of `G1 ∪ G2` for graphs sharing one vertex `v`, given
/// `minrk(G1)`, `minrk(G1 - v)`, `minrk(G2)` and `minrk(G2 - v)`:
/// `m1v + m2v + (m1 - m1v) * (m2 - m2v)`.
pub fn combine_shared_vertex(m1: usize, m1v: usize, m2: usize, m2v: usize) -> Result<usize> {
    check_deletion_range(m1, m1v, "first graph")?;
    check_deletion_range(m2, m2v, "second graph")?;
    Ok(m1v + m2v + (m1 - m1v) * (m2 - m2v))
}

/// Values `(minrk(K), minrk(K - u))` for the star `K` made of a vertex `u`
/// joined by one edge to each child subtree. Each child is given as
/// `(minrk(S), minrk(S - uc))`.
///
/// `K - u` is a disjoint union, so its min-rank is the sum of the
/// children's full values. `K` costs one more unless some child loses rank
/// when its UC is deleted.
pub fn star_merge(children: &[(usize, usize)]) -> Result<(usize, usize)> {
    if children.is_empty() {
        return Err(Error::Contract("a downward connector needs at least one child".into()));
    }
    for &(full, minus) in children {
        check_deletion_range(full, minus, "child subtree")?;
    }
    let without_u: usize = children.iter().map(|c| c.0).sum();
    let drops = children.iter().any(|&(full, minus)| minus + 1 == full);
    Ok((if drops { without_u } else { without_u + 1 }, without_u))
}

/// The two values kept for a part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeTable {
    /// `minrk(S_i)`.
    pub full: usize,
    /// `minrk(S_i - v_i)`; absent at the root.
    pub minus: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarTrace {
    pub dc: usize,
    pub children: Vec<usize>,
    pub k_full: usize,
    pub k_minus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeTrace {
    pub part: usize,
    pub uc: Option<usize>,
    pub family: alloc::string::String,
    pub stars: Vec<StarTrace>,
    /// Size of the subset lattice `2^|{v_i} ∪ DCs|`.
    pub subsets: usize,
    pub oracle_calls: usize,
    pub table: NodeTable,
}

/// Per-part record in bottom-up order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DpTrace {
    pub nodes: Vec<NodeTrace>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpOptions {
    /// Largest subset lattice allowed at a single part.
    pub max_subsets: usize,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { max_subsets: 1 << 20 }
    }
}

/// Exact min-rank from a simple tree structure. No witness matrix is
/// produced.
pub fn dp_minrank(g: &Graph, t: &SimpleTreeStructure, reg: &FamilyRegistry) -> Result<MinrankResult> {
    dp_minrank_traced(g, t, reg, DpOptions::default()).map(|(r, _)| r)
}

pub fn dp_minrank_traced(
    g: &Graph,
    t: &SimpleTreeStructure,
    reg: &FamilyRegistry,
    opts: DpOptions,
) -> Result<(MinrankResult, DpTrace)> {
    let report = validate_structure(g, t, reg);
    if let Some(v) = report.violations.iter().find(|v| v.rule == Rule::R1) {
        return Err(Error::NotInRegistry(v.detail.clone()));
    }
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidStructure(format!("{}: {}", v.rule, v.detail)));
    }

    let mut tables: Vec<Option<NodeTable>> = vec![None; t.len()];
    let mut trace = DpTrace::default();
    let mut calls = 0u64;
    for i in t.post_order()? {
        let node = solve_node(g, t, reg, i, &tables, opts)?;
        calls += node.oracle_calls as u64;
        tables[i] = Some(node.table);
        trace.nodes.push(node);
    }
    let root = t.root().expect("validated structure has a root");
    let value = tables[root].expect("root solved last").full;
    Ok((MinrankResult::exact(value, None, Method::Dp, SearchStats { nodes: calls }), trace))
}

fn solve_node(
    g: &Graph,
    t: &SimpleTreeStructure,
    reg: &FamilyRegistry,
    i: usize,
    tables: &[Option<NodeTable>],
    opts: DpOptions,
) -> Result<NodeTrace> {
    let (part_graph, map) = g.induced_subgraph(t.part(i))?;
    let family = reg.lookup(&part_graph).ok_or_else(|| Error::NotInRegistry(format!("part {i}")))?;

    // Removable vertices: the DCs in ascending order, then the UC unless
    // it doubles as a DC. Subsets are bitmasks over this list.
    let dcs = t.dcs(i);
    let mut slots: Vec<usize> = dcs.iter().map(|c| c.vertex).collect();
    let uc = t.uc(i);
    let uc_bit = uc.map(|v| match slots.iter().position(|&s| s == v) {
        Some(p) => p,
        None => {
            slots.push(v);
            slots.len() - 1
        }
    });
    let bits = slots.len();
    if bits >= usize::BITS as usize || 1usize << bits > opts.max_subsets {
        return Err(Error::BudgetExceeded(format!(
            "part {i} needs 2^{bits} subset states, limit is {}",
            opts.max_subsets
        )));
    }
    let lattice = 1usize << bits;

    let mut stars = Vec::with_capacity(dcs.len());
    for c in dcs {
        let kids: Vec<(usize, usize)> = c
            .children
            .iter()
            .map(|&j| {
                let table = tables[j].expect("children are solved first");
                (table.full, table.minus.expect("non-root part has a UC value"))
            })
            .collect();
        let (k_full, k_minus) = star_merge(&kids)?;
        stars.push(StarTrace { dc: c.vertex, children: c.children.clone(), k_full, k_minus });
    }

    // Stage 0: minrk(G_i - U) for every subset U, from the family.
    let mut oracle_calls = 0;
    let mut current: Vec<Option<usize>> = vec![None; lattice];
    for (mask, slot) in current.iter_mut().enumerate() {
        let removed: VertexSet = (0..bits)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| map[slots[b]].expect("connector lies in its part"))
            .collect();
        *slot = Some(if removed.len() == part_graph.order() {
            0
        } else {
            oracle_calls += 1;
            family.minrank(&part_graph.remove_vertices(&removed)?)?
        });
    }

    // Stage t folds in the star of DC t. Afterwards only masks without
    // DC bits 0..=t-1 (except through the UC) are meaningful.
    for (t_idx, star) in stars.iter().enumerate() {
        let dc_bit = 1usize << t_idx;
        let uc_is_dc = uc_bit == Some(t_idx);
        let mut next: Vec<Option<usize>> = vec![None; lattice];
        for mask in 0..lattice {
            let folded_dc_set = mask & ((dc_bit << 1) - 1);
            let uc_mask = uc_bit.map_or(0, |b| 1 << b);
            if folded_dc_set & !uc_mask != 0 {
                continue;
            }
            let value = if uc_is_dc && mask & dc_bit != 0 {
                // UC coincides with this DC and is deleted: the star minus
                // its centre is disjoint from the rest.
                current[mask].map(|m| m + star.k_minus)
            } else if mask & dc_bit != 0 {
                continue;
            } else {
                match (current[mask], current[mask | dc_bit]) {
                    (Some(m1), Some(m1v)) => Some(combine_shared_vertex(m1, m1v, star.k_full, star.k_minus)?),
                    _ => None,
                }
            };
            next[mask] = value;
        }
        current = next;
    }

    let full = current[0].expect("empty deletion set is always tracked");
    let minus = uc_bit.map(|b| current[1 << b].expect("UC deletion is always tracked"));
    if let Some(m) = minus {
        check_deletion_range(full, m, "subtree table")?;
    }
    Ok(NodeTrace {
        part: i,
        uc,
        family: family.name(),
        stars,
        subsets: lattice,
        oracle_calls,
        table: NodeTable { full, minus },
    })
}
