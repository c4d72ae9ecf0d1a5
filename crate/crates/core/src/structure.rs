//! Simple tree structures: a partition of the vertices into parts from the
//! registry, joined along a rooted tree by exactly one edge per tree edge.
//!
//! For a child part `j` of part `i`, the endpoint of the joining edge in
//! `j` is the upward connector (UC) of `j` and the endpoint in `i` is a
//! downward connector (DC) of `i`. A part has at most one UC and any
//! number of DCs; several children may hang from the same DC.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::family::FamilyRegistry;
use crate::graph::{Graph, Partition, VertexSet};

/// A downward connector vertex and the child parts attached through it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Connector {
    pub vertex: usize,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleTreeStructure {
    parts: Vec<VertexSet>,
    parent: Vec<Option<usize>>,
    uc: Vec<Option<usize>>,
    dc: Vec<Vec<Connector>>,
}

impl SimpleTreeStructure {
    /// The one-part structure on `n` vertices.
    pub fn single(n: usize) -> Self {
        SimpleTreeStructure {
            parts: vec![VertexSet::full(n)],
            parent: vec![None],
            uc: vec![None],
            dc: vec![Vec::new()],
        }
    }

    /// Builds a structure from parts and a parent array, reading the
    /// connectors off the edges of `g`. Every child must share exactly one
    /// edge with its parent.
    pub fn from_parts(g: &Graph, parts: Vec<VertexSet>, parent: Vec<Option<usize>>) -> Result<Self> {
        if parts.len() != parent.len() {
            return Err(Error::InvalidStructure(format!("{} parts but {} parent entries", parts.len(), parent.len())));
        }
        let partition = Partition::new(parts, g.order())?;
        let k = partition.len();
        let mut cross: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (a, b) in g.edges() {
            let (pa, pb) = (partition.part_of(a), partition.part_of(b));
            if pa != pb {
                cross.entry((pa, pb)).or_default().push((a, b));
                cross.entry((pb, pa)).or_default().push((b, a));
            }
        }
        let mut uc = vec![None; k];
        let mut dc_map: Vec<BTreeMap<usize, Vec<usize>>> = vec![BTreeMap::new(); k];
        for (j, p) in parent.iter().enumerate() {
            let Some(i) = *p else { continue };
            if i >= k || i == j {
                return Err(Error::InvalidStructure(format!("part {j} has invalid parent {i}")));
            }
            match cross.get(&(i, j)).map(Vec::as_slice) {
                Some(&[(a, b)]) => {
                    uc[j] = Some(b);
                    dc_map[i].entry(a).or_default().push(j);
                }
                edges => {
                    return Err(Error::InvalidStructure(format!(
                        "parts {i} and {j} share {} edges, expected exactly one",
                        edges.map_or(0, <[_]>::len)
                    )))
                }
            }
        }
        let dc = dc_map
            .into_iter()
            .map(|m| m.into_iter().map(|(vertex, children)| Connector { vertex, children }).collect())
            .collect();
        Ok(SimpleTreeStructure { parts: partition.parts().to_vec(), parent, uc, dc })
    }

    /// Assembles a structure from explicit fields without checking them;
    /// use [`validate_structure`] before relying on it.
    pub fn from_raw(
        parts: Vec<VertexSet>,
        parent: Vec<Option<usize>>,
        uc: Vec<Option<usize>>,
        dc: Vec<Vec<Connector>>,
    ) -> Self {
        SimpleTreeStructure { parts, parent, uc, dc }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &VertexSet {
        &self.parts[i]
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn uc(&self, i: usize) -> Option<usize> {
        self.uc[i]
    }

    pub fn dcs(&self, i: usize) -> &[Connector] {
        &self.dc[i]
    }

    pub fn root(&self) -> Option<usize> {
        self.parent.iter().position(Option::is_none)
    }

    pub fn children(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.parent[j] == Some(i)).collect()
    }

    /// Maximum number of DCs over all parts.
    pub fn mdc(&self) -> usize {
        self.dc.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Parts in an order where every part comes after all of its children.
    /// Requires a well-formed rooted tree.
    pub fn post_order(&self) -> Result<Vec<usize>> {
        let root = self.root().ok_or_else(|| Error::InvalidStructure("no root part".into()))?;
        let kids: Vec<Vec<usize>> = (0..self.len()).map(|i| self.children(i)).collect();
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(root, 0usize)];
        while let Some((i, next)) = stack.pop() {
            if let Some(&c) = kids[i].get(next) {
                stack.push((i, next + 1));
                stack.push((c, 0));
            } else {
                out.push(i);
            }
            if out.len() + stack.len() > self.len() {
                return Err(Error::InvalidStructure("parent array is not a tree".into()));
            }
        }
        if out.len() != self.len() {
            return Err(Error::InvalidStructure("parent array is not a tree".into()));
        }
        Ok(out)
    }

    /// Union of part `i` and all of its descendants.
    pub fn subtree_vertices(&self, i: usize) -> Result<VertexSet> {
        if i >= self.len() {
            return Err(Error::InvalidStructure(format!("no part {i}")));
        }
        let mut acc = VertexSet::empty();
        let mut stack = vec![i];
        let mut visited = 0;
        while let Some(p) = stack.pop() {
            visited += 1;
            if visited > self.len() {
                return Err(Error::InvalidStructure("parent array is not a tree".into()));
            }
            acc = acc.union(&self.parts[p]);
            stack.extend(self.children(p));
        }
        Ok(acc)
    }

    /// The same partition rooted at part `root`.
    pub fn rerooted(&self, g: &Graph, root: usize) -> Result<Self> {
        if root >= self.len() {
            return Err(Error::InvalidStructure(format!("no part {root}")));
        }
        let mut adj = vec![Vec::new(); self.len()];
        for (j, p) in self.parent.iter().enumerate() {
            if let Some(i) = *p {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        let mut parent = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    parent[j] = Some(i);
                    stack.push(j);
                }
            }
        }
        SimpleTreeStructure::from_parts(g, self.parts.clone(), parent)
    }
}

/// Which requirement a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// Parts must be nonempty, disjoint and cover the vertex set; the field
    /// arrays must have one entry per part.
    Partition,
    /// The graph must be connected.
    Connected,
    /// Every part induces a graph in a registry family.
    R1,
    /// At most one edge between any two parts.
    R2,
    /// The parts joined by single edges form the rooted tree given by the
    /// parent array.
    R3,
    /// UC and DC annotations match the joining edges.
    Connector,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Partition => "partition",
            Rule::Connected => "connected",
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::Connector => "connector",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub mdc: usize,
    /// Family of each part, `None` where the part fails R1.
    pub families: Vec<Option<String>>,
}

impl StructureReport {
    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

/// Checks every requirement and reports all violations found.
pub fn validate_structure(g: &Graph, t: &SimpleTreeStructure, reg: &FamilyRegistry) -> StructureReport {
    let mut violations = Vec::new();
    let mut push = |rule, detail: String| violations.push(Violation { rule, detail });
    let k = t.len();
    let mut families = vec![None; k];

    if t.parent.len() != k || t.uc.len() != k || t.dc.len() != k {
        push(Rule::Partition, format!("field arrays do not have one entry per part ({k} parts)"));
        return finish(violations, t.mdc(), families);
    }
    let partition = match Partition::new(t.parts.clone(), g.order()) {
        Ok(p) => p,
        Err(e) => {
            push(Rule::Partition, format!("{e}"));
            return finish(violations, t.mdc(), families);
        }
    };
    if !g.is_connected() {
        push(Rule::Connected, "graph is not connected".into());
    }

    for (i, part) in t.parts.iter().enumerate() {
        let sub = g.induced(part).expect("partition checked");
        match reg.lookup(&sub) {
            Some(f) => families[i] = Some(f.name()),
            None => push(Rule::R1, format!("part {i} is in no registry family")),
        }
    }

    let mut cross: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (a, b) in g.edges() {
        let (pa, pb) = (partition.part_of(a), partition.part_of(b));
        if pa != pb {
            let key = (pa.min(pb), pa.max(pb));
            let edge = if pa < pb { (a, b) } else { (b, a) };
            cross.entry(key).or_default().push(edge);
        }
    }
    for (&(i, j), edges) in &cross {
        if edges.len() > 1 {
            push(Rule::R2, format!("parts {i} and {j} share {} edges", edges.len()));
        }
    }

    // Parent array must describe a rooted tree whose edges are exactly the
    // part pairs joined by a single edge.
    let roots: Vec<usize> = (0..k).filter(|&i| t.parent[i].is_none()).collect();
    if roots.len() != 1 {
        push(Rule::R3, format!("expected one root part, found {}", roots.len()));
    }
    let mut tree_ok = roots.len() == 1;
    for j in 0..k {
        if let Some(i) = t.parent[j] {
            if i >= k || i == j {
                push(Rule::R3, format!("part {j} has invalid parent {i}"));
                tree_ok = false;
            }
        }
    }
    if tree_ok {
        for start in 0..k {
            let mut cur = start;
            let mut steps = 0;
            while let Some(p) = t.parent[cur] {
                cur = p;
                steps += 1;
                if steps > k {
                    break;
                }
            }
            if steps > k {
                push(Rule::R3, format!("part {start} does not reach the root"));
                break;
            }
        }
    }
    for j in 0..k {
        let Some(i) = t.parent[j].filter(|&i| i < k && i != j) else { continue };
        if !cross.contains_key(&(i.min(j), i.max(j))) {
            push(Rule::R3, format!("part {j} shares no edge with its parent {i}"));
        }
    }
    for &(i, j) in cross.keys() {
        if t.parent[j] != Some(i) && t.parent[i] != Some(j) {
            push(Rule::R3, format!("parts {i} and {j} are joined but not parent and child"));
        }
    }

    for j in 0..k {
        match (t.parent[j], t.uc[j]) {
            (None, Some(u)) => push(Rule::Connector, format!("root part {j} has a UC {u}")),
            (Some(_), None) => push(Rule::Connector, format!("part {j} has no UC")),
            (Some(i), Some(u)) => {
                if !t.parts[j].contains(u) {
                    push(Rule::Connector, format!("UC {u} of part {j} lies outside the part"));
                }
                if let Some(edges) = cross.get(&(i.min(j), i.max(j))).filter(|e| e.len() == 1) {
                    let (a, b) = edges[0];
                    let (in_parent, in_child) = if i < j { (a, b) } else { (b, a) };
                    if u != in_child {
                        push(Rule::Connector, format!("UC of part {j} is {u}, joining edge ends at {in_child}"));
                    }
                    let listed = t.dc[i].iter().any(|c| c.vertex == in_parent && c.children.contains(&j));
                    if !listed {
                        push(Rule::Connector, format!("part {j} is not listed under DC {in_parent} of part {i}"));
                    }
                }
            }
            (None, None) => {}
        }
    }
    for (i, conns) in t.dc.iter().enumerate() {
        if conns.windows(2).any(|w| w[0].vertex >= w[1].vertex) {
            push(Rule::Connector, format!("DCs of part {i} are not strictly ascending"));
        }
        for c in conns {
            if !t.parts[i].contains(c.vertex) {
                push(Rule::Connector, format!("DC {} of part {i} lies outside the part", c.vertex));
            }
            if c.children.is_empty() {
                push(Rule::Connector, format!("DC {} of part {i} has no children", c.vertex));
            }
            for &j in &c.children {
                if t.parent.get(j).copied().flatten() != Some(i) {
                    push(
                        Rule::Connector,
                        format!("part {j} listed under DC {} of part {i} is not its child", c.vertex),
                    );
                }
            }
        }
    }
    finish(violations, t.mdc(), families)
}

fn finish(violations: Vec<Violation>, mdc: usize, families: Vec<Option<String>>) -> StructureReport {
    StructureReport { valid: violations.is_empty(), violations, mdc, families }
}
