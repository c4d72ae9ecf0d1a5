//! Recognition of graphs that admit a simple tree structure with at most
//! `c` downward connectors per part.
//!
//! The splitting phase cuts the graph along bridges until every piece (an
//! atom) is bridgeless, and requires every atom to lie in a registry family.
//! The atoms, joined wherever a single edge connects two of them, already
//! form a simple tree structure but possibly with too many DCs. The merging
//! phase tries every atom as the root and, walking the tree bottom-up,
//! absorbs leaf children into their parent until each node keeps at most
//! `c` DCs.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::family::FamilyRegistry;
use crate::graph::{Graph, VertexSet};
use crate::structure::SimpleTreeStructure;

/// Bridgeless atoms and the tree joining them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomForest {
    atoms: Vec<VertexSet>,
    /// `(a, b, (u, v))` with `a < b`, `u` in atom `a`, `v` in atom `b`.
    links: Vec<(usize, usize, (usize, usize))>,
}

impl AtomForest {
    pub fn atoms(&self) -> &[VertexSet] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Tree edges with the graph edge realizing each.
    pub fn links(&self) -> &[(usize, usize, (usize, usize))] {
        &self.links
    }

    /// Neighbouring atoms of `a`, ascending.
    pub fn neighbors(&self, a: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .links
            .iter()
            .filter_map(|&(x, y, _)| {
                if x == a {
                    Some(y)
                } else if y == a {
                    Some(x)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitStep {
    pub atom: VertexSet,
    /// Bridge cut, if the piece had one.
    pub bridge: Option<(usize, usize)>,
    /// Family accepting a bridgeless piece.
    pub family: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeStep {
    /// Atom index of the visited node.
    pub node: usize,
    pub dcs: Vec<usize>,
    /// `None` when no admissible subset exists.
    pub chosen: Option<Vec<usize>>,
    /// Atoms absorbed into the node.
    pub merged: Vec<usize>,
    pub subsets_examined: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootTrial {
    pub root: usize,
    pub initial_mdc: usize,
    pub steps: Vec<MergeStep>,
    pub accepted: bool,
}

/// Machine-readable account of both phases.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Explain {
    pub splits: Vec<SplitStep>,
    pub roots: Vec<RootTrial>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognitionOutcome {
    pub member: bool,
    /// Present exactly when `member`.
    pub structure: Option<SimpleTreeStructure>,
    pub roots_tried: usize,
    pub failure_detail: Option<String>,
    pub explain: Explain,
}

/// Splits `g` along bridges into bridgeless atoms, each of which must be
/// in a registry family. Pieces are processed first-in first-out and each
/// is cut along its lexicographically smallest bridge.
pub fn split_phase(g: &Graph, reg: &FamilyRegistry, explain: &mut Explain) -> Result<AtomForest> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut queue = VecDeque::from([VertexSet::full(g.order())]);
    let mut atoms = Vec::new();
    while let Some(piece) = queue.pop_front() {
        let (sub, _) = g.induced_subgraph(&piece)?;
        if let Some(&(a, b)) = sub.bridges().first() {
            let (u, v) = (piece.as_slice()[a], piece.as_slice()[b]);
            let cut = sub.without_edge(a, b);
            let side: VertexSet = cut
                .connected_components()
                .into_iter()
                .find(|c| c.contains(a))
                .expect("every vertex has a component")
                .iter()
                .map(|x| piece.as_slice()[x])
                .collect();
            let other = piece.difference(&side);
            explain.splits.push(SplitStep { atom: piece, bridge: Some((u, v)), family: None });
            queue.push_back(side);
            queue.push_back(other);
        } else if let Some(f) = reg.lookup(&sub) {
            explain.splits.push(SplitStep { atom: piece.clone(), bridge: None, family: Some(f.name()) });
            atoms.push(piece);
        } else {
            let detail = format!("bridgeless atom {:?} is in no registry family", piece.as_slice());
            explain.splits.push(SplitStep { atom: piece, bridge: None, family: None });
            return Err(Error::NotInFamily(detail));
        }
    }

    let mut atom_of = vec![0; g.order()];
    for (i, a) in atoms.iter().enumerate() {
        for v in a.iter() {
            atom_of[v] = i;
        }
    }
    let mut links = Vec::new();
    for (u, v) in g.edges() {
        let (a, b) = (atom_of[u], atom_of[v]);
        if a != b {
            links.push(if a < b { (a, b, (u, v)) } else { (b, a, (v, u)) });
        }
    }
    links.sort_unstable();
    Ok(AtomForest { atoms, links })
}

/// Working copy of the atom tree rooted at one atom.
struct Rooted {
    sets: Vec<VertexSet>,
    alive: Vec<bool>,
    parent: Vec<Option<usize>>,
    /// Vertex of the parent that carries the edge to this node.
    dc_of: Vec<Option<usize>>,
    /// Nodes with every child listed before its parent.
    post_order: Vec<usize>,
}

impl Rooted {
    fn new(forest: &AtomForest, root: usize) -> Self {
        let h = forest.len();
        let mut adj: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); h];
        for &(a, b, (u, v)) in &forest.links {
            adj[a].push((b, u, v));
            adj[b].push((a, v, u));
        }
        let mut parent = vec![None; h];
        let mut dc_of = vec![None; h];
        let mut seen = vec![false; h];
        let mut bfs = vec![root];
        seen[root] = true;
        let mut head = 0;
        while head < bfs.len() {
            let x = bfs[head];
            head += 1;
            for &(y, here, _) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    dc_of[y] = Some(here);
                    bfs.push(y);
                }
            }
        }
        bfs.reverse();
        Rooted { sets: forest.atoms.clone(), alive: vec![true; h], parent, dc_of, post_order: bfs }
    }

    fn children(&self, m: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.sets.len()).filter(move |&j| self.alive[j] && self.parent[j] == Some(m))
    }

    fn dcs(&self, m: usize) -> Vec<usize> {
        let mut d: Vec<usize> = self.children(m).filter_map(|j| self.dc_of[j]).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    fn mdc(&self) -> usize {
        (0..self.sets.len()).filter(|&m| self.alive[m]).map(|m| self.dcs(m).len()).max().unwrap_or(0)
    }

    fn is_leaf(&self, j: usize) -> bool {
        self.children(j).next().is_none()
    }

    fn structure(&self, g: &Graph) -> Result<SimpleTreeStructure> {
        let live: Vec<usize> = (0..self.sets.len()).filter(|&m| self.alive[m]).collect();
        let mut index = vec![usize::MAX; self.sets.len()];
        for (i, &m) in live.iter().enumerate() {
            index[m] = i;
        }
        let parts = live.iter().map(|&m| self.sets[m].clone()).collect();
        let parent = live.iter().map(|&m| self.parent[m].map(|p| index[p])).collect();
        SimpleTreeStructure::from_parts(g, parts, parent)
    }
}

/// Lexicographic successor of a `k`-combination of `0..n`.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Turns the atom tree into a structure with at most `c` DCs per part by
/// merging leaf children into their parents, trying roots in ascending
/// order.
pub fn merge_phase(
    g: &Graph,
    forest: &AtomForest,
    c: usize,
    reg: &FamilyRegistry,
    explain: &mut Explain,
) -> Result<SimpleTreeStructure> {
    let h = forest.len();
    for r in 0..h {
        let mut tree = Rooted::new(forest, r);
        let initial_mdc = tree.mdc();
        let mut trial = RootTrial { root: r, initial_mdc, steps: Vec::new(), accepted: false };
        if initial_mdc <= c {
            trial.accepted = true;
            explain.roots.push(trial);
            return tree.structure(g);
        }
        let mut in_family: BTreeMap<VertexSet, bool> = BTreeMap::new();
        let mut failed = false;
        for pos in 0..tree.post_order.len() {
            let m = tree.post_order[pos];
            let step = merge_node(g, &mut tree, m, c, reg, &mut in_family)?;
            let ok = step.chosen.is_some();
            trial.steps.push(step);
            if !ok {
                failed = true;
                break;
            }
            #[cfg(debug_assertions)]
            {
                let t = tree.structure(g)?;
                let report = crate::structure::validate_structure(g, &t, reg);
                debug_assert!(report.valid, "merge broke the structure: {:?}", report.violations);
            }
        }
        if !failed {
            trial.accepted = true;
            explain.roots.push(trial);
            let t = tree.structure(g)?;
            debug_assert!(t.mdc() <= c);
            return Ok(t);
        }
        let last = trial.steps.last().map(|s| s.node);
        explain.roots.push(trial);
        if r + 1 == h {
            return Err(Error::NotInFamily(format!(
                "no admissible merge at atom {} with root atom {r}",
                last.unwrap_or(r)
            )));
        }
    }
    Err(Error::NotInFamily("no atoms".into()))
}

fn merge_node(
    g: &Graph,
    tree: &mut Rooted,
    m: usize,
    c: usize,
    reg: &FamilyRegistry,
    memo: &mut BTreeMap<VertexSet, bool>,
) -> Result<MergeStep> {
    let dcs = tree.dcs(m);
    let d = dcs.len();
    let kids: Vec<usize> = tree.children(m).collect();
    let mut examined = 0;
    for size in (d.saturating_sub(c)..=d).rev() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            examined += 1;
            let chosen: Vec<usize> = idx.iter().map(|&i| dcs[i]).collect();
            let absorbed: Vec<usize> =
                kids.iter().copied().filter(|&j| tree.dc_of[j].is_some_and(|v| chosen.contains(&v))).collect();
            if absorbed.iter().all(|&j| tree.is_leaf(j)) {
                let merged = absorbed.iter().fold(tree.sets[m].clone(), |acc, &j| acc.union(&tree.sets[j]));
                let ok = match memo.get(&merged) {
                    Some(&ok) => ok,
                    None => {
                        let ok = reg.contains(&g.induced(&merged)?);
                        memo.insert(merged.clone(), ok);
                        ok
                    }
                };
                if ok {
                    for &j in &absorbed {
                        tree.alive[j] = false;
                    }
                    tree.sets[m] = merged;
                    return Ok(MergeStep {
                        node: m,
                        dcs,
                        chosen: Some(chosen),
                        merged: absorbed,
                        subsets_examined: examined,
                    });
                }
            }
            if !next_combination(&mut idx, d) {
                break;
            }
        }
    }
    Ok(MergeStep { node: m, dcs, chosen: None, merged: Vec::new(), subsets_examined: examined })
}

/// Decides whether the connected graph `g` has a simple tree structure
/// with at most `c` DCs per part, returning one if so.
pub fn recognize(g: &Graph, c: usize, reg: &FamilyRegistry) -> Result<RecognitionOutcome> {
    if c == 0 {
        return Err(Error::Contract("c must be at least 1".into()));
    }
    let mut explain = Explain::default();
    let outcome = split_phase(g, reg, &mut explain).and_then(|f| merge_phase(g, &f, c, reg, &mut explain));
    let roots_tried = explain.roots.len();
    match outcome {
        Ok(t) => {
            Ok(RecognitionOutcome { member: true, structure: Some(t), roots_tried, failure_detail: None, explain })
        }
        Err(Error::NotInFamily(detail)) => Ok(RecognitionOutcome {
            member: false,
            structure: None,
            roots_tried,
            failure_detail: Some(detail),
            explain,
        }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::validate_structure;

    fn two_cycles(len: usize) -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        edges.extend((0..len).map(|i| (len + i, len + (i + 1) % len)));
        edges.push((0, len));
        Graph::from_edges(2 * len, edges).unwrap()
    }

    #[test]
    fn tree_splits_into_singletons() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap();
        let f = split_phase(&g, &FamilyRegistry::parse("chordal").unwrap(), &mut Explain::default()).unwrap();
        assert_eq!(f.len(), 6);
        assert!(f.atoms().iter().all(|a| a.len() == 1));
        assert_eq!(f.links().len(), 5);
    }

    #[test]
    fn two_pentagons() {
        let g = two_cycles(5);
        let f = split_phase(&g, &FamilyRegistry::parse("bounded:10").unwrap(), &mut Explain::default()).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.links(), &[(0, 1, (0, 5))]);
    }

    #[test]
    fn heptagons_are_rejected() {
        let g = two_cycles(7);
        let err = split_phase(&g, &FamilyRegistry::parse("chordal").unwrap(), &mut Explain::default());
        assert!(matches!(err, Err(Error::NotInFamily(_))));
        let out = recognize(&Graph::cycle(7), 2, &FamilyRegistry::parse("chordal").unwrap()).unwrap();
        assert!(!out.member && out.structure.is_none());
    }

    #[test]
    fn star_has_one_dc() {
        // Every leaf hangs off the same vertex, so the centre has one DC.
        let star = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let out = recognize(&star, 1, &FamilyRegistry::parse("bounded:1").unwrap()).unwrap();
        assert!(out.member);
        assert_eq!(out.structure.unwrap().mdc(), 1);
    }

    #[test]
    fn sun_needs_two_dcs() {
        // Triangle with a pendant at each corner; no merge fits in order 3.
        let sun = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)]).unwrap();
        let reg = FamilyRegistry::parse("bounded:3").unwrap();
        let out = recognize(&sun, 1, &reg).unwrap();
        assert!(!out.member);
        assert_eq!(out.roots_tried, 4);
        assert!(out.failure_detail.is_some());
        let out = recognize(&sun, 2, &reg).unwrap();
        let t = out.structure.unwrap();
        assert!(validate_structure(&sun, &t, &reg).valid);
        assert_eq!(t.mdc(), 2);
    }

    #[test]
    fn star_merges_leaves_when_allowed() {
        let star = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let reg = FamilyRegistry::parse("chordal").unwrap();
        let out = recognize(&star, 1, &reg).unwrap();
        let t = out.structure.unwrap();
        assert!(validate_structure(&star, &t, &reg).valid);
        assert!(t.mdc() <= 1);
    }

    #[test]
    fn family_member_is_accepted_whole() {
        let out = recognize(&Graph::complete(5), 2, &FamilyRegistry::default()).unwrap();
        assert!(out.member);
        assert_eq!(out.structure.unwrap().len(), 1);
        assert_eq!(out.roots_tried, 1);
    }

    #[test]
    fn disconnected_input_is_an_error() {
        let g = Graph::empty(2);
        assert_eq!(recognize(&g, 2, &FamilyRegistry::default()), Err(Error::Disconnected));
    }

    #[test]
    fn combinations_in_lex_order() {
        let mut idx = vec![0, 1];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            seen.push(idx.clone());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut empty: Vec<usize> = Vec::new();
        assert!(!next_combination(&mut empty, 3));
    }
}
