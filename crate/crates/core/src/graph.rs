//! Simple undirected graphs on dense vertex ids `0..n`.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A simple undirected graph. Vertex ids are `0..order()`; neighbor lists
/// are kept sorted. External names (for example 1-based receiver indices)
/// can be attached as labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    size: usize,
    labels: Option<Vec<String>>,
}

/// A duplicate-free set of vertex ids, stored in ascending order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        Ok(VertexSet(vertices))
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                core::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        VertexSet(out)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }

    /// First common vertex, if any.
    pub fn intersection_witness(&self, other: &VertexSet) -> Option<usize> {
        self.0.iter().copied().find(|&v| other.contains(v))
    }

    fn check_order(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, order: n }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for VertexSet {
    /// Collects, sorts and removes duplicates.
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

/// Pairwise disjoint, nonempty parts covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<VertexSet>,
    part_of: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<VertexSet>, n: usize) -> Result<Self> {
        let mut part_of = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::InvalidPartition(alloc::format!("part {i} is empty")));
            }
            part.check_order(n)?;
            for v in part.iter() {
                if part_of[v] != usize::MAX {
                    return Err(Error::InvalidPartition(alloc::format!(
                        "vertex {v} appears in parts {} and {i}",
                        part_of[v]
                    )));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidPartition(alloc::format!("vertex {v} is not covered")));
        }
        Ok(Partition { parts, part_of })
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], size: 0, labels: None }
    }

    /// Builds a graph from an edge list. Loops, repeated edges and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut size = 0;
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, order: n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
            size += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph { adj, size, labels: None })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path is simple")
    }

    /// The cycle on `n >= 3` vertices `0-1-...-(n-1)-0`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is simple")
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().copied().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order() {
            return Err(Error::DimensionMismatch { expected: self.order(), found: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    /// Subgraph induced by `vs`, together with the old-to-new index map
    /// (`None` for vertices outside `vs`). New ids follow the ascending
    /// order of `vs`.
    pub fn induced_subgraph(&self, vs: &VertexSet) -> Result<(Graph, Vec<Option<usize>>)> {
        vs.check_order(self.order())?;
        let mut map = vec![None; self.order()];
        for (new, old) in vs.iter().enumerate() {
            map[old] = Some(new);
        }
        let mut adj = Vec::with_capacity(vs.len());
        let mut size = 0;
        for old in vs.iter() {
            let list: Vec<usize> = self.adj[old].iter().filter_map(|&w| map[w]).collect();
            size += list.len();
            adj.push(list);
        }
        let labels = self.labels.as_ref().map(|l| vs.iter().map(|v| l[v].clone()).collect());
        Ok((Graph { adj, size: size / 2, labels }, map))
    }

    /// Subgraph induced by `vs`, without the index map.
    pub fn induced(&self, vs: &VertexSet) -> Result<Graph> {
        self.induced_subgraph(vs).map(|(g, _)| g)
    }

    /// The graph with every vertex of `vs` (and its edges) deleted.
    pub fn remove_vertices(&self, vs: &VertexSet) -> Result<Graph> {
        vs.check_order(self.order())?;
        let keep = VertexSet((0..self.order()).filter(|&v| !vs.contains(v)).collect());
        self.induced(&keep)
    }

    /// Connected components, each sorted, listed by smallest vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(VertexSet(comp));
        }
        out
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// All bridges as `(min, max)` pairs in ascending order, via an
    /// iterative low-link depth-first search.
    pub fn bridges(&self) -> Vec<(usize, usize)> {
        let n = self.order();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut out = Vec::new();
        let mut time = 0;
        // (vertex, parent, next neighbor index)
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = time;
            low[root] = time;
            time += 1;
            stack.push((root, usize::MAX, 0));
            while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
                if let Some(&w) = self.adj[u].get(*next) {
                    *next += 1;
                    if w == parent {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        stack.push((w, u, 0));
                    } else {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[u]);
                        if low[u] > disc[parent] {
                            out.push((parent.min(u), parent.max(u)));
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Number of edges with one endpoint in `u` and the other in `v`.
    pub fn cross_edge_count(&self, u: &VertexSet, v: &VertexSet) -> Result<usize> {
        u.check_order(self.order())?;
        v.check_order(self.order())?;
        if let Some(w) = u.intersection_witness(v) {
            return Err(Error::Overlap(w));
        }
        Ok(u.iter().map(|a| self.adj[a].iter().filter(|&&b| v.contains(b)).count()).sum())
    }

    pub fn complement(&self) -> Graph {
        let n = self.order();
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        let edges: Vec<_> = edges.filter(|&(u, v)| !self.has_edge(u, v)).collect();
        Graph::from_edges(n, edges).expect("complement is simple")
    }

    /// Vertices of `other` are shifted up by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.order();
        let edges = self.edges().chain(other.edges().map(|(u, v)| (u + shift, v + shift)));
        let edges: Vec<_> = edges.collect();
        Graph::from_edges(shift + other.order(), edges).expect("disjoint union is simple")
    }

    /// Copy of the graph with the edge `{u, v}` deleted.
    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let edges: Vec<_> = self.edges().filter(|&e| e != (u.min(v), u.max(v))).collect();
        Graph::from_edges(self.order(), edges).expect("subgraph is simple")
    }
}
