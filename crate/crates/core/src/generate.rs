//! Seeded random instances: plain random graphs, random chordal graphs and
//! graphs built from a random tree of parts with a known structure.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, VertexSet};
use crate::structure::SimpleTreeStructure;

/// Erdős–Rényi graph: each pair is an edge with probability `p`.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated edges are simple")
}

/// Connected random graph: a random recursive tree plus every other pair
/// with probability `p`.
pub fn random_connected_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        let anchor = rng.gen_range(0..v);
        for u in 0..v {
            if u == anchor || rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated edges are simple")
}

/// Connected chordal graph: each new vertex is joined to a random
/// nonempty clique of the vertices before it, so the reverse insertion
/// order is a perfect elimination ordering.
pub fn random_chordal_graph<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Graph {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for v in 1..n {
        let seed = rng.gen_range(0..v);
        let mut clique = vec![seed];
        let mut candidates = adj[seed].clone();
        candidates.shuffle(rng);
        for x in candidates {
            if rng.gen_bool(0.5) && clique.iter().all(|&y| adj[y].contains(&x)) {
                clique.push(x);
            }
        }
        for &u in &clique {
            adj[u].push(v);
            adj[v].push(u);
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, edges).expect("generated edges are simple")
}

/// Shape of the parts drawn by [`generate_member`].
///
/// Chordal parts are members of the `chordal` family. The other parts are
/// random connected graphs of order at most `bounded_cap`, so every part
/// belongs to any registry listing `chordal` and `bounded:{bounded_cap}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenProfile {
    pub min_part: usize,
    pub max_part: usize,
    /// Probability that a part is a general random graph.
    pub general_prob: f64,
    pub bounded_cap: usize,
    /// Extra-edge density of general parts.
    pub edge_prob: f64,
}

impl Default for GenProfile {
    fn default() -> Self {
        GenProfile { min_part: 2, max_part: 6, general_prob: 0.5, bounded_cap: 10, edge_prob: 0.5 }
    }
}

impl GenProfile {
    pub fn with_parts(mut self, min_part: usize, max_part: usize) -> Self {
        self.min_part = min_part;
        self.max_part = max_part;
        self
    }
}

/// Uniform labelled tree on `k` nodes decoded from a random Prüfer
/// sequence, as an edge list.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<(usize, usize)> {
    if k < 2 {
        return Vec::new();
    }
    let code: Vec<usize> = (0..k - 2).map(|_| rng.gen_range(0..k)).collect();
    let mut degree = vec![1usize; k];
    for &x in &code {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    for &x in &code {
        let leaf = (0..k).find(|&v| degree[v] == 1).expect("a leaf always remains");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// A connected graph with a simple tree structure of `k` parts and at most
/// `c` downward connectors per part. Vertex ids are shuffled so parts are
/// not contiguous ranges.
pub fn generate_member<R: Rng + ?Sized>(
    rng: &mut R,
    k: usize,
    c: usize,
    profile: &GenProfile,
) -> (Graph, SimpleTreeStructure) {
    assert!(k >= 1 && c >= 1, "need at least one part and one DC");
    let lo = profile.min_part.max(1);
    let hi = profile.max_part.max(lo);

    let blocks: Vec<Graph> = (0..k)
        .map(|_| {
            if rng.gen_bool(profile.general_prob) {
                let order = rng.gen_range(lo..=hi.min(profile.bounded_cap).max(lo));
                random_connected_graph(rng, order, profile.edge_prob)
            } else {
                let order = rng.gen_range(lo..=hi);
                random_chordal_graph(rng, order)
            }
        })
        .collect();
    if k == 1 {
        let g = blocks.into_iter().next().expect("one block");
        let n = g.order();
        return (g, SimpleTreeStructure::single(n));
    }

    let mut offset = vec![0; k + 1];
    for i in 0..k {
        offset[i + 1] = offset[i] + blocks[i].order();
    }
    let n = offset[k];
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);

    let root = rng.gen_range(0..k);
    let mut tree_adj = vec![Vec::new(); k];
    for (a, b) in random_tree(rng, k) {
        tree_adj[a].push(b);
        tree_adj[b].push(a);
    }
    let mut parent = vec![None; k];
    let mut order = vec![root];
    let mut seen = vec![false; k];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() {
        let i = order[head];
        head += 1;
        tree_adj[i].sort_unstable();
        for &j in &tree_adj[i] {
            if !seen[j] {
                seen[j] = true;
                parent[j] = Some(i);
                order.push(j);
            }
        }
    }

    let mut edges = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        edges.extend(block.edges().map(|(u, v)| (ids[offset[i] + u], ids[offset[i] + v])));
    }
    for &i in &order {
        let kids: Vec<usize> = (0..k).filter(|&j| parent[j] == Some(i)).collect();
        if kids.is_empty() {
            continue;
        }
        let width = blocks[i].order();
        let d = rng.gen_range(1..=c.min(kids.len()).min(width));
        let mut pool: Vec<usize> = (0..width).collect();
        pool.shuffle(rng);
        let dcs = &pool[..d];
        for (slot, &j) in kids.iter().enumerate() {
            let dc = if slot < d { dcs[slot] } else { dcs[rng.gen_range(0..d)] };
            let uc = rng.gen_range(0..blocks[j].order());
            edges.push((ids[offset[i] + dc], ids[offset[j] + uc]));
        }
    }

    let g = Graph::from_edges(n, edges).expect("generated edges are simple");
    let parts: Vec<VertexSet> = (0..k).map(|i| (offset[i]..offset[i + 1]).map(|x| ids[x]).collect()).collect();
    let t = SimpleTreeStructure::from_parts(&g, parts, parent).expect("one cross edge per tree edge");
    (g, t)
}
