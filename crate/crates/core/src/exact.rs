//! Exact min-rank solvers and the independence / clique-cover sandwich.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gf2::{words_for, BitMatrix, RowBasis};
use crate::graph::Graph;
use crate::BRUTE_FORCE_BITS;

/// How a min-rank value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Brute,
    Bnb,
    Dp,
    Family,
    Components,
    Cnf,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Bnb => "bnb",
            Method::Dp => "dp",
            Method::Family => "family",
            Method::Components => "components",
            Method::Cnf => "cnf",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Search nodes (row assignments) visited.
    pub nodes: u64,
}

/// Outcome of a min-rank computation.
///
/// When `exact` is false the true min-rank lies in `lower..=value`, where
/// `value` is the best rank found so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinrankResult {
    pub value: usize,
    pub lower: usize,
    pub exact: bool,
    /// A fitting matrix of rank `value`, when the method produces one.
    pub witness: Option<BitMatrix>,
    pub method: Method,
    pub stats: SearchStats,
}

impl MinrankResult {
    pub fn exact(value: usize, witness: Option<BitMatrix>, method: Method, stats: SearchStats) -> Self {
        MinrankResult { value, lower: value, exact: true, witness, method, stats }
    }

    /// Checks the witness against `g`: it must fit and have rank `value`.
    pub fn witness_is_valid(&self, g: &Graph) -> bool {
        match &self.witness {
            Some(m) => m.fits(g).unwrap_or(false) && m.rank() == self.value,
            None => true,
        }
    }
}

/// Certified sandwich `lower <= minrk <= upper`: an independent set and a
/// clique cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub lower: usize,
    pub upper: usize,
    pub independent_set: Vec<usize>,
    pub clique_cover: Vec<Vec<usize>>,
}

impl Bounds {
    /// The block matrix with an all-ones block per clique. It fits the
    /// graph and has rank equal to the number of cliques.
    pub fn clique_cover_matrix(&self, n: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(n, n);
        for clique in &self.clique_cover {
            for &u in clique {
                for &v in clique {
                    m.set(u, v, true);
                }
            }
        }
        m
    }
}

/// Greedy bounds. The independent set repeatedly takes a vertex of minimum
/// remaining degree; the clique cover grows a clique from the smallest
/// uncovered vertex by scanning the remaining vertices in ascending order.
/// Ties go to the smallest vertex id.
pub fn sandwich_bounds(g: &Graph) -> Bounds {
    let n = g.order();

    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut independent_set = Vec::new();
    while let Some(v) = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (degree[v], v)) {
        independent_set.push(v);
        let mut removed = vec![v];
        removed.extend(g.neighbors(v).iter().copied().filter(|&w| alive[w]));
        for &w in &removed {
            alive[w] = false;
        }
        for &w in &removed {
            for &x in g.neighbors(w) {
                if alive[x] {
                    degree[x] -= 1;
                }
            }
        }
    }

    let mut covered = vec![false; n];
    let mut clique_cover = Vec::new();
    for s in 0..n {
        if covered[s] {
            continue;
        }
        let mut clique = vec![s];
        covered[s] = true;
        for (v, seen) in covered.iter_mut().enumerate().skip(s + 1) {
            if !*seen && clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
                *seen = true;
            }
        }
        clique_cover.push(clique);
    }

    Bounds { lower: independent_set.len(), upper: clique_cover.len(), independent_set, clique_cover }
}

/// Exhaustive min-rank: enumerates every fitting matrix. Each edge
/// contributes two free entries, so the work is `2^(2|E|)`; graphs with
/// `2|E| > 24` are refused.
pub fn minrank_bruteforce(g: &Graph) -> Result<MinrankResult> {
    let bits = 2 * g.size();
    if bits > BRUTE_FORCE_BITS {
        return Err(Error::BudgetExceeded(format!(
            "brute force needs 2|E| <= {BRUTE_FORCE_BITS}, graph has 2|E| = {bits}"
        )));
    }
    let n = g.order();
    if n == 0 {
        return Ok(MinrankResult::exact(0, Some(BitMatrix::zeros(0, 0)), Method::Brute, SearchStats::default()));
    }
    let mut search = Enumeration {
        g,
        stride: words_for(n),
        basis: RowBasis::new(n),
        rows: vec![0; n * words_for(n)],
        best: usize::MAX,
        best_rows: Vec::new(),
        leaves: 0,
    };
    search.descend(0);
    let witness = rows_to_matrix(n, &search.best_rows);
    Ok(MinrankResult::exact(search.best, Some(witness), Method::Brute, SearchStats { nodes: search.leaves }))
}

struct Enumeration<'a> {
    g: &'a Graph,
    stride: usize,
    basis: RowBasis,
    rows: Vec<u64>,
    best: usize,
    best_rows: Vec<u64>,
    leaves: u64,
}

impl Enumeration<'_> {
    fn descend(&mut self, v: usize) {
        let n = self.g.order();
        if v == n {
            self.leaves += 1;
            if self.basis.len() < self.best {
                self.best = self.basis.len();
                self.best_rows = self.rows.clone();
            }
            return;
        }
        let nbrs = self.g.neighbors(v);
        let before = self.basis.len();
        let span = v * self.stride..(v + 1) * self.stride;
        for pattern in 0u64..1 << nbrs.len() {
            fill_row(&mut self.rows[span.clone()], v, nbrs, pattern);
            self.basis.push_row(&self.rows[span.clone()]);
            self.descend(v + 1);
            self.basis.truncate(before);
        }
    }
}

fn fill_row(row: &mut [u64], v: usize, nbrs: &[usize], pattern: u64) {
    row.fill(0);
    row[v / 64] |= 1 << (v % 64);
    for (k, &w) in nbrs.iter().enumerate() {
        if pattern >> k & 1 == 1 {
            row[w / 64] |= 1 << (w % 64);
        }
    }
}

fn rows_to_matrix(n: usize, rows: &[u64]) -> BitMatrix {
    let stride = words_for(n);
    let mut m = BitMatrix::zeros(n, n);
    for i in 0..n {
        m.row_mut(i).copy_from_slice(&rows[i * stride..(i + 1) * stride]);
    }
    m
}

/// Min-rank by branch-and-bound.
///
/// Rows are assigned vertex by vertex in descending-degree order; each
/// row has its diagonal bit set and free bits only at neighbor columns.
/// The search keeps an incremental row basis and prunes when the basis
/// size plus a greedy independent set among still-untouched columns
/// reaches the best rank found. The clique cover seeds the incumbent and
/// the independent set gives the global lower bound, so the search stops
/// as soon as the two meet.
///
/// With `node_limit` set, a search that runs out of nodes returns an
/// inexact result carrying the best rank found and the proven lower bound.
pub fn minrank_bnb(g: &Graph, node_limit: Option<u64>) -> MinrankResult {
    let n = g.order();
    if n == 0 {
        return MinrankResult::exact(0, Some(BitMatrix::zeros(0, 0)), Method::Bnb, SearchStats::default());
    }
    let bounds = sandwich_bounds(g);
    let incumbent = bounds.clique_cover_matrix(n);
    if bounds.lower == bounds.upper {
        return MinrankResult::exact(bounds.upper, Some(incumbent), Method::Bnb, SearchStats::default());
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (core::cmp::Reverse(g.degree(v)), v));
    let stride = words_for(n);
    let mut best_rows = vec![0u64; n * stride];
    for i in 0..n {
        best_rows[i * stride..(i + 1) * stride].copy_from_slice(incumbent.row(i));
    }

    let mut search = BranchAndBound {
        g,
        order,
        stride,
        masks: (n <= 64).then(|| (0..n).map(|v| adjacency_mask(g, v)).collect()),
        basis: RowBasis::new(n),
        rows: vec![0; n * stride],
        used: vec![0; stride],
        best: bounds.upper,
        best_rows,
        target: bounds.lower,
        nodes: 0,
        node_limit,
        aborted: false,
    };
    search.descend(0);

    let witness = rows_to_matrix(n, &search.best_rows);
    let stats = SearchStats { nodes: search.nodes };
    if search.aborted {
        MinrankResult {
            value: search.best,
            lower: bounds.lower,
            exact: false,
            witness: Some(witness),
            method: Method::Bnb,
            stats,
        }
    } else {
        MinrankResult::exact(search.best, Some(witness), Method::Bnb, stats)
    }
}

fn adjacency_mask(g: &Graph, v: usize) -> u64 {
    g.neighbors(v).iter().fold(0, |m, &w| m | 1 << w)
}

struct BranchAndBound<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    stride: usize,
    masks: Option<Vec<u64>>,
    basis: RowBasis,
    rows: Vec<u64>,
    /// OR of all assigned rows: columns some assigned row touches.
    used: Vec<u64>,
    best: usize,
    best_rows: Vec<u64>,
    target: usize,
    nodes: u64,
    node_limit: Option<u64>,
    aborted: bool,
}

impl BranchAndBound<'_> {
    fn done(&self) -> bool {
        self.aborted || self.best <= self.target
    }

    /// Lower bound on the rank still to come from rows `depth..`.
    ///
    /// Columns outside `used` are zero in every assigned row. For an
    /// independent set `I` of unassigned vertices whose columns are all
    /// untouched, the rows of `I` restricted to the columns of `I` form an
    /// identity block, so they add `|I|` to the rank of the assigned rows.
    fn completion_bound(&self, depth: usize) -> usize {
        let Some(masks) = &self.masks else { return 0 };
        let mut free = 0u64;
        for &v in &self.order[depth..] {
            if self.used[0] >> v & 1 == 0 {
                free |= 1 << v;
            }
        }
        let mut count = 0;
        while free != 0 {
            let mut pick = usize::MAX;
            let mut pick_deg = u32::MAX;
            let mut rest = free;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let d = (masks[v] & free).count_ones();
                if d < pick_deg {
                    pick = v;
                    pick_deg = d;
                }
            }
            count += 1;
            free &= !(masks[pick] | 1 << pick);
        }
        count
    }

    fn descend(&mut self, depth: usize) {
        let n = self.g.order();
        if depth == n {
            if self.basis.len() < self.best {
                self.best = self.basis.len();
                self.best_rows.copy_from_slice(&self.rows);
            }
            return;
        }
        let v = self.order[depth];
        let nbrs = self.g.neighbors(v);
        let rank = self.basis.len();
        let saved_used = self.used.clone();
        let mut row = vec![0u64; self.stride];

        // Rows inside the current span first; they keep the rank unchanged.
        for grow_pass in [false, true] {
            if grow_pass && rank + 1 >= self.best {
                break;
            }
            for pattern in 0u64..1 << nbrs.len() {
                if self.done() {
                    return;
                }
                fill_row(&mut row, v, nbrs, pattern);
                if self.basis.contains(&row) == grow_pass {
                    continue;
                }
                self.nodes += 1;
                if self.node_limit.is_some_and(|limit| self.nodes > limit) {
                    self.aborted = true;
                    return;
                }
                self.basis.push_row(&row);
                for (u, r) in self.used.iter_mut().zip(&row) {
                    *u |= r;
                }
                if self.basis.len() + self.completion_bound(depth + 1) < self.best {
                    self.rows[v * self.stride..(v + 1) * self.stride].copy_from_slice(&row);
                    self.descend(depth + 1);
                }
                self.basis.truncate(rank);
                self.used.copy_from_slice(&saved_used);
            }
        }
    }
}

/// Min-rank as the sum over connected components, with the witness
/// assembled block-diagonally when every component has one.
pub fn minrank_components<F>(g: &Graph, mut solver: F) -> Result<MinrankResult>
where
    F: FnMut(&Graph) -> Result<MinrankResult>,
{
    let comps = g.connected_components();
    if comps.len() <= 1 {
        return solver(g);
    }
    let n = g.order();
    let mut witness = Some(BitMatrix::zeros(n, n));
    let (mut value, mut lower, mut exact, mut nodes) = (0, 0, true, 0);
    for comp in &comps {
        let part = solver(&g.induced(comp)?)?;
        value += part.value;
        lower += part.lower;
        exact &= part.exact;
        nodes += part.stats.nodes;
        match (&mut witness, &part.witness) {
            (Some(w), Some(block)) => w.place_block(block, comp.as_slice()),
            _ => witness = None,
        }
    }
    Ok(MinrankResult { value, lower, exact, witness, method: Method::Components, stats: SearchStats { nodes } })
}
