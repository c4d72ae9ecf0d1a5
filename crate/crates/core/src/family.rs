//! Base graph families: hereditary classes with a membership test and a
//! min-rank routine, collected in an ordered registry.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::exact::minrank_bnb;
use crate::graph::Graph;

/// A hereditary graph family: every induced subgraph of a member is a
/// member, membership is decidable, and members have a min-rank routine.
pub trait Family: fmt::Debug + Send + Sync {
    /// Unique name, also the spec string accepted by [`FamilyRegistry::parse`].
    fn name(&self) -> String;

    fn is_member(&self, g: &Graph) -> bool;

    /// Binary min-rank of a member. Errors on non-members.
    fn minrank(&self, g: &Graph) -> Result<usize>;
}

/// Graphs of order at most `cap`, solved by branch-and-bound.
#[derive(Debug, Clone)]
pub struct BoundedOrder {
    cap: usize,
    node_limit: Option<u64>,
}

impl BoundedOrder {
    pub fn new(cap: usize) -> Self {
        BoundedOrder { cap, node_limit: None }
    }

    /// Caps the branch-and-bound search; running out is reported as an error.
    pub fn with_node_limit(mut self, limit: u64) -> Self {
        self.node_limit = Some(limit);
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }
}

impl Family for BoundedOrder {
    fn name(&self) -> String {
        format!("bounded:{}", self.cap)
    }

    fn is_member(&self, g: &Graph) -> bool {
        g.order() <= self.cap
    }

    fn minrank(&self, g: &Graph) -> Result<usize> {
        if !self.is_member(g) {
            return Err(Error::Contract(format!("graph of order {} is not in {}", g.order(), self.name())));
        }
        let r = minrank_bnb(g, self.node_limit);
        if !r.exact {
            return Err(Error::BudgetExceeded(format!(
                "branch-and-bound stopped with min-rank in {}..={}",
                r.lower, r.value
            )));
        }
        Ok(r.value)
    }
}

/// Chordal graphs. They are perfect, so the min-rank equals the
/// independence number, which a greedy pass over a perfect elimination
/// ordering computes exactly.
#[derive(Debug, Clone, Copy, Default)]
pub struct Chordal;

impl Family for Chordal {
    fn name(&self) -> String {
        "chordal".into()
    }

    fn is_member(&self, g: &Graph) -> bool {
        perfect_elimination_ordering(g).is_some()
    }

    fn minrank(&self, g: &Graph) -> Result<usize> {
        let peo = perfect_elimination_ordering(g).ok_or_else(|| Error::Contract("graph is not chordal".into()))?;
        Ok(chordal_independent_set(g, &peo).len())
    }
}

/// Lexicographic breadth-first search by partition refinement. Returns
/// vertices in visit order; ties go to the smallest id.
pub fn lex_bfs(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut classes: Vec<Vec<usize>> = if n == 0 { Vec::new() } else { vec![(0..n).collect()] };
    let mut order = Vec::with_capacity(n);
    let mut is_nbr = vec![false; n];
    while let Some(first) = classes.first_mut() {
        let v = first.remove(0);
        if first.is_empty() {
            classes.remove(0);
        }
        order.push(v);
        for &w in g.neighbors(v) {
            is_nbr[w] = true;
        }
        let mut refined = Vec::with_capacity(classes.len() * 2);
        for class in classes.drain(..) {
            let (hit, miss): (Vec<usize>, Vec<usize>) = class.into_iter().partition(|&w| is_nbr[w]);
            if !hit.is_empty() {
                refined.push(hit);
            }
            if !miss.is_empty() {
                refined.push(miss);
            }
        }
        classes = refined;
        for &w in g.neighbors(v) {
            is_nbr[w] = false;
        }
    }
    order
}

/// A perfect elimination ordering (first entry eliminated first) if the
/// graph is chordal: the reverse lexicographic BFS order, verified.
pub fn perfect_elimination_ordering(g: &Graph) -> Option<Vec<usize>> {
    let mut peo = lex_bfs(g);
    peo.reverse();
    let n = g.order();
    let mut position = vec![0; n];
    for (i, &v) in peo.iter().enumerate() {
        position[v] = i;
    }
    for &v in &peo {
        let later: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| position[w] > position[v]).collect();
        let Some(&parent) = later.iter().min_by_key(|&&w| position[w]) else {
            continue;
        };
        if later.iter().any(|&w| w != parent && !g.has_edge(parent, w)) {
            return None;
        }
    }
    Some(peo)
}

pub fn is_chordal(g: &Graph) -> bool {
    perfect_elimination_ordering(g).is_some()
}

/// Maximum independent set of a chordal graph: walk the elimination
/// ordering and keep each vertex with no kept neighbor.
pub fn chordal_independent_set(g: &Graph, peo: &[usize]) -> Vec<usize> {
    let mut blocked = vec![false; g.order()];
    let mut chosen = Vec::new();
    for &v in peo {
        if !blocked[v] {
            chosen.push(v);
            blocked[v] = true;
            for &w in g.neighbors(v) {
                blocked[w] = true;
            }
        }
    }
    chosen
}

/// Ordered collection of families; lookups return the first match.
#[derive(Debug)]
pub struct FamilyRegistry {
    families: Vec<Box<dyn Family>>,
}

impl FamilyRegistry {
    pub fn new(families: Vec<Box<dyn Family>>) -> Result<Self> {
        if families.is_empty() {
            return Err(Error::UnknownFamily("empty registry".into()));
        }
        let names: Vec<String> = families.iter().map(|f| f.name()).collect();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::UnknownFamily(format!("{name} listed twice")));
            }
        }
        Ok(FamilyRegistry { families })
    }

    /// Parses a comma-separated list such as `chordal,bounded:10`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut families: Vec<Box<dyn Family>> = Vec::new();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once(':') {
                None if item == "chordal" => families.push(Box::new(Chordal)),
                Some(("bounded", cap)) => {
                    let cap = cap.parse().map_err(|_| Error::UnknownFamily(item.into()))?;
                    families.push(Box::new(BoundedOrder::new(cap)));
                }
                _ => return Err(Error::UnknownFamily(item.into())),
            }
        }
        FamilyRegistry::new(families)
    }

    pub fn families(&self) -> impl Iterator<Item = &dyn Family> {
        self.families.iter().map(|f| f.as_ref())
    }

    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    /// First family containing `g`, in registry order.
    pub fn lookup(&self, g: &Graph) -> Option<&dyn Family> {
        self.families().find(|f| f.is_member(g))
    }

    pub fn contains(&self, g: &Graph) -> bool {
        self.lookup(g).is_some()
    }

    pub fn spec(&self) -> String {
        let names: Vec<String> = self.families().map(|f| f.name()).collect();
        names.join(",")
    }
}

impl Default for FamilyRegistry {
    /// `chordal,bounded:10`.
    fn default() -> Self {
        FamilyRegistry::new(vec![Box::new(Chordal), Box::new(BoundedOrder::new(10))])
            .expect("default registry is valid")
    }
}
