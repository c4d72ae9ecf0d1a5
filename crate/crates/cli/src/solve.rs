//! Method dispatch for one graph: split into connected components, then
//! pick a solver per component.

use minrank_core::dp::dp_minrank;
use minrank_core::exact::{minrank_bnb, minrank_bruteforce, sandwich_bounds, Bounds};
use minrank_core::recognize::recognize;
use minrank_core::BRUTE_FORCE_BITS;
use minrank_core::{BitMatrix, Error, FamilyRegistry, Graph, Method, MinrankResult, SearchStats, VertexSet};

use crate::formats::matrix_rows;
use crate::records::{BoundsRecord, ComponentRecord, ResultRecord, StatsRecord};
use crate::sat::{minrank_cnf, SatSolver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum MethodChoice {
    /// Structure DP when recognized, else brute force within budget, else
    /// branch-and-bound, else SAT when a solver is configured.
    #[default]
    Auto,
    Brute,
    Bnb,
    Dp,
    Cnf,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions<'a> {
    pub method: MethodChoice,
    pub registry: &'a FamilyRegistry,
    pub c: usize,
    /// Branch-and-bound node budget per component.
    pub node_limit: Option<u64>,
    pub sat: Option<&'a SatSolver>,
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("not in the family: {0}")]
    NotMember(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl From<Error> for SolveError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(m) => SolveError::Budget(m),
            Error::NotInFamily(m) | Error::NotInRegistry(m) => SolveError::NotMember(m),
            e => SolveError::Other(e.into()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solved {
    pub result: MinrankResult,
    pub components: Vec<(VertexSet, MinrankResult)>,
    pub bounds: Bounds,
}

pub fn solve(g: &Graph, opts: &SolveOptions<'_>) -> Result<Solved, SolveError> {
    let bounds = sandwich_bounds(g);
    let comps = g.connected_components();
    let mut parts = Vec::with_capacity(comps.len());
    for comp in comps {
        let sub = g.induced(&comp)?;
        parts.push((comp, solve_connected(&sub, opts)?));
    }
    let result = match parts.as_slice() {
        [] => MinrankResult::exact(0, Some(BitMatrix::zeros(0, 0)), Method::Components, SearchStats::default()),
        [(_, only)] => only.clone(),
        many => {
            let n = g.order();
            let mut witness = Some(BitMatrix::zeros(n, n));
            let mut total = MinrankResult::exact(0, None, Method::Components, SearchStats::default());
            for (comp, r) in many {
                total.value += r.value;
                total.lower += r.lower;
                total.exact &= r.exact;
                total.stats.nodes += r.stats.nodes;
                match (&mut witness, &r.witness) {
                    (Some(w), Some(block)) => w.place_block(block, comp.as_slice()),
                    _ => witness = None,
                }
            }
            total.witness = witness;
            total
        }
    };
    Ok(Solved { result, components: parts, bounds })
}

/// Solves a connected graph.
pub fn solve_connected(g: &Graph, opts: &SolveOptions<'_>) -> Result<MinrankResult, SolveError> {
    match opts.method {
        MethodChoice::Brute => Ok(minrank_bruteforce(g)?),
        MethodChoice::Bnb => Ok(minrank_bnb(g, opts.node_limit)),
        MethodChoice::Dp => {
            let out = recognize(g, opts.c, opts.registry)?;
            match out.structure {
                Some(t) => Ok(dp_minrank(g, &t, opts.registry)?),
                None => Err(SolveError::NotMember(out.failure_detail.unwrap_or_default())),
            }
        }
        MethodChoice::Cnf => {
            let sat =
                opts.sat.ok_or_else(|| SolveError::Usage("method cnf needs a SAT solver (--sat-solver)".into()))?;
            Ok(minrank_cnf(g, sat, None)?)
        }
        MethodChoice::Auto => {
            if let Some(t) = recognize(g, opts.c, opts.registry)?.structure {
                match dp_minrank(g, &t, opts.registry) {
                    Ok(r) => return Ok(r),
                    Err(Error::BudgetExceeded(_)) => {}
                    Err(e) => return Err(e.into()),
                }
            }
            if 2 * g.size() <= BRUTE_FORCE_BITS {
                return Ok(minrank_bruteforce(g)?);
            }
            let r = minrank_bnb(g, opts.node_limit);
            match opts.sat {
                Some(sat) if !r.exact => Ok(minrank_cnf(g, sat, Some(&r))?),
                _ => Ok(r),
            }
        }
    }
}

pub fn to_record(name: String, g: &Graph, solved: &Solved) -> ResultRecord {
    let r = &solved.result;
    ResultRecord {
        graph: name,
        order: g.order(),
        size: g.size(),
        value: r.value,
        lower: r.lower,
        method: r.method.as_str().into(),
        inexact: !r.exact,
        witness: r.witness.as_ref().map(matrix_rows),
        bounds: BoundsRecord { lower: solved.bounds.lower, upper: solved.bounds.upper },
        stats: StatsRecord { nodes: r.stats.nodes },
        components: solved
            .components
            .iter()
            .map(|(vs, c)| ComponentRecord {
                vertices: vs.as_slice().to_vec(),
                value: c.value,
                lower: c.lower,
                method: c.method.as_str().into(),
                inexact: !c.exact,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(reg: &FamilyRegistry, method: MethodChoice) -> SolveOptions<'_> {
        SolveOptions { method, registry: reg, c: 2, node_limit: None, sat: None }
    }

    #[test]
    fn components_are_summed() {
        let reg = FamilyRegistry::default();
        let g = Graph::cycle(5).disjoint_union(&Graph::complete(3)).disjoint_union(&Graph::empty(2));
        let s = solve(&g, &opts(&reg, MethodChoice::Brute)).unwrap();
        assert_eq!(s.result.value, 3 + 1 + 1 + 1);
        assert_eq!(s.components.len(), 4);
        assert!(s.result.witness_is_valid(&g));
    }

    #[test]
    fn auto_prefers_the_structure() {
        let reg = FamilyRegistry::default();
        let s = solve(&Graph::path(6), &opts(&reg, MethodChoice::Auto)).unwrap();
        assert_eq!((s.result.value, s.result.method), (3, Method::Dp));
        let chordal_only = FamilyRegistry::parse("chordal").unwrap();
        let s = solve(&Graph::cycle(5), &opts(&chordal_only, MethodChoice::Auto)).unwrap();
        assert_eq!((s.result.value, s.result.method), (3, Method::Brute));
    }

    #[test]
    fn method_errors() {
        let reg = FamilyRegistry::parse("chordal").unwrap();
        assert!(matches!(solve(&Graph::cycle(5), &opts(&reg, MethodChoice::Dp)), Err(SolveError::NotMember(_))));
        assert!(matches!(solve(&Graph::complete(6), &opts(&reg, MethodChoice::Brute)), Err(SolveError::Budget(_))));
        assert!(matches!(solve(&Graph::path(3), &opts(&reg, MethodChoice::Cnf)), Err(SolveError::Usage(_))));
    }

    #[test]
    fn empty_graph() {
        let reg = FamilyRegistry::default();
        let s = solve(&Graph::empty(0), &opts(&reg, MethodChoice::Auto)).unwrap();
        assert_eq!(s.result.value, 0);
        let s = solve(&Graph::empty(4), &opts(&reg, MethodChoice::Auto)).unwrap();
        assert_eq!(s.result.value, 4);
    }
}
