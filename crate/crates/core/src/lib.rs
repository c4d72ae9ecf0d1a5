//! Binary min-rank of simple graphs.
//!
//! The min-rank of a graph is the smallest rank over GF(2) of a square
//! matrix that has ones on its diagonal and zeros at every off-diagonal
//! position that is not an edge. This crate computes it three ways:
//!
//! * exactly, by exhaustive enumeration or branch-and-bound ([`exact`]),
//! * through a CNF encoding for an external SAT solver ([`cnf`]),
//! * in polynomial time for graphs that decompose into a rooted tree of
//!   well-behaved parts joined by single edges ([`structure`], [`dp`],
//!   [`recognize`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the batch
//! runner and the command-line tool live in the `minrank` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cnf;
pub mod dp;
mod error;
pub mod exact;
pub mod family;
pub mod generate;
pub mod gf2;
pub mod graph;
pub mod recognize;
pub mod structure;

pub use error::{Error, Result};
pub use exact::{Bounds, Method, MinrankResult, SearchStats};
pub use family::{Family, FamilyRegistry};
pub use gf2::{BitMatrix, RowBasis};
pub use graph::{Graph, Partition, VertexSet};
pub use structure::{SimpleTreeStructure, StructureReport};

/// Edge-bit budget shared by the brute-force solver and auto dispatch:
/// a graph with `2 * |E| <= BRUTE_FORCE_BITS` is small enough to enumerate.
pub const BRUTE_FORCE_BITS: usize = 24;
