//! CNF encoding of "min-rank <= k" for an external SAT solver.
//!
//! A fitting matrix of rank at most `k` factors as `M = A * B` with `A`
//! of size `n x k` and `B` of size `k x n`. Each entry
//! `m_ij = XOR_t (a_it AND b_tj)` that the fitting condition pins down
//! (the diagonal must be one, off-diagonal non-edges must be zero) is
//! built from Tseitin AND gates and a chain of Tseitin XOR gates, and the
//! chain's output is fixed by a unit clause. Entries at edge positions are
//! left free, so the formula is satisfiable exactly when the min-rank is
//! at most `k`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::graph::Graph;

pub type Literal = i32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    n: usize,
    k: usize,
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
}

/// Encodes "the graph has a fitting matrix of rank at most `k`".
pub fn emit_cnf(g: &Graph, k: usize) -> Result<Cnf> {
    let n = g.order();
    if k == 0 || k > n {
        return Err(Error::TargetOutOfRange { k, n });
    }
    let mut cnf = Cnf { n, k, num_vars: 2 * n * k, clauses: Vec::new() };
    for i in 0..n {
        for j in 0..n {
            if i != j && g.has_edge(i, j) {
                continue;
            }
            let out = cnf.entry_gate(i, j);
            cnf.clauses.push(vec![if i == j { out } else { -out }]);
        }
    }
    Ok(cnf)
}

impl Cnf {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn target(&self) -> usize {
        self.k
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    /// Variable of `A[i][t]`.
    pub fn a_var(&self, i: usize, t: usize) -> Literal {
        (1 + i * self.k + t) as Literal
    }

    /// Variable of `B[t][j]`.
    pub fn b_var(&self, t: usize, j: usize) -> Literal {
        (1 + self.n * self.k + t * self.n + j) as Literal
    }

    fn fresh(&mut self) -> Literal {
        self.num_vars += 1;
        self.num_vars as Literal
    }

    /// Returns a literal equivalent to `m_ij`.
    fn entry_gate(&mut self, i: usize, j: usize) -> Literal {
        let mut acc: Option<Literal> = None;
        for t in 0..self.k {
            let (a, b) = (self.a_var(i, t), self.b_var(t, j));
            let p = self.fresh();
            self.clauses.push(vec![-p, a]);
            self.clauses.push(vec![-p, b]);
            self.clauses.push(vec![p, -a, -b]);
            acc = Some(match acc {
                None => p,
                Some(y) => {
                    let x = self.fresh();
                    self.clauses.push(vec![-x, y, p]);
                    self.clauses.push(vec![-x, -y, -p]);
                    self.clauses.push(vec![x, -y, p]);
                    self.clauses.push(vec![x, y, -p]);
                    x
                }
            });
        }
        acc.expect("k >= 1")
    }

    /// Writes DIMACS: variable-layout comments, the `p cnf V C` header and
    /// one zero-terminated clause per line.
    pub fn write_dimacs<W: fmt::Write>(&self, out: &mut W) -> fmt::Result {
        writeln!(out, "c minrank <= {} for a graph of order {}", self.k, self.n)?;
        for i in 0..self.n {
            for t in 0..self.k {
                writeln!(out, "c var a_{i}_{t} = {}", self.a_var(i, t))?;
            }
        }
        for t in 0..self.k {
            for j in 0..self.n {
                writeln!(out, "c var b_{t}_{j} = {}", self.b_var(t, j))?;
            }
        }
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ")?;
            }
            writeln!(out, "0")?;
        }
        Ok(())
    }

    /// Builds `M = A * B` from a satisfying assignment; `value(var)` reports
    /// the truth value of a 1-based variable.
    pub fn decode<F: Fn(Literal) -> bool>(&self, value: F) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let bit = (0..self.k).fold(false, |acc, t| acc ^ (value(self.a_var(i, t)) && value(self.b_var(t, j))));
                m.set(i, j, bit);
            }
        }
        m
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_dimacs(f)
    }
}
