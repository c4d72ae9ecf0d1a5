//! External SAT solvers speaking DIMACS on stdin.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use anyhow::{bail, Context};

use minrank_core::cnf::{emit_cnf, Cnf};
use minrank_core::exact::{sandwich_bounds, Bounds};
use minrank_core::{BitMatrix, Graph, Method, MinrankResult, SearchStats};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatAnswer {
    /// Satisfiable, with the model when the solver printed one (indexed
    /// by 1-based variable; entry 0 is unused).
    Sat(Option<Vec<bool>>),
    Unsat,
    Unknown,
}

/// Reads a solver's output. Understands competition-style `s` / `v` lines,
/// bare `SAT` / `UNSAT` status lines followed by a literal line, and the
/// conventional exit codes 10 and 20.
pub fn parse_solver_output(stdout: &str, exit_code: Option<i32>, num_vars: usize) -> SatAnswer {
    let mut status = None;
    let mut lits: Vec<i64> = Vec::new();
    let mut saw_model = false;
    for line in stdout.lines().map(str::trim) {
        let body = line.strip_prefix("s ").map(str::trim).unwrap_or(line);
        match body {
            "SATISFIABLE" | "SAT" => status = Some(true),
            "UNSATISFIABLE" | "UNSAT" => status = Some(false),
            _ => {
                let nums = line.strip_prefix("v ").unwrap_or(line);
                let parsed: Option<Vec<i64>> = nums.split_whitespace().map(|t| t.parse().ok()).collect();
                if let Some(p) = parsed.filter(|p| !p.is_empty()) {
                    if line.starts_with("v ") || status == Some(true) {
                        lits.extend(p);
                        saw_model = true;
                    }
                }
            }
        }
    }
    let status = status.or(match exit_code {
        Some(10) => Some(true),
        Some(20) => Some(false),
        _ => None,
    });
    match status {
        Some(false) => SatAnswer::Unsat,
        Some(true) => {
            if !saw_model {
                return SatAnswer::Sat(None);
            }
            let mut model = vec![false; num_vars + 1];
            for l in lits {
                let v = l.unsigned_abs() as usize;
                if l != 0 && v <= num_vars {
                    model[v] = l > 0;
                }
            }
            SatAnswer::Sat(Some(model))
        }
        None => SatAnswer::Unknown,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatSolver {
    pub program: PathBuf,
    pub args: Vec<String>,
}

impl SatSolver {
    pub fn solve(&self, cnf: &Cnf) -> anyhow::Result<SatAnswer> {
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .with_context(|| format!("starting SAT solver {}", self.program.display()))?;
        let text = cnf.to_string();
        {
            let mut stdin = child.stdin.take().expect("stdin is piped");
            // A solver may exit before reading everything; its answer still counts.
            let _ = stdin.write_all(text.as_bytes());
        }
        let out = child.wait_with_output().context("waiting for SAT solver")?;
        let stdout = String::from_utf8_lossy(&out.stdout);
        Ok(parse_solver_output(&stdout, out.status.code(), cnf.num_vars()))
    }
}

/// Min-rank by binary search on the target rank, starting from the
/// sandwich bounds and, when given, a better known upper bound.
pub fn minrank_cnf(g: &Graph, solver: &SatSolver, known: Option<&MinrankResult>) -> anyhow::Result<MinrankResult> {
    let n = g.order();
    let bounds: Bounds = sandwich_bounds(g);
    if n == 0 {
        return Ok(MinrankResult::exact(0, Some(BitMatrix::zeros(0, 0)), Method::Cnf, SearchStats::default()));
    }
    let mut lo = bounds.lower.max(known.map_or(0, |r| r.lower));
    let mut hi = bounds.upper;
    let mut witness = Some(bounds.clique_cover_matrix(n));
    if let Some(r) = known.filter(|r| r.value < hi) {
        hi = r.value;
        witness = r.witness.clone();
    }
    let mut calls = 0;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let cnf = emit_cnf(g, mid)?;
        calls += 1;
        match solver.solve(&cnf)? {
            SatAnswer::Sat(model) => {
                hi = mid;
                witness = match model {
                    Some(m) => {
                        let w = cnf.decode(|v| m[v as usize]);
                        if !w.fits(g)? {
                            bail!("SAT solver model does not decode to a fitting matrix");
                        }
                        // The product has rank at most `mid`; report what it has.
                        hi = w.rank();
                        Some(w)
                    }
                    None => None,
                };
            }
            SatAnswer::Unsat => lo = mid + 1,
            SatAnswer::Unknown => {
                return Ok(MinrankResult {
                    value: hi,
                    lower: lo,
                    exact: false,
                    witness,
                    method: Method::Cnf,
                    stats: SearchStats { nodes: calls },
                })
            }
        }
    }
    Ok(MinrankResult::exact(hi, witness, Method::Cnf, SearchStats { nodes: calls }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn competition_output() {
        let out = "c hello\ns SATISFIABLE\nv 1 -2\nv 3 0\n";
        assert_eq!(parse_solver_output(out, Some(10), 3), SatAnswer::Sat(Some(vec![false, true, false, true])));
        assert_eq!(parse_solver_output("s UNSATISFIABLE\n", Some(20), 3), SatAnswer::Unsat);
    }

    #[test]
    fn bare_status_and_exit_codes() {
        assert_eq!(parse_solver_output("SAT\n-1 2 0\n", None, 2), SatAnswer::Sat(Some(vec![false, false, true])));
        assert_eq!(parse_solver_output("UNSAT\n", None, 2), SatAnswer::Unsat);
        assert_eq!(parse_solver_output("", Some(10), 2), SatAnswer::Sat(None));
        assert_eq!(parse_solver_output("", Some(20), 2), SatAnswer::Unsat);
        assert_eq!(parse_solver_output("s UNKNOWN\n", Some(0), 2), SatAnswer::Unknown);
    }
}
