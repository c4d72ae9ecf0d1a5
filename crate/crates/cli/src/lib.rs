//! File formats, method dispatch, SAT-solver plumbing and the batch
//! runner behind the `minrank` command.

pub mod batch;
pub mod config;
pub mod dot;
pub mod formats;
pub mod records;
pub mod sat;
pub mod solve;

use std::path::Path;

use anyhow::Context;
use minrank_core::Graph;

/// Reads every graph in a file (`-` for stdin): each graph6 line, or the
/// whole file as one edge list.
pub fn read_graphs(path: &Path) -> anyhow::Result<Vec<(String, Graph)>> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).context("reading stdin")?
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let name = path.display().to_string();
    if formats::looks_like_graph6(&text) {
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let g = formats::parse_graph6(line).with_context(|| format!("{name}:{}", i + 1))?;
            out.push((format!("{name}:{}", i + 1), g));
        }
        Ok(out)
    } else {
        let g = formats::parse_edge_list(&text).with_context(|| name.clone())?;
        Ok(vec![(name, g)])
    }
}

/// Exactly one graph from a file.
pub fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let mut graphs = read_graphs(path)?;
    match graphs.len() {
        1 => Ok(graphs.remove(0).1),
        k => anyhow::bail!("{} holds {k} graphs, expected one", path.display()),
    }
}
