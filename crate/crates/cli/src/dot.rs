//! Graphviz output.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use minrank_core::{Graph, SimpleTreeStructure};

fn node_name(g: &Graph, v: usize) -> String {
    let label = g.label(v).map_or_else(|| v.to_string(), str::to_string);
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// The graph with labelled vertices; bridges drawn bold and red when
/// `highlight_bridges` is set.
pub fn graph_dot(g: &Graph, highlight_bridges: bool) -> String {
    let bridges: BTreeSet<(usize, usize)> =
        if highlight_bridges { g.bridges().into_iter().collect() } else { BTreeSet::new() };
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for v in 0..g.order() {
        let _ = writeln!(out, "  v{v} [label=\"{}\"];", node_name(g, v));
    }
    for (u, v) in g.edges() {
        let style = if bridges.contains(&(u, v)) { " [color=red, penwidth=2.5]" } else { "" };
        let _ = writeln!(out, "  v{u} -- v{v}{style};");
    }
    out.push_str("}\n");
    out
}

/// Parts as clusters; the edge joining each child to its parent is drawn
/// bold, with its UC boxed and the DC drawn as a double circle.
pub fn structure_dot(g: &Graph, t: &SimpleTreeStructure) -> String {
    let mut links = BTreeSet::new();
    let mut dcs = BTreeSet::new();
    let mut ucs = BTreeSet::new();
    for i in 0..t.len() {
        for c in t.dcs(i) {
            dcs.insert(c.vertex);
            for &j in &c.children {
                if let Some(u) = t.uc(j) {
                    ucs.insert(u);
                    links.insert((c.vertex.min(u), c.vertex.max(u)));
                }
            }
        }
    }
    let mut out = String::from("graph T {\n  compound=true;\n  node [shape=circle];\n");
    for (i, part) in t.parts().iter().enumerate() {
        let root = if t.parent(i).is_none() { " (root)" } else { "" };
        let _ = writeln!(out, "  subgraph cluster_{i} {{\n    label=\"part {i}{root}\";");
        for v in part.iter() {
            let shape = if dcs.contains(&v) {
                ", shape=doublecircle"
            } else if ucs.contains(&v) {
                ", shape=box"
            } else {
                ""
            };
            let _ = writeln!(out, "    v{v} [label=\"{}\"{shape}];", node_name(g, v));
        }
        out.push_str("  }\n");
    }
    for (u, v) in g.edges() {
        let style = if links.contains(&(u, v)) { " [color=blue, penwidth=2.5]" } else { "" };
        let _ = writeln!(out, "  v{u} -- v{v}{style};");
    }
    out.push_str("}\n");
    out
}
