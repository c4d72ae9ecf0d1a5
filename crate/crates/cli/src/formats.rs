//! Text formats: graph6, edge lists and 0/1 matrix rows.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use minrank_core::{BitMatrix, Graph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("graph6: empty input")]
    Empty,
    #[error("graph6: byte {0:#04x} outside the printable range 63..=126")]
    BadByte(u8),
    #[error("graph6: malformed order header")]
    BadHeader,
    #[error("graph6: expected {expected} data bytes for order {n}, found {found}")]
    BadLength { n: usize, expected: usize, found: usize },
    #[error("graph6: padding bits after the last edge are not zero")]
    Padding,
    #[error("graph6: order {0} exceeds 258047")]
    TooLarge(usize),
    #[error("edge list line {line}: {msg}")]
    EdgeList { line: usize, msg: String },
    #[error("matrix: {0}")]
    Matrix(String),
}

const LONG_FORM: u8 = 126;

fn graph6_order(bytes: &[u8]) -> Result<(usize, &[u8]), FormatError> {
    match bytes {
        [] => Err(FormatError::Empty),
        [LONG_FORM, LONG_FORM, ..] => Err(FormatError::TooLarge(usize::MAX)),
        [LONG_FORM, rest @ ..] => {
            if rest.len() < 3 {
                return Err(FormatError::BadHeader);
            }
            let n = rest[..3].iter().fold(0usize, |acc, &b| (acc << 6) | usize::from(b - 63));
            if n < 63 {
                return Err(FormatError::BadHeader);
            }
            Ok((n, &rest[3..]))
        }
        [b, rest @ ..] => Ok((usize::from(b - 63), rest)),
    }
}

/// Parses one graph6 line (an optional `>>graph6<<` prefix is accepted).
pub fn parse_graph6(text: &str) -> Result<Graph, FormatError> {
    let text = text.trim();
    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
    let bytes = text.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(FormatError::BadByte(b));
    }
    let (n, data) = graph6_order(bytes)?;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if data.len() != expected {
        return Err(FormatError::BadLength { n, expected, found: data.len() });
    }
    let bit = |k: usize| (data[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    if (bits..expected * 6).any(bit) {
        return Err(FormatError::Padding);
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::from_edges(n, edges).expect("graph6 edges are simple"))
}

pub fn emit_graph6(g: &Graph) -> Result<String, FormatError> {
    let n = g.order();
    let mut out = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(LONG_FORM);
        out.extend([12, 6, 0].map(|s| ((n >> s) & 63) as u8 + 63));
    } else {
        return Err(FormatError::TooLarge(n));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 is ASCII"))
}

/// Parses the edge-list format: one `u v` pair per line, `#` comments and
/// an optional `n=<count>` header.
///
/// With a header the tokens are vertex ids `0..count`. Without one,
/// integer tokens are ordered numerically and other tokens by first
/// appearance; the tokens become vertex labels unless they are already
/// exactly `0..n`.
pub fn parse_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut order: Option<usize> = None;
    let mut pairs: Vec<(usize, &str, &str)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(count) = line.strip_prefix("n=").or_else(|| line.strip_prefix("n =")) {
            if order.is_some() || !pairs.is_empty() {
                return Err(FormatError::EdgeList { line: line_no, msg: "header must come first".into() });
            }
            let count = count.trim().parse().map_err(|_| FormatError::EdgeList {
                line: line_no,
                msg: format!("bad vertex count `{}`", count.trim()),
            })?;
            order = Some(count);
            continue;
        }
        let mut tokens = line.split_whitespace();
        match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => pairs.push((line_no, a, b)),
            _ => return Err(FormatError::EdgeList { line: line_no, msg: format!("expected `u v`, found `{line}`") }),
        }
    }

    let err = |line, msg: String| FormatError::EdgeList { line, msg };
    let (n, ids, labels): (usize, HashMap<&str, usize>, Option<Vec<String>>) = match order {
        Some(n) => {
            let mut ids = HashMap::new();
            for &(line, a, b) in &pairs {
                for tok in [a, b] {
                    match tok.parse::<usize>() {
                        Ok(v) if v < n => {
                            ids.insert(tok, v);
                        }
                        _ => return Err(err(line, format!("`{tok}` is not a vertex id below {n}"))),
                    }
                }
            }
            (n, ids, None)
        }
        None => {
            let tokens: Vec<&str> = pairs.iter().flat_map(|&(_, a, b)| [a, b]).collect();
            let numeric: Option<BTreeSet<(u64, &str)>> =
                tokens.iter().map(|t| t.parse::<u64>().ok().map(|v| (v, *t))).collect();
            let ordered: Vec<&str> = match numeric {
                Some(set) => {
                    let mut seen = BTreeSet::new();
                    for &(v, tok) in &set {
                        if !seen.insert(v) {
                            let line = pairs.iter().find(|p| p.1 == tok || p.2 == tok).map_or(0, |p| p.0);
                            return Err(err(line, format!("`{tok}` names an existing vertex")));
                        }
                    }
                    set.into_iter().map(|(_, t)| t).collect()
                }
                None => {
                    let mut seen = Vec::new();
                    for t in tokens {
                        if !seen.contains(&t) {
                            seen.push(t);
                        }
                    }
                    seen
                }
            };
            let dense = ordered.iter().enumerate().all(|(i, t)| *t == i.to_string());
            let ids = ordered.iter().enumerate().map(|(i, t)| (*t, i)).collect();
            let labels = (!dense).then(|| ordered.iter().map(|t| t.to_string()).collect());
            (ordered.len(), ids, labels)
        }
    };

    let mut edges = Vec::with_capacity(pairs.len());
    let mut seen = BTreeSet::new();
    for &(line, a, b) in &pairs {
        let (u, v) = (ids[a], ids[b]);
        if u == v {
            return Err(err(line, format!("self-loop at `{a}`")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(err(line, format!("edge `{a} {b}` listed twice")));
        }
        edges.push((u, v));
    }
    let g = Graph::from_edges(n, edges).expect("edges checked above");
    Ok(match labels {
        Some(l) => g.with_labels(l).expect("one label per vertex"),
        None => g,
    })
}

/// Writes an edge list. Labelled graphs without isolated vertices are
/// written with their labels; otherwise an `n=` header and dense ids.
pub fn emit_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let isolated = (0..g.order()).any(|v| g.degree(v) == 0);
    match g.labels() {
        Some(labels) if !isolated => {
            for (u, v) in g.edges() {
                let _ = writeln!(out, "{} {}", labels[u], labels[v]);
            }
        }
        _ => {
            let _ = writeln!(out, "n={}", g.order());
            for (u, v) in g.edges() {
                let _ = writeln!(out, "{u} {v}");
            }
        }
    }
    out
}

pub fn matrix_rows(m: &BitMatrix) -> Vec<String> {
    m.to_row_strings()
}

pub fn matrix_from_rows<S: AsRef<str>>(rows: &[S]) -> Result<BitMatrix, FormatError> {
    BitMatrix::from_row_strings(rows).map_err(|e| FormatError::Matrix(e.to_string()))
}

/// Which parser a graph file needs: a single whitespace-free token on the
/// first content line means graph6.
pub fn looks_like_graph6(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| !l.contains(char::is_whitespace) && !l.starts_with("n="))
}
