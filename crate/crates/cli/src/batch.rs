//! Corpus runs: one graph6 graph per line, solved in parallel, reported in
//! input order with a min-rank histogram.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use minrank_core::Graph;

use crate::formats::parse_graph6;
use crate::records::{BatchSummary, ResultRecord, SkippedRecord};
use crate::solve::{solve, to_record, SolveOptions};

/// Parsed corpus lines (1-based line numbers); blank lines and `#`
/// comments are ignored, malformed lines are reported.
pub fn parse_corpus(text: &str) -> (Vec<(usize, Graph)>, Vec<SkippedRecord>) {
    let mut graphs = Vec::new();
    let mut skipped = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_graph6(line) {
            Ok(g) => graphs.push((i + 1, g)),
            Err(e) => skipped.push(SkippedRecord { line: i + 1, error: e.to_string() }),
        }
    }
    (graphs, skipped)
}

#[derive(Debug, Clone)]
pub struct BatchReport {
    pub records: Vec<ResultRecord>,
    pub summary: BatchSummary,
    pub histogram: BTreeMap<usize, usize>,
}

/// Solves every graph, on `jobs` threads when given. Graphs that fail to
/// solve are moved to the skipped list.
pub fn run_batch(text: &str, opts: &SolveOptions<'_>, jobs: Option<usize>) -> anyhow::Result<BatchReport> {
    let (graphs, mut skipped) = parse_corpus(text);
    let work = || -> Vec<(usize, Result<ResultRecord, String>)> {
        graphs
            .par_iter()
            .map(|(line, g)| {
                let out = solve(g, opts).map(|s| to_record(format!("line {line}"), g, &s)).map_err(|e| e.to_string());
                (*line, out)
            })
            .collect()
    };
    let results = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new().num_threads(j).build()?.install(work),
        None => work(),
    };

    let mut records = Vec::with_capacity(results.len());
    let mut histogram = BTreeMap::new();
    for (line, r) in results {
        match r {
            Ok(rec) => {
                *histogram.entry(rec.value).or_insert(0) += 1;
                records.push(rec);
            }
            Err(error) => skipped.push(SkippedRecord { line, error }),
        }
    }
    skipped.sort_by_key(|s| s.line);
    let summary = BatchSummary {
        processed: records.len(),
        inexact: records.iter().filter(|r| r.inexact).count(),
        skipped,
        histogram: histogram.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    };
    Ok(BatchReport { records, summary, histogram })
}

/// `minrank,count` rows in ascending min-rank order.
pub fn histogram_csv(histogram: &BTreeMap<usize, usize>) -> String {
    let mut out = String::from("minrank,count\n");
    for (k, v) in histogram {
        let _ = writeln!(out, "{k},{v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::MethodChoice;
    use minrank_core::FamilyRegistry;

    #[test]
    fn order_and_skips() {
        let reg = FamilyRegistry::default();
        let opts = SolveOptions { method: MethodChoice::Auto, registry: &reg, c: 2, node_limit: None, sat: None };
        let text = "D~{\n\nnot graph6\nD??\n# note\nC~\n";
        let report = run_batch(text, &opts, Some(3)).unwrap();
        let values: Vec<usize> = report.records.iter().map(|r| r.value).collect();
        assert_eq!(values, vec![1, 5, 1]);
        assert_eq!(report.records[1].graph, "line 4");
        assert_eq!(report.summary.skipped.len(), 1);
        assert_eq!(report.summary.skipped[0].line, 3);
        assert_eq!(histogram_csv(&report.histogram), "minrank,count\n1,2\n5,1\n");
        assert_eq!(report.histogram.values().sum::<usize>(), report.summary.processed);
    }
}
