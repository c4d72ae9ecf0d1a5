//! The `minrank` binary end to end: exit codes, output schemas and the
//! subcommand examples.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use minrank::formats::{emit_graph6, parse_graph6};
use minrank::records::{BatchSummary, RecognitionRecord, ResultRecord, StructureFile, TraceRecord, ValidationRecord};
use minrank_core::exact::minrank_bruteforce;
use minrank_core::generate::random_graph;
use minrank_core::{Graph, BRUTE_FORCE_BITS};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use tempfile::TempDir;

const PETERSEN: &str = "IheA@GUAo";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minrank"))
        .args(args)
        .env_remove("MINRANK_CONFIG")
        .env_remove("MINRANK_SAT_SOLVER")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Deserializes into the record type (unknown fields rejected) and checks
/// nothing is lost on the way back.
fn strict<T: DeserializeOwned + Serialize>(text: &str) -> T {
    let raw: serde_json::Value = serde_json::from_str(text).unwrap();
    let typed: T = serde_json::from_value(raw.clone()).unwrap_or_else(|e| panic!("{e}: {text}"));
    assert_eq!(serde_json::to_value(&typed).unwrap(), raw);
    typed
}

fn lines<T: DeserializeOwned + Serialize>(text: &str) -> Vec<T> {
    text.lines().map(strict).collect()
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    }

    fn path(&self, name: &str) -> String {
        self.0.path().join(name).display().to_string()
    }
}

fn read(p: &str) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn brute(g: &Graph) -> usize {
    minrank_bruteforce(g).unwrap().value
}

#[test]
fn house_from_an_edge_list() {
    let f = Files::new();
    let g = f.write("house.txt", "# roof on 1-3\n1 2\n1 3\n1 5\n2 3\n3 4\n4 5\n");
    let out = run(&["minrank", &g]);
    assert_eq!(code(&out), 0);
    let rec: ResultRecord = strict(stdout(&out).trim());
    assert_eq!((rec.value, rec.order, rec.size), (2, 5, 6));
    assert_eq!(rec.method, "dp");
}

#[test]
fn random_order_six_graphs_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut graphs = Vec::new();
    while graphs.len() < 100 {
        let p = rng.gen_range(0.0..1.0);
        let g = random_graph(&mut rng, 6, p);
        if 2 * g.size() <= BRUTE_FORCE_BITS {
            graphs.push(g);
        }
    }
    let text: String = graphs.iter().map(|g| emit_graph6(g).unwrap() + "\n").collect();
    let f = Files::new();
    let out = run(&["minrank", &f.write("six.g6", &text)]);
    assert_eq!(code(&out), 0);
    let recs: Vec<ResultRecord> = lines(&stdout(&out));
    assert_eq!(recs.len(), 100);
    for (g, rec) in graphs.iter().zip(&recs) {
        assert_eq!(rec.value, brute(g), "{}", rec.graph);
        assert!(!rec.inexact);
    }
}

#[test]
fn edgeless_graph_has_min_rank_n() {
    let f = Files::new();
    let out = run(&["minrank", &f.write("e.g6", "E???\n")]);
    assert_eq!(code(&out), 0);
    let rec: ResultRecord = strict(stdout(&out).trim());
    assert_eq!((rec.value, rec.components.len()), (6, 6));
    assert_eq!(rec.method, "components");
}

#[test]
fn exhausted_budget_is_flagged() {
    let f = Files::new();
    let g = f.write("p.g6", &format!("{PETERSEN}\n"));
    let out = run(&["minrank", "--method", "bnb", "--node-limit", "1", &g]);
    assert_eq!(code(&out), 3);
    let rec: ResultRecord = strict(stdout(&out).trim());
    assert!(rec.inexact && rec.lower < rec.value);
    let out = run(&["minrank", "--method", "brute", &g]);
    assert_eq!(code(&out), 3);
    let out = run(&["--registry", "chordal", "minrank", &g]);
    assert_eq!(code(&out), 0);
    assert_eq!(strict::<ResultRecord>(stdout(&out).trim()).value, 5);
}

#[test]
fn usage_errors_exit_two() {
    let f = Files::new();
    assert_eq!(code(&run(&["minrank", "/no/such/file"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["minrank", &f.write("bad.txt", "0 0\n")])), 2);
    assert_eq!(code(&run(&["--registry", "planar", "minrank", &f.write("ok.txt", "0 1\n")])), 2);
    assert_eq!(code(&run(&["--c", "0", "recognize", &f.path("ok.txt")])), 2);
    assert_eq!(code(&run(&["dp", &f.path("ok.txt")])), 2);
    assert_eq!(code(&run(&["cnf", &f.path("ok.txt")])), 2);
    assert_eq!(code(&run(&["minrank", "--method", "cnf", &f.path("ok.txt")])), 2);
}

#[test]
fn seven_cycle_is_not_chordal() {
    let f = Files::new();
    let g = f.write("c7.txt", "0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 0\n");
    let out = run(&["--registry", "chordal", "recognize", &g]);
    assert_eq!(code(&out), 1);
    let rec: RecognitionRecord = strict(stdout(&out).trim());
    assert!(!rec.member && rec.structure.is_none() && rec.failure_detail.is_some());
    assert_eq!(code(&run(&["--registry", "chordal", "minrank", "--method", "dp", &g])), 1);
    assert_eq!(code(&run(&["--registry", "chordal", "dp", "--recognize", &g])), 1);
}

#[test]
fn base_family_member_gives_one_part() {
    let f = Files::new();
    let out = run(&["recognize", "--explain", &f.write("k5.g6", "D~{\n")]);
    assert_eq!(code(&out), 0);
    let rec: RecognitionRecord = strict(stdout(&out).trim());
    assert!(rec.explain.is_some());
    assert_eq!(rec.structure.unwrap().parts.len(), 1);
}

#[test]
fn generated_members_round_trip() {
    let f = Files::new();
    let (g, s) = (f.path("g.txt"), f.path("s.json"));
    assert_eq!(code(&run(&["gen", "--seed", "1", "--k", "5", "--c", "2", "--graph", &g, "--structure", &s])), 0);
    let out = run(&["validate", &g, "--structure", &s]);
    assert_eq!(code(&out), 0);
    assert!(strict::<ValidationRecord>(stdout(&out).trim()).valid);
    let generated: StructureFile = strict(&read(&s));
    assert_eq!(generated.parts.len(), 5);

    let found = f.path("found.json");
    let out = run(&["recognize", &g, "--structure", &found, "--dot", &f.path("t.dot")]);
    assert_eq!(code(&out), 0);
    strict::<RecognitionRecord>(stdout(&out).trim());
    strict::<StructureFile>(&read(&found));
    assert!(read(&f.path("t.dot")).starts_with("graph"));
    let out = run(&["validate", &g, "--structure", &found]);
    assert_eq!(code(&out), 0);

    let trace = f.path("trace.json");
    let out = run(&["dp", &g, "--structure", &found, "--trace", &trace]);
    assert_eq!(code(&out), 0);
    let dp: ResultRecord = strict(stdout(&out).trim());
    let tr: TraceRecord = strict(&read(&trace));
    assert_eq!(tr.nodes.len(), strict::<StructureFile>(&read(&found)).parts.len());
    let out = run(&["minrank", "--method", "bnb", &g]);
    assert_eq!(strict::<ResultRecord>(stdout(&out).trim()).value, dp.value);
}

#[test]
fn broken_structure_fails_validation() {
    let f = Files::new();
    let g = f.write("p4.txt", "0 1\n1 2\n2 3\n");
    // {0,2} does not induce a connected part and the two parts share two edges.
    let s = f.write("s.json", r#"{"parts": [[0, 2], [1, 3]], "parent": [-1, 0]}"#);
    let out = run(&["--registry", "bounded:4", "validate", &g, "--structure", &s]);
    assert_eq!(code(&out), 1);
    let rep: ValidationRecord = strict(stdout(&out).trim());
    assert!(!rep.valid && !rep.violations.is_empty());
    assert_eq!(code(&run(&["--registry", "bounded:4", "dp", &g, "--structure", &s])), 2);
    let typo = f.write("t.json", r#"{"parts": [[0, 1, 2, 3]], "parent": [-1], "colour": 1}"#);
    assert_eq!(code(&run(&["validate", &g, "--structure", &typo])), 2);
}

#[test]
fn generation_is_reproducible() {
    let a = run(&["gen", "--seed", "11", "--k", "6"]);
    let b = run(&["gen", "--seed", "11", "--k", "6"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let f = Files::new();
    for name in ["s1.json", "s2.json"] {
        run(&["gen", "--seed", "11", "--k", "6", "--graph", &f.path("g"), "--structure", &f.path(name)]);
    }
    assert_eq!(read(&f.path("s1.json")), read(&f.path("s2.json")));

    let mut seen = HashSet::new();
    for seed in 0..50 {
        let out = run(&["gen", "--seed", &seed.to_string(), "--format", "graph6"]);
        assert_eq!(code(&out), 0);
        seen.insert(out.stdout);
    }
    assert_eq!(seen.len(), 50);
}

#[test]
fn batch_reports_histogram_and_skips() {
    let f = Files::new();
    let corpus = read(fixture("order4.g6").to_str().unwrap());
    let bad = f.write("bad.g6", &format!("{corpus}not-a-graph\n\nC~\n"));
    let (csv, json) = (f.path("h.csv"), f.path("h.json"));
    let out = run(&["--jobs", "2", "batch", &bad, "--csv", &csv, "--json", &json]);
    assert_eq!(code(&out), 0);
    let summary: BatchSummary = strict(&stdout(&out));
    assert_eq!(summary, strict::<BatchSummary>(&read(&json)));
    assert_eq!(summary.skipped.len(), 1);
    assert_eq!(summary.skipped[0].line, 12);
    assert_eq!(summary.processed, 12);
    assert_eq!(summary.histogram.values().sum::<usize>(), 12);
    let csv = read(&csv);
    assert!(csv.starts_with("minrank,count\n"));
    assert_eq!(csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap()).sum::<usize>(), 12);
}

#[test]
fn batch_output_keeps_input_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let graphs: Vec<Graph> = (0..60)
        .map(|_| {
            let n = rng.gen_range(1..=5);
            random_graph(&mut rng, n, 0.5)
        })
        .collect();
    let f = Files::new();
    let corpus = f.write("c.g6", &graphs.iter().map(|g| emit_graph6(g).unwrap() + "\n").collect::<String>());
    let out_path = f.path("r.jsonl");
    assert_eq!(code(&run(&["--jobs", "4", "batch", &corpus, "--out", &out_path])), 0);
    let recs: Vec<ResultRecord> = lines(&read(&out_path));
    for (i, (g, rec)) in graphs.iter().zip(&recs).enumerate() {
        assert_eq!(rec.graph, format!("line {}", i + 1));
        assert_eq!(rec.value, brute(g));
    }
}

#[test]
fn components_flag_recognizes_each_piece() {
    let f = Files::new();
    let g = f.write("two.txt", "n=8\n0 1\n1 2\n2 0\n3 4\n4 5\n5 6\n6 7\n7 3\n");
    assert_eq!(code(&run(&["recognize", &g])), 2);
    let out = run(&["--registry", "chordal", "recognize", "--components", &g]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["member"], false);
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    let first: RecognitionRecord = strict(&comps[0]["outcome"].to_string());
    assert!(first.member);
    let out = run(&["recognize", "--components", &g]);
    assert_eq!(code(&out), 0);
}

#[test]
fn cnf_export_and_config_file() {
    let f = Files::new();
    let g = f.write("c5.txt", "0 1\n1 2\n2 3\n3 4\n4 0\n");
    let out = run(&["cnf", &g, "--k", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let header = text.lines().find(|l| l.starts_with("p cnf")).unwrap();
    let clauses: usize = header.split_whitespace().nth(3).unwrap().parse().unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with(" 0")).count(), clauses);

    let cfg = f.write("cfg.toml", "registry = \"chordal\"\nc = 1\n");
    let out = run(&["--config", &cfg, "recognize", &g]);
    assert_eq!(code(&out), 1);
    assert_eq!(strict::<RecognitionRecord>(stdout(&out).trim()).registry, "chordal");
    let out = run(&["--config", &cfg, "--registry", "bounded:5", "recognize", &g]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&run(&["--config", &f.write("bad.toml", "colour = 1\n"), "recognize", &g])), 2);
}

#[test]
fn dot_drawing_marks_bridges() {
    let f = Files::new();
    let g = f.write("g.txt", "0 1\n1 2\n2 0\n2 3\n");
    let dot = f.path("g.dot");
    assert_eq!(code(&run(&["minrank", &g, "--dot", &dot])), 0);
    let text = read(&dot);
    assert_eq!(text.matches("color=red").count(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn graph6_round_trip(n in 0usize..70, p in 0.0f64..1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, p);
        let text = emit_graph6(&g).unwrap();
        let back = parse_graph6(&text).unwrap();
        prop_assert_eq!(back.order(), g.order());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        prop_assert_eq!(emit_graph6(&back).unwrap(), text);
    }
}
