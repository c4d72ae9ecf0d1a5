//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines show up in a plain `cargo test`.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use minrank::config::Config;
use minrank::records::ResultRecord;
use minrank::sat::{minrank_cnf, SatSolver};
use minrank_core::dp::{combine_shared_vertex, dp_minrank, star_merge};
use minrank_core::exact::{minrank_bnb, minrank_bruteforce, minrank_components};
use minrank_core::generate::{generate_member, random_connected_graph, random_graph, GenProfile};
use minrank_core::recognize::recognize;
use minrank_core::structure::validate_structure;
use minrank_core::{BitMatrix, FamilyRegistry, Graph, SimpleTreeStructure, VertexSet, BRUTE_FORCE_BITS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<Option<String>, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn brute(g: &Graph) -> usize {
    minrank_bruteforce(g).unwrap().value
}

fn in_budget(g: &Graph) -> bool {
    2 * g.size() <= BRUTE_FORCE_BITS
}

fn minus(g: &Graph, v: usize) -> Graph {
    g.remove_vertices(&VertexSet::new(vec![v]).unwrap()).unwrap()
}

// Vertices 1..5 become 0..4.
fn house() -> Graph {
    Graph::from_edges(5, [(0, 1), (0, 2), (0, 4), (1, 2), (2, 3), (3, 4)]).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_minrank"))
}

fn run_json(cmd: &mut Command) -> Result<(i32, String), String> {
    let out = cmd.output().map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn member(seed: u64, max_n: usize) -> (Graph, SimpleTreeStructure) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profile = GenProfile::default().with_parts(2, 4);
    loop {
        let k = rng.gen_range(1..=5);
        let (g, t) = generate_member(&mut rng, k, 2, &profile);
        if g.order() <= max_n {
            return (g, t);
        }
    }
}

fn house_by_every_method() -> Outcome {
    let g = house();
    ensure!(brute(&g) == 2, "brute force");
    ensure!(minrank_bnb(&g, None).value == 2, "bnb");
    let reg = FamilyRegistry::default();
    let t = recognize(&g, 2, &reg).map_err(|e| e.to_string())?.structure.ok_or("not recognized")?;
    ensure!(dp_minrank(&g, &t, &reg).unwrap().value == 2, "dp");

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("house.txt");
    std::fs::write(&path, "1 2\n1 3\n1 5\n2 3\n3 4\n4 5\n").unwrap();
    for method in ["brute", "bnb", "dp", "auto"] {
        let (code, out) = run_json(bin().args(["minrank", "--method", method]).arg(&path))?;
        ensure!(code == 0, "{method}: exit {code}");
        let rec: ResultRecord = serde_json::from_str(out.trim()).map_err(|e| e.to_string())?;
        ensure!(rec.value == 2 && !rec.inexact, "{method}: value {}", rec.value);
        if let Some(rows) = rec.witness {
            let w = BitMatrix::from_row_strings(&rows).map_err(|e| e.to_string())?;
            ensure!(w.fits(&g).unwrap() && w.rank() == 2, "{method}: witness");
        } else {
            ensure!(method == "dp" || method == "auto", "{method}: no witness");
        }
    }
    Ok(None)
}

fn house_fitting_matrices() -> Outcome {
    let g = house();
    let m1 = BitMatrix::from_row_strings(&["11000", "11000", "00110", "00110", "10001"]).unwrap();
    let m2 = BitMatrix::from_row_strings(&["11100", "11100", "11100", "00011", "00011"]).unwrap();
    ensure!(m1.fits(&g).unwrap() && m1.rank() == 3, "M1");
    ensure!(m2.fits(&g).unwrap() && m2.rank() == 2, "M2");
    Ok(None)
}

fn bnb_equals_brute() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut i = 0;
    while i < 500 {
        let n = rng.gen_range(1..=6);
        let p = rng.gen_range(0.0..1.0);
        let g = random_graph(&mut rng, n, p);
        if !in_budget(&g) {
            continue;
        }
        i += 1;
        let b = minrank_bnb(&g, None);
        ensure!(b.exact && b.value == brute(&g), "graph {i}");
        ensure!(b.witness_is_valid(&g), "graph {i}: witness");
    }
    Ok(None)
}

/// `g1` and `g2` with `a` in `g1` identified with `b` in `g2`.
fn glue(g1: &Graph, a: usize, g2: &Graph, b: usize) -> Graph {
    let n1 = g1.order();
    let id = |x: usize| {
        if x == b {
            a
        } else if x < b {
            n1 + x
        } else {
            n1 + x - 1
        }
    };
    let edges = g1.edges().chain(g2.edges().map(|(x, y)| (id(x), id(y))));
    Graph::from_edges(n1 + g2.order() - 1, edges.collect::<Vec<_>>()).unwrap()
}

fn gluing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut checked = 0;
    while checked < 100 {
        let (n1, n2) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let (p1, p2) = (rng.gen_range(0.2..0.9), rng.gen_range(0.2..0.9));
        let g1 = random_connected_graph(&mut rng, n1, p1);
        let g2 = random_connected_graph(&mut rng, n2, p2);
        let (a, b) = (rng.gen_range(0..n1), rng.gen_range(0..n2));
        let g = glue(&g1, a, &g2, b);
        if !in_budget(&g) {
            continue;
        }
        checked += 1;
        let got = combine_shared_vertex(brute(&g1), brute(&minus(&g1, a)), brute(&g2), brute(&minus(&g2, b)))
            .map_err(|e| e.to_string())?;
        ensure!(got == brute(&g), "pair {checked}: {got} vs {}", brute(&g));
    }
    Ok(None)
}

fn stars() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut checked = 0;
    let mut branches = [0usize; 2];
    while checked < 100 {
        let count = rng.gen_range(1..=3);
        let mut g = Graph::empty(1);
        let mut kids = Vec::new();
        let mut bridges = Vec::new();
        for _ in 0..count {
            let n = rng.gen_range(1..=4);
            let p = rng.gen_range(0.2..0.9);
            let child = random_connected_graph(&mut rng, n, p);
            let uc = rng.gen_range(0..n);
            bridges.push((0, g.order() + uc));
            kids.push((brute(&child), brute(&minus(&child, uc))));
            g = g.disjoint_union(&child);
        }
        let k = Graph::from_edges(g.order(), g.edges().chain(bridges).collect::<Vec<_>>()).unwrap();
        if !in_budget(&k) {
            continue;
        }
        checked += 1;
        let (full, less) = star_merge(&kids).map_err(|e| e.to_string())?;
        branches[usize::from(full > less)] += 1;
        ensure!(full == brute(&k) && less == brute(&minus(&k, 0)), "star {checked}");
    }
    ensure!(branches[0] > 0 && branches[1] > 0, "branches {branches:?}");
    Ok(Some(format!("{} / {} per branch", branches[0], branches[1])))
}

fn dp_end_to_end() -> Outcome {
    let reg = FamilyRegistry::default();
    for seed in 0..200 {
        let (g, t) = member(seed, 14);
        let exact = minrank_bnb(&g, None);
        ensure!(exact.exact, "seed {seed}: bnb inexact");
        let dp = dp_minrank(&g, &t, &reg).map_err(|e| e.to_string())?;
        ensure!(dp.value == exact.value, "seed {seed}: dp {} vs {}", dp.value, exact.value);
    }
    Ok(None)
}

fn completeness() -> Outcome {
    let reg = FamilyRegistry::default();
    for seed in 1000..1300 {
        let (g, _) = member(seed, 14);
        let out = recognize(&g, 2, &reg).map_err(|e| e.to_string())?;
        let t = out.structure.ok_or_else(|| format!("seed {seed}: rejected"))?;
        let report = validate_structure(&g, &t, &reg);
        ensure!(report.valid && report.mdc <= 2, "seed {seed}: {:?}", report.violations);
        ensure!(dp_minrank(&g, &t, &reg).unwrap().value == minrank_bnb(&g, None).value, "seed {seed}: value");
    }
    Ok(None)
}

fn soundness() -> Outcome {
    let regs = [
        FamilyRegistry::default(),
        FamilyRegistry::parse("chordal").unwrap(),
        FamilyRegistry::parse("bounded:3").unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut accepted = 0;
    for i in 0..500 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.0..0.5);
        let g = random_connected_graph(&mut rng, n, p);
        let c = rng.gen_range(1..=3);
        let reg = &regs[i % regs.len()];
        let out = recognize(&g, c, reg).map_err(|e| e.to_string())?;
        if let Some(t) = out.structure {
            accepted += 1;
            let report = validate_structure(&g, &t, reg);
            ensure!(report.valid && report.mdc <= c, "graph {i}: {:?}", report.violations);
        }
    }
    Ok(Some(format!("{accepted} accepted")))
}

fn deletion_range() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut checked = 0;
    while checked < 200 {
        let n = rng.gen_range(1..=7);
        let p = rng.gen_range(0.1..0.8);
        let g = random_graph(&mut rng, n, p);
        if !in_budget(&g) {
            continue;
        }
        checked += 1;
        let v = rng.gen_range(0..n);
        let (full, less) = (brute(&g), brute(&minus(&g, v)));
        ensure!(less <= full && full <= less + 1, "pair {checked}: {full} vs {less}");
    }
    Ok(None)
}

fn additivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let mut checked = 0;
    while checked < 100 {
        let parts = rng.gen_range(2..=3);
        let mut g = Graph::empty(0);
        for _ in 0..parts {
            let n = rng.gen_range(1..=4);
            let p = rng.gen_range(0.2..0.9);
            g = g.disjoint_union(&random_connected_graph(&mut rng, n, p));
        }
        if !in_budget(&g) {
            continue;
        }
        checked += 1;
        let split = minrank_components(&g, minrank_bruteforce).map_err(|e| e.to_string())?;
        ensure!(split.value == brute(&g), "graph {checked}");
    }
    Ok(None)
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn order_four_corpus() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (csv, records) = (dir.path().join("h.csv"), dir.path().join("r.jsonl"));
    let (code, _) =
        run_json(bin().arg("batch").arg(fixture("order4.g6")).arg("--csv").arg(&csv).arg("--out").arg(&records))?;
    ensure!(code == 0, "exit {code}");
    let csv = std::fs::read_to_string(csv).unwrap();
    let total: usize = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap()).sum();
    ensure!(total == 11, "histogram sums to {total}");
    let corpus = std::fs::read_to_string(fixture("order4.g6")).unwrap();
    let recs: Vec<ResultRecord> =
        std::fs::read_to_string(records).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    ensure!(recs.len() == 11, "{} records", recs.len());
    for (line, rec) in corpus.lines().zip(&recs) {
        let g = minrank::formats::parse_graph6(line).unwrap();
        ensure!(rec.value == brute(&g), "{line}: {} vs {}", rec.value, brute(&g));
    }
    Ok(Some(csv.lines().skip(1).collect::<Vec<_>>().join(" ")))
}

fn configured_solver() -> Option<SatSolver> {
    let cfg = Config::discover(None).ok()?;
    let program =
        std::env::var_os("MINRANK_SAT_SOLVER").filter(|p| !p.is_empty()).map(PathBuf::from).or(cfg.sat_solver)?;
    Some(SatSolver { program, args: cfg.sat_args })
}

fn cnf_mode() -> Outcome {
    let Some(sat) = configured_solver() else {
        return Ok(Some("SKIP".into()));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(112);
    let mut checked = 0;
    while checked < 50 {
        let n = rng.gen_range(2..=7);
        let p = rng.gen_range(0.2..0.8);
        let g = random_graph(&mut rng, n, p);
        if !in_budget(&g) {
            continue;
        }
        checked += 1;
        let r = minrank_cnf(&g, &sat, None).map_err(|e| e.to_string())?;
        ensure!(r.exact && r.value == brute(&g), "graph {checked}: {} vs {}", r.value, brute(&g));
        ensure!(r.witness_is_valid(&g), "graph {checked}: witness");
    }
    Ok(Some(format!("solver {}", sat.program.display())))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("house graph has min-rank 2 by every method", 1, house_by_every_method),
        ("two house fitting matrices have ranks 3 and 2", 1, house_fitting_matrices),
        ("bnb equals brute force on 500 graphs", 120, bnb_equals_brute),
        ("one-vertex gluing on 100 pairs", 120, gluing),
        ("star merge on 100 stars, both branches", 120, stars),
        ("dp equals bnb on 200 generated members", 300, dp_end_to_end),
        ("recognizer completeness on 300 members", 300, completeness),
        ("recognizer soundness on 500 graphs", 300, soundness),
        ("vertex deletion range on 200 graphs", 120, deletion_range),
        ("component additivity on 100 graphs", 120, additivity),
        ("order-4 corpus histogram", 1, order_four_corpus),
        ("cnf binary search equals brute force", 300, cnf_mode),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let over = took > Duration::from_secs(*limit);
        let (status, note) = match outcome {
            Ok(Some(n)) if n == "SKIP" => ("SKIP", "no SAT solver configured".to_string()),
            Ok(_) if over => ("FAIL", format!("over the {limit} s limit")),
            Ok(note) => ("PASS", note.unwrap_or_default()),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{status} {:>2} {name} ({:.2?}){}",
            i + 1,
            took,
            if note.is_empty() { String::new() } else { format!(": {note}") }
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
