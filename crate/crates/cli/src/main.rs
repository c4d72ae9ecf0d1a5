use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use minrank::batch::{histogram_csv, run_batch};
use minrank::config::Config;
use minrank::dot::{graph_dot, structure_dot};
use minrank::formats::{emit_edge_list, emit_graph6};
use minrank::records::{RecognitionRecord, StructureFile, TraceRecord, ValidationRecord};
use minrank::sat::SatSolver;
use minrank::solve::{solve, to_record, MethodChoice, SolveError, SolveOptions, Solved};
use minrank::{read_graph, read_graphs};
use minrank_core::dp::{dp_minrank_traced, DpOptions};
use minrank_core::exact::sandwich_bounds;
use minrank_core::generate::{generate_member, GenProfile};
use minrank_core::recognize::recognize;
use minrank_core::structure::validate_structure;
use minrank_core::{cnf::emit_cnf, FamilyRegistry, Graph, SimpleTreeStructure};

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const USAGE: u8 = 2;
const INEXACT: u8 = 3;

#[derive(Parser)]
#[command(name = "minrank", version, about = "Binary min-rank of graphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// TOML configuration file.
    #[arg(long, global = true, env = "MINRANK_CONFIG")]
    config: Option<PathBuf>,
    /// Base families, e.g. `chordal,bounded:10`.
    #[arg(long, global = true)]
    registry: Option<String>,
    /// Maximum number of downward connectors per part.
    #[arg(long = "c", global = true)]
    c: Option<usize>,
    /// Worker threads for batch runs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Executable reading DIMACS on stdin.
    #[arg(long, global = true, env = "MINRANK_SAT_SOLVER")]
    sat_solver: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Min-rank of every graph in a file, one JSON record per line.
    Minrank(MinrankArgs),
    /// Decide membership and print a structure with few connectors.
    Recognize(RecognizeArgs),
    /// Min-rank from a given or recognized structure.
    Dp(DpArgs),
    /// Min-rank histogram over a graph6 corpus.
    Batch(BatchArgs),
    /// Random graph with a known structure.
    Gen(GenArgs),
    /// DIMACS encoding of "min-rank <= k".
    Cnf(CnfArgs),
    /// Check a structure file against a graph.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct MinrankArgs {
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    method: MethodChoice,
    /// Branch-and-bound node budget per component.
    #[arg(long)]
    node_limit: Option<u64>,
    /// Structure file; implies the DP on the whole graph.
    #[arg(long)]
    structure: Option<PathBuf>,
    /// Write a Graphviz drawing with bridges highlighted.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct RecognizeArgs {
    graph: PathBuf,
    /// Where to write the structure when the graph is a member.
    #[arg(long)]
    structure: Option<PathBuf>,
    /// Include the split and merge trace.
    #[arg(long)]
    explain: bool,
    /// Recognize each connected component separately.
    #[arg(long)]
    components: bool,
    /// Write a Graphviz drawing of the structure.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct DpArgs {
    graph: PathBuf,
    #[arg(long, required_unless_present = "recognize")]
    structure: Option<PathBuf>,
    /// Find the structure with the recognizer instead of reading one.
    #[arg(long, conflicts_with = "structure")]
    recognize: bool,
    /// Write the per-part tables as JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Largest subset lattice allowed at one part.
    #[arg(long, default_value_t = DpOptions::default().max_subsets)]
    max_subsets: usize,
}

#[derive(Args)]
struct BatchArgs {
    corpus: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    method: MethodChoice,
    #[arg(long)]
    node_limit: Option<u64>,
    /// Per-graph JSON records.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Histogram as `minrank,count` CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Histogram and summary as JSON (also printed to stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Edgelist,
    Graph6,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of parts.
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    min_part: usize,
    #[arg(long, default_value_t = 6)]
    max_part: usize,
    /// Probability that a part is a general graph rather than chordal.
    #[arg(long, default_value_t = 0.5)]
    general_prob: f64,
    /// Largest order of a general part.
    #[arg(long, default_value_t = 10)]
    bounded_cap: usize,
    #[arg(long, value_enum, default_value_t = GraphFormat::Edgelist)]
    format: GraphFormat,
    /// Graph output (stdout when absent).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Structure output.
    #[arg(long)]
    structure: Option<PathBuf>,
}

#[derive(Args)]
struct CnfArgs {
    graph: PathBuf,
    /// Target rank.
    #[arg(long)]
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    graph: PathBuf,
    #[arg(long)]
    structure: PathBuf,
    #[arg(long)]
    dot: Option<PathBuf>,
}

struct Settings {
    registry: FamilyRegistry,
    c: usize,
    jobs: Option<usize>,
    node_limit: Option<u64>,
    sat: Option<SatSolver>,
}

impl Settings {
    fn new(global: &Global) -> anyhow::Result<Self> {
        let cfg = Config::discover(global.config.as_deref())?;
        let spec = global.registry.clone().or(cfg.registry).unwrap_or_else(|| FamilyRegistry::default().spec());
        let registry = FamilyRegistry::parse(&spec).with_context(|| format!("registry `{spec}`"))?;
        let c = global.c.or(cfg.c).unwrap_or(2);
        if c == 0 {
            bail!("--c must be at least 1");
        }
        let sat = global
            .sat_solver
            .clone()
            .or(cfg.sat_solver)
            .map(|program| SatSolver { program, args: cfg.sat_args.clone() });
        Ok(Settings { registry, c, jobs: global.jobs.or(cfg.jobs), node_limit: cfg.node_limit, sat })
    }

    fn options(&self, method: MethodChoice, node_limit: Option<u64>) -> SolveOptions<'_> {
        SolveOptions {
            method,
            registry: &self.registry,
            c: self.c,
            node_limit: node_limit.or(self.node_limit),
            sat: self.sat.as_ref(),
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        _ => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string(value)? + "\n")
}

fn read_structure(path: &Path, g: &Graph) -> anyhow::Result<SimpleTreeStructure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: StructureFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.to_structure(g).with_context(|| format!("structure in {}", path.display()))
}

fn structure_json(t: &SimpleTreeStructure) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(&StructureFile::from_structure(t))? + "\n")
}

fn cmd_minrank(s: &Settings, a: &MinrankArgs) -> anyhow::Result<u8> {
    let graphs = read_graphs(&a.graph)?;
    if let Some(dot) = &a.dot {
        let [(_, g)] = graphs.as_slice() else { bail!("--dot needs a file with one graph") };
        write_out(Some(dot), &graph_dot(g, true))?;
    }
    let opts = s.options(a.method, a.node_limit);
    let mut code = OK;
    let mut out = String::new();
    for (name, g) in &graphs {
        let solved = match &a.structure {
            Some(path) => {
                if !matches!(a.method, MethodChoice::Auto | MethodChoice::Dp) {
                    bail!("--structure only works with --method dp");
                }
                let t = read_structure(path, g)?;
                let (result, _) = dp_minrank_traced(g, &t, &s.registry, DpOptions::default())?;
                Solved {
                    bounds: sandwich_bounds(g),
                    components: vec![(t.subtree_vertices(t.root().unwrap_or(0))?, result.clone())],
                    result,
                }
            }
            None => match solve(g, &opts) {
                Ok(solved) => solved,
                Err(SolveError::NotMember(m)) => {
                    eprintln!("{name}: not in the family: {m}");
                    code = code.max(NEGATIVE);
                    continue;
                }
                Err(SolveError::Budget(m)) => {
                    eprintln!("{name}: budget exceeded: {m}");
                    code = INEXACT;
                    continue;
                }
                Err(SolveError::Usage(m)) => bail!(m),
                Err(SolveError::Other(e)) => return Err(e),
            },
        };
        if !solved.result.exact {
            code = INEXACT;
        }
        out.push_str(&json_line(&to_record(name.clone(), g, &solved))?);
    }
    write_out(None, &out)?;
    Ok(code)
}

fn cmd_recognize(s: &Settings, a: &RecognizeArgs) -> anyhow::Result<u8> {
    let g = read_graph(&a.graph)?;
    let spec = s.registry.spec();
    if a.components {
        let mut records = Vec::new();
        for comp in g.connected_components() {
            let sub = g.induced(&comp)?;
            let out = recognize(&sub, s.c, &s.registry)?;
            records.push(serde_json::json!({
                "vertices": comp.as_slice(),
                "outcome": RecognitionRecord::new(&out, s.c, spec.clone(), a.explain),
            }));
        }
        let member = records.iter().all(|r| r["outcome"]["member"] == true);
        write_out(None, &json_line(&serde_json::json!({ "member": member, "components": records }))?)?;
        return Ok(if member { OK } else { NEGATIVE });
    }
    let out = recognize(&g, s.c, &s.registry)?;
    if let Some(t) = &out.structure {
        if let Some(path) = &a.structure {
            write_out(Some(path), &structure_json(t)?)?;
        }
        if let Some(path) = &a.dot {
            write_out(Some(path), &structure_dot(&g, t))?;
        }
    }
    write_out(None, &json_line(&RecognitionRecord::new(&out, s.c, spec, a.explain))?)?;
    Ok(if out.member { OK } else { NEGATIVE })
}

fn cmd_dp(s: &Settings, a: &DpArgs) -> anyhow::Result<u8> {
    let g = read_graph(&a.graph)?;
    let t = if a.recognize {
        let out = recognize(&g, s.c, &s.registry)?;
        match out.structure {
            Some(t) => t,
            None => {
                eprintln!("not in the family: {}", out.failure_detail.unwrap_or_default());
                return Ok(NEGATIVE);
            }
        }
    } else {
        read_structure(a.structure.as_deref().expect("clap requires one"), &g)?
    };
    let (result, trace) = dp_minrank_traced(&g, &t, &s.registry, DpOptions { max_subsets: a.max_subsets })?;
    if let Some(path) = &a.trace {
        write_out(Some(path), &(serde_json::to_string_pretty(&TraceRecord::from(&trace))? + "\n"))?;
    }
    let all = t.subtree_vertices(t.root().unwrap_or(0))?;
    let solved = Solved { bounds: sandwich_bounds(&g), components: vec![(all, result.clone())], result };
    write_out(None, &json_line(&to_record(a.graph.display().to_string(), &g, &solved))?)?;
    Ok(OK)
}

fn cmd_batch(s: &Settings, a: &BatchArgs) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(&a.corpus).with_context(|| format!("reading {}", a.corpus.display()))?;
    let report = run_batch(&text, &s.options(a.method, a.node_limit), s.jobs)?;
    if let Some(path) = &a.out {
        let mut lines = String::new();
        for r in &report.records {
            lines.push_str(&json_line(r)?);
        }
        write_out(Some(path), &lines)?;
    }
    if let Some(path) = &a.csv {
        write_out(Some(path), &histogram_csv(&report.histogram))?;
    }
    let summary = serde_json::to_string_pretty(&report.summary)? + "\n";
    if let Some(path) = &a.json {
        write_out(Some(path), &summary)?;
    }
    write_out(None, &summary)?;
    Ok(if report.summary.inexact > 0 { INEXACT } else { OK })
}

fn cmd_gen(a: &GenArgs, c: usize) -> anyhow::Result<u8> {
    if c == 0 || a.k == 0 || a.min_part == 0 || a.min_part > a.max_part || !(0.0..=1.0).contains(&a.general_prob) {
        bail!("need c >= 1, k >= 1, 1 <= min-part <= max-part and general-prob in [0, 1]");
    }
    let profile = GenProfile {
        min_part: a.min_part,
        max_part: a.max_part,
        general_prob: a.general_prob,
        bounded_cap: a.bounded_cap,
        ..GenProfile::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (g, t) = generate_member(&mut rng, a.k, c, &profile);
    let text = match a.format {
        GraphFormat::Edgelist => emit_edge_list(&g),
        GraphFormat::Graph6 => emit_graph6(&g)? + "\n",
    };
    write_out(a.graph.as_deref(), &text)?;
    if let Some(path) = &a.structure {
        write_out(Some(path), &structure_json(&t)?)?;
    }
    Ok(OK)
}

fn cmd_cnf(a: &CnfArgs) -> anyhow::Result<u8> {
    let g = read_graph(&a.graph)?;
    let cnf = emit_cnf(&g, a.k)?;
    write_out(a.out.as_deref(), &cnf.to_string())?;
    Ok(OK)
}

fn cmd_validate(s: &Settings, a: &ValidateArgs) -> anyhow::Result<u8> {
    let g = read_graph(&a.graph)?;
    let t = read_structure(&a.structure, &g)?;
    let report = validate_structure(&g, &t, &s.registry);
    if let Some(path) = &a.dot {
        write_out(Some(path), &structure_dot(&g, &t))?;
    }
    write_out(None, &json_line(&ValidationRecord::from(&report))?)?;
    Ok(if report.valid { OK } else { NEGATIVE })
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    if let Command::Gen(a) = &cli.command {
        return cmd_gen(a, cli.global.c.unwrap_or(2));
    }
    if let Command::Cnf(a) = &cli.command {
        return cmd_cnf(a);
    }
    let s = Settings::new(&cli.global)?;
    match &cli.command {
        Command::Minrank(a) => cmd_minrank(&s, a),
        Command::Recognize(a) => cmd_recognize(&s, a),
        Command::Dp(a) => cmd_dp(&s, a),
        Command::Batch(a) => cmd_batch(&s, a),
        Command::Validate(a) => cmd_validate(&s, a),
        Command::Gen(_) | Command::Cnf(_) => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}
