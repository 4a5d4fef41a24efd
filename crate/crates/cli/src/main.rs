use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use shvg::closed_form::{classify, formula_score, GraphClass};
use shvg::fpt::{nd_solve_report, DEFAULT_WIDTH_CAP};
use shvg::generators;
use shvg::partition::ClassKind;
use shvg::sat::{
    bound_occurrences, break_cycles, build_caterpillar_instance, build_tree_instance, parse_formula, qbf_max_solve,
    DEFAULT_QBF_CAP,
};
use shvg::solver::{best_move, principal_line, solve_report, SolveConfig, SolveError};
use shvg::verify::{run_suite, SuiteCaps, DEFAULT_SEED, SUITES};
use shvg::{Graph, Player, Position};

const EXIT_USAGE: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "shvg", version, about = "Maker-Breaker scoring happy vertex game toolkit")]
struct Cli {
    /// Seed for every randomized generator.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the score of a graph or position file.
    Solve(SolveArgs),
    /// Recognize a solved graph class and print its closed-form scores.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a closed form directly from a class description.
    ClosedForm(ClosedFormArgs),
    /// Solve with the neighborhood-diversity algorithm.
    Fpt {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Side::Maker)]
        mover: Side,
        #[arg(long)]
        both: bool,
        /// Largest neighborhood diversity accepted.
        #[arg(long, default_value_t = DEFAULT_WIDTH_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the value of the quantified MAX-2-SAT game for a formula file.
    Formula {
        file: PathBuf,
        #[arg(short)]
        k: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_QBF_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Build the tree or caterpillar instance of a formula.
    Reduce(ReduceArgs),
    /// Run an oracle-equivalence suite.
    Verify(VerifyArgs),
    /// Play against the engine on standard input.
    Play {
        file: PathBuf,
        #[arg(long, value_enum)]
        human: Side,
        /// Who moves first.
        #[arg(long, value_enum, default_value_t = Side::Maker)]
        first: Side,
    },
    /// Time the solver on generated families.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    Maker,
    Breaker,
}

impl From<Side> for Player {
    fn from(s: Side) -> Player {
        match s {
            Side::Maker => Player::Maker,
            Side::Breaker => Player::Breaker,
        }
    }
}

#[derive(Args)]
struct ConfigArgs {
    /// Disable every reduction and search the full game tree.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    no_super_lemma: bool,
    #[arg(long)]
    no_decompose: bool,
    #[arg(long)]
    no_move_ordering: bool,
    #[arg(long)]
    no_component_split: bool,
    #[arg(long)]
    no_pds: bool,
    #[arg(long)]
    no_closed_form: bool,
    /// Wall-clock limit, e.g. `500ms` or `2m`.
    #[arg(long, value_parser = humantime::parse_duration)]
    budget: Option<Duration>,
    /// Limit on searched nodes.
    #[arg(long)]
    nodes: Option<u64>,
    /// Limit on memoized positions.
    #[arg(long)]
    memo: Option<usize>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl ConfigArgs {
    fn config(&self) -> SolveConfig {
        let base = if self.oracle { SolveConfig::oracle() } else { SolveConfig::full() };
        SolveConfig {
            super_lemma: base.super_lemma && !self.no_super_lemma,
            decompose: base.decompose && !self.no_decompose,
            move_ordering: base.move_ordering && !self.no_move_ordering,
            component_split: base.component_split && !self.no_component_split,
            pds_fast_path: base.pds_fast_path && !self.no_pds,
            closed_form_dispatch: base.closed_form_dispatch && !self.no_closed_form,
            memo_capacity: self.memo,
            node_budget: self.nodes,
            time_budget: self.budget,
            threads: self.threads.max(1),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Side::Maker)]
    mover: Side,
    /// Report both Ms and Bs.
    #[arg(long)]
    both: bool,
    #[arg(long)]
    json: bool,
    /// Print the optimal line of play as JSON.
    #[arg(long, conflicts_with = "both")]
    trace: bool,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassName {
    Path,
    Cycle,
    Union,
    Star,
    BinaryTree,
}

#[derive(Args)]
struct ClosedFormArgs {
    #[arg(value_enum)]
    class: ClassName,
    /// Vertex count (path, cycle), leg lengths (star), depth (binary tree) or path lengths (union).
    sizes: Vec<usize>,
    /// Cycle lengths for a union.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    cycles: Vec<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Tree,
    Caterpillar,
}

#[derive(Args)]
struct ReduceArgs {
    file: PathBuf,
    #[arg(short, allow_negative_numbers = true)]
    k: i64,
    #[arg(long, value_enum, default_value_t = TargetArg::Tree)]
    target: TargetArg,
    /// Make the formula acceptable first: break incidence cycles (tree) or
    /// bound occurrences (caterpillar), adjusting k.
    #[arg(long)]
    prepare: bool,
    /// Output graph path; the sidecar goes next to it with a `.json` extension.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    suite: String,
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    vars: Option<u32>,
    #[arg(long)]
    clauses: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Paths,
    Trees,
    Gnp,
    Twins,
    BinaryTrees,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Family::Trees)]
    family: Family,
    #[arg(long, default_value_t = 16)]
    max_n: usize,
    /// Instances per size.
    #[arg(long, default_value_t = 3)]
    samples: usize,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    config: ConfigArgs,
}

enum Failure {
    Usage(String),
    Resource(String),
    Verify,
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Failure {
        match e {
            SolveError::ResourceExceeded(_) => Failure::Resource(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// A graph file is read as the empty position on that graph.
fn load_position(path: &Path) -> Result<Position, Failure> {
    let text = read(path)?;
    let has_colors = text.lines().any(|l| {
        let l = l.trim_start();
        l.starts_with("M:") || l.starts_with("B:")
    });
    let parsed = if has_colors {
        Position::parse(&text)
    } else {
        Graph::parse(&text).map(|g| Position::empty(Arc::new(g)))
    };
    parsed.map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Graph::parse(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn print_json(value: &serde_json::Value) {
    let text = serde_json::to_string_pretty(value).expect("json value serializes");
    let _ = writeln!(io::stdout().lock(), "{text}");
}

fn cmd_solve(args: SolveArgs) -> CmdResult {
    let pos = load_position(&args.file)?;
    let cfg = args.config.config();
    let mover = Player::from(args.mover);
    if args.trace {
        let line = principal_line(&pos, mover, &cfg)?;
        print_json(&json!({ "mover": mover, "start_happy": pos.happy_now(), "plies": line }));
        return Ok(());
    }
    if args.both {
        let ms = solve_report(&pos, Player::Maker, &cfg)?;
        let bs = solve_report(&pos, Player::Breaker, &cfg)?;
        if args.json {
            print_json(&json!({
                "ms": ms.score,
                "bs": bs.score,
                "nodes": ms.nodes + bs.nodes,
                "reductions": { "maker": ms.reductions, "breaker": bs.reductions },
            }));
        } else {
            println!("ms: {}", ms.score);
            println!("bs: {}", bs.score);
            println!("nodes: {}", ms.nodes + bs.nodes);
            println!("reductions: {}", reduction_names(&ms.reductions));
        }
        return Ok(());
    }
    let report = solve_report(&pos, mover, &cfg)?;
    if args.json {
        print_json(&serde_json::to_value(&report).expect("report serializes"));
    } else {
        println!("score: {}", report.score);
        println!("nodes: {}", report.nodes);
        println!("reductions: {}", reduction_names(&report.reductions));
    }
    Ok(())
}

fn reduction_names(rs: &[shvg::solver::Reduction]) -> String {
    if rs.is_empty() {
        return "none".into();
    }
    rs.iter()
        .map(|r| serde_json::to_value(r).ok().and_then(|v| v["kind"].as_str().map(String::from)).unwrap_or_default())
        .collect::<Vec<_>>()
        .join(", ")
}

fn scores_json(g: &Graph) -> serde_json::Value {
    match (formula_score(g, Player::Maker), formula_score(g, Player::Breaker)) {
        (Some(ms), Some(bs)) => json!({ "ms": ms, "bs": bs }),
        _ => serde_json::Value::Null,
    }
}

fn cmd_classify(file: &Path, as_json: bool) -> CmdResult {
    let g = load_graph(file)?;
    let class = classify(&g);
    let scores = scores_json(&g);
    if as_json {
        print_json(&json!({ "class": class, "description": class.to_string(), "scores": scores }));
    } else {
        println!("class: {class}");
        match scores {
            serde_json::Value::Null => println!("scores: no closed form"),
            s => println!("scores: ms {} bs {}", s["ms"], s["bs"]),
        }
    }
    Ok(())
}

fn cmd_closed_form(args: ClosedFormArgs) -> CmdResult {
    let one = |what: &str| -> Result<usize, Failure> {
        match args.sizes.as_slice() {
            [x] => Ok(*x),
            _ => Err(usage(format!("{what} takes exactly one size"))),
        }
    };
    let class = match args.class {
        ClassName::Path => GraphClass::Path { n: one("path")? },
        ClassName::Cycle => GraphClass::Cycle { n: one("cycle")? },
        ClassName::Star => GraphClass::SubdividedStar { legs: args.sizes.clone() },
        ClassName::BinaryTree => GraphClass::CompleteBinaryTree { depth: one("binary-tree")? as u32 },
        ClassName::Union => GraphClass::UnionOfPathsAndCycles { paths: args.sizes.clone(), cycles: args.cycles.clone() },
    };
    let score = |mover| -> Result<u32, Failure> {
        use shvg::closed_form::*;
        Ok(match &class {
            GraphClass::Path { n } => path_score(*n, mover).map_err(usage)?,
            GraphClass::Cycle { n } => union_paths_score(&[], &[*n], mover).map_err(usage)?,
            GraphClass::SubdividedStar { legs } => subdivided_star_score(legs, mover).map_err(usage)?,
            GraphClass::CompleteBinaryTree { depth } => complete_binary_tree_score(*depth, mover),
            GraphClass::UnionOfPathsAndCycles { paths, cycles } => union_paths_score(paths, cycles, mover).map_err(usage)?,
            GraphClass::Unknown => unreachable!("never constructed here"),
        })
    };
    let (ms, bs) = (score(Player::Maker)?, score(Player::Breaker)?);
    if args.json {
        print_json(&json!({ "class": class, "description": class.to_string(), "scores": { "ms": ms, "bs": bs } }));
    } else {
        println!("{class}: ms {ms} bs {bs}");
    }
    Ok(())
}

fn cmd_fpt(file: &Path, mover: Side, both: bool, cap: usize, as_json: bool) -> CmdResult {
    let g = load_graph(file)?;
    let movers = if both { vec![Player::Maker, Player::Breaker] } else { vec![mover.into()] };
    let mut out = Vec::new();
    for m in movers {
        let r = nd_solve_report(&g, m, cap).map_err(|e| Failure::Resource(e.to_string()))?;
        out.push((m, r));
    }
    if as_json {
        let items: Vec<_> = out.iter().map(|(m, r)| json!({ "mover": m, "report": r })).collect();
        print_json(&json!({ "width": out[0].1.width, "results": items }));
    } else {
        println!("width: {}", out[0].1.width);
        for (m, r) in out {
            println!("{m}: score {} ({} states)", r.score, r.states);
        }
    }
    Ok(())
}

fn cmd_formula(file: &Path, k: Option<i64>, cap: usize, as_json: bool) -> CmdResult {
    let f = parse_formula(&read(file)?).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let out = qbf_max_solve(&f, k.unwrap_or(0), cap).map_err(|e| Failure::Resource(e.to_string()))?;
    if as_json {
        let wins = k.map(|_| out.satisfier_wins);
        print_json(&json!({ "value": out.value, "k": k, "satisfier_wins": wins, "clauses": f.clauses.len() }));
    } else {
        println!("value: {}", out.value);
        if let Some(k) = k {
            println!("k = {k}: {} wins", if out.satisfier_wins { "satisfier" } else { "falsifier" });
        }
    }
    Ok(())
}

fn cmd_reduce(args: ReduceArgs) -> CmdResult {
    let f = parse_formula(&read(&args.file)?).map_err(|e| usage(format!("{}: {e}", args.file.display())))?;
    let (f, k) = match (args.prepare, args.target) {
        (false, _) => (f, args.k),
        (true, TargetArg::Tree) => {
            let (g, k, _) = break_cycles(&f, args.k);
            (g, k)
        }
        (true, TargetArg::Caterpillar) => {
            let b = bound_occurrences(&f, args.k).map_err(usage)?;
            (b.formula, b.k)
        }
    };
    let art = match args.target {
        TargetArg::Tree => build_tree_instance(&f, k),
        TargetArg::Caterpillar => build_caterpillar_instance(&f, k),
    }
    .map_err(usage)?;
    if let Some(out) = &args.output {
        fs::write(out, art.instance.to_text()).map_err(|e| usage(format!("{}: {e}", out.display())))?;
        let sidecar = out.with_extension("json");
        fs::write(&sidecar, art.sidecar_json()).map_err(|e| usage(format!("{}: {e}", sidecar.display())))?;
        println!("wrote {} and {}", out.display(), sidecar.display());
    }
    println!("threshold: {}", art.threshold);
    println!("baseline: {}", art.baseline);
    println!("vertices: {}", art.vertices);
    Ok(())
}

fn cmd_verify(args: VerifyArgs, seed: u64) -> CmdResult {
    let caps = SuiteCaps {
        max_n: args.max_n,
        samples: args.samples,
        vars: args.vars,
        clauses: args.clauses,
        seed: Some(seed),
    };
    let names: Vec<&str> = if args.suite == "all" { SUITES.to_vec() } else { vec![args.suite.as_str()] };
    let mut reports = Vec::new();
    for name in names {
        reports.push(run_suite(name, &caps).map_err(usage)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    if args.json {
        print_json(&json!({ "passed": passed, "seed": seed, "suites": reports }));
    } else {
        for r in &reports {
            println!(
                "{} {}: {} checks, {} ms",
                if r.passed { "PASS" } else { "FAIL" },
                r.suite,
                r.checks,
                r.elapsed_ms
            );
            for f in &r.failures {
                println!("  {}", f.replace('\n', "\n    "));
            }
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn cmd_play(file: &Path, human: Player, first: Player) -> CmdResult {
    let mut pos = load_position(file)?;
    let cfg = SolveConfig::full();
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut mover = first;
    println!("you are {human}; free vertices: {}", list(&pos.free_vertices()));
    while !pos.is_terminal() {
        if mover == human {
            print!("your move ({}): ", list(&pos.free_vertices()));
            io::stdout().flush().map_err(usage)?;
            let Some(line) = lines.next() else {
                return Err(usage("input closed before the game ended"));
            };
            let line = line.map_err(usage)?;
            let v = match line.trim().parse::<usize>() {
                Ok(v) if v < pos.graph().n() && pos.is_free(v) => v,
                _ => {
                    println!("`{}` is not a free vertex", line.trim());
                    continue;
                }
            };
            pos = pos.play(v, mover).map_err(usage)?;
        } else {
            let (v, score) = best_move(&pos, mover, &cfg)?;
            println!("engine ({mover}) plays {v}, expecting {score}");
            pos = pos.play(v, mover).map_err(usage)?;
        }
        mover = mover.opponent();
    }
    println!("final score: {}", pos.happy_now());
    Ok(())
}

fn list(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_bench(args: BenchArgs, seed: u64) -> CmdResult {
    let cfg = args.config.config();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for n in 1..=args.max_n {
        let graphs: Vec<Graph> = match args.family {
            Family::Paths => vec![generators::path(n)],
            Family::BinaryTrees if (n + 1).is_power_of_two() && n > 1 => {
                vec![generators::complete_binary_tree(n.trailing_ones() - 1)]
            }
            Family::BinaryTrees => vec![],
            Family::Trees => (0..args.samples).map(|_| generators::random_tree(n, &mut rng)).collect(),
            Family::Gnp => (0..args.samples).map(|_| generators::gnp(n, 0.3, &mut rng)).collect(),
            Family::Twins => (0..args.samples).map(|_| twins(n, &mut rng)).collect(),
        };
        for g in graphs {
            let pos = Position::empty(Arc::new(g));
            let start = Instant::now();
            let ms = solve_report(&pos, Player::Maker, &cfg);
            let bs = solve_report(&pos, Player::Breaker, &cfg);
            let elapsed = start.elapsed();
            let micros = elapsed.as_micros() as u64;
            let row = match (ms, bs) {
                (Ok(ms), Ok(bs)) => {
                    if !args.json {
                        println!("n={n:>3} ms={} bs={} nodes={} {elapsed:.3?}", ms.score, bs.score, ms.nodes + bs.nodes);
                    }
                    json!({ "n": n, "ms": ms.score, "bs": bs.score, "nodes": ms.nodes + bs.nodes, "micros": micros })
                }
                (Err(e), _) | (_, Err(e)) => {
                    if !args.json {
                        println!("n={n:>3} {e}");
                    }
                    json!({ "n": n, "error": e.to_string(), "micros": micros })
                }
            };
            rows.push(row);
        }
    }
    if args.json {
        print_json(&json!({ "seed": seed, "rows": rows }));
    }
    Ok(())
}

fn twins(n: usize, rng: &mut StdRng) -> Graph {
    let mut classes = Vec::new();
    let mut used = 0;
    while used < n {
        let size = rng.gen_range(1..=4usize).min(n - used);
        let kind = if rng.gen_bool(0.5) { ClassKind::Clique } else { ClassKind::Independent };
        classes.push((size, kind));
        used += size;
    }
    generators::twin_planted(&classes, 0.5, rng)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let seed = cli.seed;
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Classify { file, json } => cmd_classify(&file, json),
        Command::ClosedForm(args) => cmd_closed_form(args),
        Command::Fpt { file, mover, both, cap, json } => cmd_fpt(&file, mover, both, cap, json),
        Command::Formula { file, k, cap, json } => cmd_formula(&file, k, cap, json),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Verify(args) => cmd_verify(args, seed),
        Command::Play { file, human, first } => cmd_play(&file, human.into(), first.into()),
        Command::Bench(args) => cmd_bench(args, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RESOURCE)
        }
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
    }
}
