//! The `edgegame` command line.
//!
//! Exit status: 0 on success, 1 when a result contradicts what was
//! expected (a counterexample, a violated invariant, a baseline mismatch
//! or an undecided solve), 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use edgegame::enumerate::{enumerate_trees, in_class, ClassSpec, D4Shape};
use edgegame::solver::DEFAULT_NODE_BUDGET;
use edgegame::structure::{classify, decompose, detect_forbidden, star_nodes, SubtreeKind};
use edgegame::{
    EdgeColoring, GameState, GameStatus, Player, SolveError, Solver, Tree, TreeShape, Variant,
};
use serde::Serialize;

use crate::io::{read_position, read_tree, ToolError};
use crate::parallel::{solve_parallel, status_label, with_threads, SharedMemo};
use crate::service::{serve, ServeConfig};
use crate::verify::{
    check_lemma_invariants, compare_baseline, paths_config, prior_bound_configs, probe_config,
    run_sweep, PriorScales, SweepConfig, SweepReport,
};

#[derive(Parser, Debug)]
#[command(
    name = "edgegame",
    version,
    about = "Exact analysis of the edge-coloring game on trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List non-isomorphic trees, optionally restricted to a class.
    Enumerate(EnumerateArgs),
    /// Decompose a position and classify its pieces.
    Analyze(AnalyzeArgs),
    /// Solve a tree or position.
    Solve(SolveArgs),
    /// Compute the game chromatic index of a tree.
    Index(IndexArgs),
    /// Run an exhaustive sweep or the sampled invariant checks.
    Verify(VerifyArgs),
    /// Sweep wider classes for trees with index above 5.
    Probe(ProbeArgs),
    /// Start the HTTP play service.
    Serve(ServeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    Paths,
    Stars,
    Any,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    max_vertices: usize,
    #[arg(long, default_value_t = 1)]
    min_vertices: usize,
    /// Required maximum degree.
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long, value_enum, default_value = "any")]
    d4_shape: ShapeArg,
    /// Longest path allowed among degree-4 vertices (with `--d4-shape paths`).
    #[arg(long, default_value_t = 2)]
    l: usize,
    /// Print counts per vertex count instead of trees.
    #[arg(long)]
    count: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long, conflicts_with = "tree", required_unless_present = "tree")]
    position: Option<PathBuf>,
    #[arg(long)]
    tree: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    k: u8,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(
        long,
        conflicts_with = "position",
        required_unless_present = "position"
    )]
    tree: Option<PathBuf>,
    #[arg(long)]
    position: Option<PathBuf>,
    #[arg(long)]
    k: u8,
    #[arg(long, default_value = "BB", value_parser = parse_variant)]
    variant: Variant,
    /// Player to move; defaults to the variant's first mover.
    #[arg(long, value_parser = parse_player)]
    mover: Option<Player>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Also print the line of best moves to the end of the game.
    #[arg(long)]
    pv: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IndexArgs {
    #[arg(long)]
    tree: PathBuf,
    #[arg(long, default_value = "BB", value_parser = parse_variant)]
    variant: Variant,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Also solve larger palettes up to Δ+2 and report any Alice loss.
    #[arg(long)]
    check_above: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    /// Degree-4 vertices inducing short paths, at 5 colors.
    Theorem1,
    /// Known bounds: Δ+2 for all trees, 4 for Δ = 3, 5 for independent
    /// 4-vertices and caterpillars.
    Prior,
    /// Sampled decomposition and star-node invariants.
    Lemmas,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    max_vertices: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Handle shard `I` of `N`, written `I/N`.
    #[arg(long, value_parser = parse_shard)]
    shard: Option<(usize, usize)>,
    /// Record file (line-delimited JSON); a CSV summary is written beside it.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Keep records already in the output file and solve only the rest.
    #[arg(long, requires = "output")]
    resume: bool,
    /// Earlier record file the results must agree with.
    #[arg(long)]
    baseline: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    target: Target,
    #[arg(long, default_value_t = 2)]
    l: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[arg(long, value_enum, default_value = "paths")]
    d4_shape: ShapeArg,
    #[arg(long, default_value_t = 3)]
    l: usize,
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Args, Debug)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
    /// Append-only journal; existing games in it are restored at start.
    #[arg(long, visible_alias = "output")]
    journal: Option<PathBuf>,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
        .map_err(|_| format!("`{s}` is not one of A-, B-, AA, AB, BA, BB"))
}

fn parse_player(s: &str) -> Result<Player, String> {
    s.parse().map_err(|_| format!("`{s}` is not Alice or Bob"))
}

fn parse_shard(s: &str) -> Result<(usize, usize), String> {
    let (i, n) = s.split_once('/').ok_or("expected I/N")?;
    let i: usize = i.parse().map_err(|_| "bad shard index")?;
    let n: usize = n.parse().map_err(|_| "bad shard count")?;
    if n == 0 || i >= n {
        return Err(format!("shard {i} is not below {n}"));
    }
    Ok((i, n))
}

enum Outcome {
    Success,
    Failure,
}

/// Runs the command line `argv` (program name first) and returns the exit
/// status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::Failure) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome, ToolError> {
    match command {
        Command::Enumerate(a) => enumerate(a),
        Command::Analyze(a) => analyze(a),
        Command::Solve(a) => solve(a),
        Command::Index(a) => index(a),
        Command::Verify(a) => verify(a),
        Command::Probe(a) => probe(a),
        Command::Serve(a) => {
            let runtime = tokio::runtime::Runtime::new().map_err(|source| ToolError::Io {
                path: PathBuf::from("runtime"),
                source,
            })?;
            eprintln!("listening on http://{}", a.addr);
            runtime.block_on(serve(ServeConfig {
                addr: a.addr,
                journal: a.journal,
            }))?;
            Ok(Outcome::Success)
        }
    }
}

/// Writes `text` to `output`, or to stdout without one.
fn emit(output: Option<&Path>, text: &str) -> Result<(), ToolError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| ToolError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn class_spec(shape: ShapeArg, l: usize, delta: Option<usize>) -> ClassSpec {
    let d4_shape = match shape {
        ShapeArg::Paths => D4Shape::Paths { max_length: l },
        ShapeArg::Stars => D4Shape::Stars,
        ShapeArg::Any => D4Shape::Unrestricted,
    };
    ClassSpec {
        delta_exact: delta,
        delta_max: delta.unwrap_or(usize::MAX),
        d4_shape,
    }
}

fn enumerate(a: EnumerateArgs) -> Result<Outcome, ToolError> {
    if a.min_vertices == 0 || a.min_vertices > a.max_vertices {
        return Err(ToolError::Invalid(format!(
            "empty vertex range {}..={}",
            a.min_vertices, a.max_vertices
        )));
    }
    let spec = class_spec(a.d4_shape, a.l, a.delta);
    let mut out = String::new();
    for n in a.min_vertices..=a.max_vertices {
        let trees = enumerate_trees(n)
            .map_err(|e| ToolError::Invalid(e.to_string()))?
            .filter(|t| in_class(t, &spec));
        if a.count {
            out.push_str(&format!("{n} {}\n", trees.count()));
        } else {
            for t in trees {
                if !out.is_empty() {
                    out.push('\n');
                }
                out.push_str(&t.to_text());
            }
        }
    }
    emit(a.output.as_deref(), &out)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct PieceReport {
    vertices: Vec<usize>,
    edges: Vec<usize>,
    colored_leaf_edges: usize,
    star_nodes: Vec<(usize, usize)>,
    kind: String,
    type3: bool,
    type4: bool,
}

fn load_state(
    tree: Option<&Path>,
    position: Option<&Path>,
    k: u8,
    variant: Variant,
    mover: Option<Player>,
) -> Result<GameState, ToolError> {
    let (tree, colors) = match (tree, position) {
        (Some(t), _) => {
            let tree = read_tree(t)?;
            let colors = vec![0; tree.edge_count()];
            (tree, colors)
        }
        (None, Some(p)) => read_position(p)?,
        (None, None) => return Err(ToolError::Invalid("pass --tree or --position".into())),
    };
    let coloring = EdgeColoring::from_colors(&tree, colors, k)
        .map_err(|e| ToolError::Invalid(e.to_string()))?;
    GameState::from_coloring(
        Arc::new(tree),
        coloring,
        variant,
        mover.unwrap_or(variant.first_mover),
    )
    .map_err(|e| ToolError::Invalid(e.to_string()))
}

fn analyze(a: AnalyzeArgs) -> Result<Outcome, ToolError> {
    let state = load_state(
        a.tree.as_deref(),
        a.position.as_deref(),
        a.k,
        Variant::BB,
        None,
    )?;
    let forbidden = detect_forbidden(state.tree());
    let mut text = format!(
        "forbidden patterns: claw of 4-vertices {}, path of four 4-vertices {}\n",
        forbidden.has_s34, forbidden.has_p44
    );
    let mut lines = String::new();
    for (i, s) in decompose(&state).subtrees.iter().enumerate() {
        let class = classify(s);
        let stars = star_nodes(s).star_nodes;
        let kind = match class.kind {
            SubtreeKind::Type0 => "type0",
            SubtreeKind::Type1 => "type1",
            SubtreeKind::Type2Candidate => "type2-candidate",
            SubtreeKind::Type3 => "type3",
            SubtreeKind::Type4 => "type4",
            SubtreeKind::Unclassified => "unclassified",
        };
        text.push_str(&format!(
            "piece {i}: edges {:?}, {}-LCT, star-nodes {:?}, {kind}\n",
            s.edges(),
            class.lct,
            stars
        ));
        lines.push_str(&json_line(&PieceReport {
            vertices: s.vertices().to_vec(),
            edges: s.edges().to_vec(),
            colored_leaf_edges: class.lct,
            star_nodes: stars,
            kind: kind.to_string(),
            type3: class.is_type3,
            type4: class.is_type4,
        }));
    }
    match &a.output {
        Some(path) => emit(Some(path), &lines)?,
        None => print!("{text}"),
    }
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct SolveOutput {
    winner: String,
    best_move: Option<String>,
    nodes: u64,
    table_hits: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    principal_variation: Vec<String>,
}

fn solve(a: SolveArgs) -> Result<Outcome, ToolError> {
    let state = load_state(
        a.tree.as_deref(),
        a.position.as_deref(),
        a.k,
        a.variant,
        a.mover,
    )?;
    let threads = a
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let result = if threads > 1 {
        let memo = SharedMemo::default();
        with_threads(Some(threads), || solve_parallel(&state, &memo, a.budget))
    } else {
        Solver::new().budget(a.budget).solve(&state)
    };
    let result = match result {
        Ok(r) => r,
        Err(e @ SolveError::Budget { .. }) => {
            eprintln!("undecided: {e}");
            return Ok(Outcome::Failure);
        }
        Err(e) => return Err(ToolError::Invalid(e.to_string())),
    };
    let mut pv = Vec::new();
    if a.pv {
        let mut solver = Solver::new().budget(a.budget);
        let mut st = state.clone();
        while st.status() == GameStatus::Ongoing {
            let m = match solver.best_move(&st) {
                Ok(m) => m,
                Err(_) => break,
            };
            pv.push(format!("{}: {m}", st.mover()));
            st.play(m).expect("best moves are legal");
        }
    }
    let out = SolveOutput {
        winner: status_label(result.winner).to_string(),
        best_move: result.best_move.map(|m| m.to_string()),
        nodes: result.nodes_explored,
        table_hits: result.table_hits,
        principal_variation: pv,
    };
    match &a.output {
        Some(path) => emit(Some(path), &json_line(&out))?,
        None => {
            println!(
                "{}, best move {} ({} nodes, {} table hits)",
                out.winner,
                out.best_move.as_deref().unwrap_or("none"),
                out.nodes,
                out.table_hits
            );
            for line in &out.principal_variation {
                println!("  {line}");
            }
        }
    }
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct IndexOutput {
    canonical_id: String,
    variant: String,
    index: u8,
    outcomes: Vec<(u8, String)>,
    non_monotone: Vec<u8>,
}

fn index(a: IndexArgs) -> Result<Outcome, ToolError> {
    let tree: Arc<Tree> = Arc::new(read_tree(&a.tree)?);
    let report =
        match Solver::new()
            .budget(a.budget)
            .game_chromatic_index(&tree, a.variant, a.check_above)
        {
            Ok(r) => r,
            Err(e @ SolveError::Budget { .. }) => {
                eprintln!("undecided: {e}");
                return Ok(Outcome::Failure);
            }
            Err(e) => return Err(ToolError::Invalid(e.to_string())),
        };
    let out = IndexOutput {
        canonical_id: TreeShape::new(&tree).map(|s| s.id()).unwrap_or_default(),
        variant: a.variant.to_string(),
        index: report.index,
        outcomes: report
            .outcomes
            .iter()
            .map(|&(k, w)| (k, status_label(w).to_string()))
            .collect(),
        non_monotone: report.non_monotone.clone(),
    };
    match &a.output {
        Some(path) => emit(Some(path), &json_line(&out))?,
        None => {
            println!("index: {}", out.index);
            for (k, w) in &out.outcomes {
                println!("  k={k}: {w}");
            }
            if !out.non_monotone.is_empty() {
                println!("Alice loses again at k = {:?}", out.non_monotone);
            }
        }
    }
    Ok(Outcome::Success)
}

fn apply_sweep_args(config: &mut SweepConfig, args: &SweepArgs, output: Option<PathBuf>) {
    config.budget = args.budget;
    config.threads = args.threads;
    config.output = output;
    config.resume = args.resume;
    if let Some(shard) = args.shard {
        config.shard = shard;
    }
}

/// Runs the sweeps, prints their summaries and checks the baseline.
fn run_sweeps(configs: Vec<SweepConfig>, args: &SweepArgs) -> Result<Outcome, ToolError> {
    let many = configs.len() > 1;
    let mut ok = true;
    for (i, mut config) in configs.into_iter().enumerate() {
        let output = args
            .output
            .as_ref()
            .map(|p| if many { numbered(p, i) } else { p.clone() });
        apply_sweep_args(&mut config, args, output);
        let report = run_sweep(&config)?;
        print_report(&report);
        ok &= report.passed();
        if let Some(baseline) = &args.baseline {
            let baseline = if many {
                numbered(baseline, i)
            } else {
                baseline.clone()
            };
            let mismatches = compare_baseline(&report, &baseline)?;
            for m in &mismatches {
                println!(
                    "  baseline mismatch {} k={} {}: {} -> {}",
                    m.canonical_id, m.k, m.variant, m.baseline, m.current
                );
            }
            ok &= mismatches.is_empty();
        }
    }
    Ok(if ok {
        Outcome::Success
    } else {
        Outcome::Failure
    })
}

/// `out.jsonl` becomes `out.2.jsonl` for the third sweep of a batch.
fn numbered(path: &Path, i: usize) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{i}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{i}"),
    };
    path.with_file_name(name)
}

fn print_report(report: &SweepReport) {
    println!("# {}", report.scale);
    println!("{}", report.summary());
    for r in &report.counterexamples {
        println!(
            "  counterexample: n={} k={} edges {:?} index {:?}",
            r.n, r.k, r.edges, r.index
        );
    }
    for r in &report.budget_exhausted {
        println!("  undecided: n={} k={} edges {:?}", r.n, r.k, r.edges);
    }
    for r in &report.non_monotone {
        println!(
            "  Alice loses at k={} below-bound index {:?}: edges {:?}",
            r.k, r.index, r.edges
        );
    }
}

fn verify(a: VerifyArgs) -> Result<Outcome, ToolError> {
    match a.target {
        Target::Theorem1 => {
            let config = paths_config(a.sweep.max_vertices.unwrap_or(11), a.l);
            run_sweeps(vec![config], &a.sweep)
        }
        Target::Prior => {
            let scales = a
                .sweep
                .max_vertices
                .map(PriorScales::uniform)
                .unwrap_or_default();
            run_sweeps(prior_bound_configs(scales), &a.sweep)
        }
        Target::Lemmas => {
            let report = check_lemma_invariants(a.samples, a.seed);
            println!(
                "{} positions, {} pieces, {} single-move splits, {} violations",
                report.positions,
                report.subtrees,
                report.moves_checked,
                report.violations.len()
            );
            let mut lines = String::new();
            for v in &report.violations {
                println!("  {:?}: {}", v.kind, v.detail);
                lines.push_str(&json_line(&serde_json::json!({
                    "kind": format!("{:?}", v.kind),
                    "detail": v.detail,
                    "position": v.position,
                })));
            }
            if let Some(path) = &a.sweep.output {
                emit(Some(path), &lines)?;
            }
            Ok(if report.passed() {
                Outcome::Success
            } else {
                Outcome::Failure
            })
        }
    }
}

fn probe(a: ProbeArgs) -> Result<Outcome, ToolError> {
    let shape = match a.d4_shape {
        ShapeArg::Paths => D4Shape::Paths { max_length: a.l },
        ShapeArg::Stars => D4Shape::Stars,
        ShapeArg::Any => D4Shape::Unrestricted,
    };
    run_sweeps(
        vec![probe_config(a.sweep.max_vertices.unwrap_or(12), shape)],
        &a.sweep,
    )
}
