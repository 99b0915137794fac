//! Exhaustive sweeps over tree classes and sampled structural checks.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use edgegame::enumerate::{
    enumerate_trees, in_class, is_caterpillar, ClassSpec, D4Shape, DEFAULT_MAX_VERTICES,
};
use edgegame::solver::DEFAULT_NODE_BUDGET;
use edgegame::structure::{count_colored_leaf_edges, decompose, star_nodes};
use edgegame::{EdgeColoring, GameState, GameStatus, SolveError, Solver, Tree, TreeShape, Variant};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::io::{
    append_records, position_text, read_records, summary_path, write_summary, SolveRecord,
    ToolError,
};
use crate::parallel::{status_label, with_threads};

/// Palette sizes to solve for each tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Palette {
    Fixed(Vec<u8>),
    /// `k = Δ + offset`.
    DeltaPlus(u8),
}

/// What a sweep expects of every tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    /// Alice wins every solved palette; any Bob win is a counterexample.
    AliceWins,
    /// The game chromatic index is at most the bound. A Bob win at a
    /// palette triggers an index computation; a tree is a counterexample
    /// only if its index exceeds the bound.
    IndexAtMost(u8),
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub label: String,
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub class: ClassSpec,
    pub caterpillars_only: bool,
    pub palette: Palette,
    pub variant: Variant,
    pub expect: Expectation,
    pub budget: u64,
    /// `(index, count)`: this run handles every `count`-th in-class tree.
    pub shard: (usize, usize),
    pub threads: Option<usize>,
    /// Record file; the CSV summary goes next to it.
    pub output: Option<PathBuf>,
    /// Reuse records already present in `output`.
    pub resume: bool,
}

impl SweepConfig {
    pub fn new(
        label: impl Into<String>,
        max_vertices: usize,
        class: ClassSpec,
        palette: Palette,
    ) -> Self {
        SweepConfig {
            label: label.into(),
            min_vertices: 1,
            max_vertices,
            class,
            caterpillars_only: false,
            palette,
            variant: Variant::BB,
            expect: Expectation::AliceWins,
            budget: DEFAULT_NODE_BUDGET,
            shard: (0, 1),
            threads: None,
            output: None,
            resume: false,
        }
    }

    pub fn validate(&self) -> Result<(), ToolError> {
        let bad = |msg: String| Err(ToolError::Invalid(msg));
        if self.min_vertices == 0 || self.min_vertices > self.max_vertices {
            return bad(format!(
                "empty vertex range {}..={}",
                self.min_vertices, self.max_vertices
            ));
        }
        if self.max_vertices > DEFAULT_MAX_VERTICES {
            return bad(format!(
                "at most {DEFAULT_MAX_VERTICES} vertices can be enumerated"
            ));
        }
        if let Palette::Fixed(ks) = &self.palette {
            if ks.is_empty() || ks.contains(&0) {
                return bad("palette sizes must be at least 1".into());
            }
        }
        if self.shard.1 == 0 || self.shard.0 >= self.shard.1 {
            return bad(format!("bad shard {}/{}", self.shard.0, self.shard.1));
        }
        if self.resume && self.output.is_none() {
            return bad("resuming needs an output file".into());
        }
        Ok(())
    }

    /// Short description of the tree class, used in records.
    pub fn class_name(&self) -> String {
        let mut name = match self.class.d4_shape {
            D4Shape::Paths { max_length } => format!("paths<={max_length}"),
            D4Shape::Stars => "stars".to_string(),
            D4Shape::Unrestricted => "any".to_string(),
        };
        if self.caterpillars_only {
            name.push_str("+caterpillar");
        }
        name
    }

    fn scale(&self) -> String {
        let delta = match self.class.delta_exact {
            Some(d) => format!("max degree {d}"),
            None if self.class.delta_max < usize::MAX => {
                format!("max degree <= {}", self.class.delta_max)
            }
            None => "any max degree".to_string(),
        };
        format!(
            "trees with {}..={} vertices, {delta}, degree-4 shape {}, palette {:?}, variant {}, budget {}",
            self.min_vertices,
            self.max_vertices,
            self.class_name(),
            self.palette,
            self.variant,
            self.budget
        )
    }

    fn admits(&self, tree: &Tree) -> bool {
        in_class(tree, &self.class) && (!self.caterpillars_only || is_caterpillar(tree))
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub label: String,
    /// What was covered, for report headers.
    pub scale: String,
    /// In-class trees handled by this shard.
    pub trees: usize,
    pub records: Vec<SolveRecord>,
    pub alice_wins: usize,
    pub bob_wins: usize,
    /// Records taken from an earlier run instead of being solved again.
    pub resumed: usize,
    pub budget_exhausted: Vec<SolveRecord>,
    pub counterexamples: Vec<SolveRecord>,
    /// Bob wins at a palette although the index is within the bound.
    pub non_monotone: Vec<SolveRecord>,
}

impl SweepReport {
    /// No counterexample and nothing left undecided.
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.budget_exhausted.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} trees, {} solves ({} resumed), {} Alice, {} Bob, {} over budget, {} counterexamples",
            self.label,
            self.trees,
            self.records.len(),
            self.resumed,
            self.alice_wins,
            self.bob_wins,
            self.budget_exhausted.len(),
            self.counterexamples.len()
        )
    }
}

/// The in-class trees of a sweep in enumeration order, restricted to its shard.
pub fn sweep_trees(config: &SweepConfig) -> Result<Vec<Tree>, ToolError> {
    config.validate()?;
    let (index, count) = config.shard;
    let mut out = Vec::new();
    let mut seen = 0usize;
    for n in config.min_vertices..=config.max_vertices {
        let trees = enumerate_trees(n).map_err(|e| ToolError::Invalid(e.to_string()))?;
        for tree in trees.filter(|t| config.admits(t)) {
            if seen % count == index {
                out.push(tree);
            }
            seen += 1;
        }
    }
    Ok(out)
}

/// Solves every tree of the sweep and checks the expectation.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport, ToolError> {
    let trees = sweep_trees(config)?;
    let previous: HashMap<(String, u8, String), SolveRecord> = match (&config.output, config.resume)
    {
        (Some(path), true) => read_records(path)?
            .into_iter()
            .map(|r| (r.key(), r))
            .collect(),
        _ => HashMap::new(),
    };
    let shape_name = config.class_name();
    let variant = config.variant.to_string();

    let per_tree: Vec<Vec<(SolveRecord, bool)>> = with_threads(config.threads, || {
        trees
            .par_iter()
            .map(|tree| solve_tree(config, tree, &shape_name, &variant, &previous))
            .collect()
    });

    let mut report = SweepReport {
        label: config.label.clone(),
        scale: config.scale(),
        trees: trees.len(),
        ..Default::default()
    };
    let mut fresh = Vec::new();
    for (record, reused) in per_tree.into_iter().flatten() {
        if reused {
            report.resumed += 1;
        } else {
            fresh.push(record.clone());
        }
        match record.winner.as_str() {
            "AliceWins" => report.alice_wins += 1,
            "BobWins" => {
                report.bob_wins += 1;
                match config.expect {
                    Expectation::AliceWins => report.counterexamples.push(record.clone()),
                    Expectation::IndexAtMost(bound) => match record.index {
                        Some(i) if i <= bound => report.non_monotone.push(record.clone()),
                        Some(_) => report.counterexamples.push(record.clone()),
                        None => report.budget_exhausted.push(record.clone()),
                    },
                }
            }
            _ => report.budget_exhausted.push(record.clone()),
        }
        report.records.push(record);
    }
    if let Some(path) = &config.output {
        if !config.resume {
            let _ = std::fs::remove_file(path);
        }
        append_records(path, &fresh)?;
        write_summary(&summary_path(path), &report.records)?;
    }
    Ok(report)
}

fn solve_tree(
    config: &SweepConfig,
    tree: &Tree,
    shape_name: &str,
    variant: &str,
    previous: &HashMap<(String, u8, String), SolveRecord>,
) -> Vec<(SolveRecord, bool)> {
    let tree = Arc::new(tree.clone());
    let id = TreeShape::new(&tree).map(|s| s.id()).unwrap_or_default();
    let delta = tree.max_degree();
    let ks = match &config.palette {
        Palette::Fixed(ks) => ks.clone(),
        Palette::DeltaPlus(d) => vec![(delta as u8).saturating_add(*d).max(1)],
    };
    let mut solver = Solver::new().budget(config.budget);
    let mut out = Vec::new();
    for k in ks {
        if let Some(r) = previous.get(&(id.clone(), k, variant.to_string())) {
            out.push((r.clone(), true));
            continue;
        }
        let start = Instant::now();
        let state = GameState::new(tree.clone(), k, config.variant);
        let (winner, nodes) = match state
            .map_err(SolveError::from)
            .and_then(|s| solver.solve(&s))
        {
            Ok(r) => (status_label(r.winner).to_string(), r.nodes_explored),
            Err(SolveError::Budget { budget }) => ("Budget".to_string(), budget),
            Err(e) => (format!("Error: {e}"), 0),
        };
        let index = match config.expect {
            Expectation::IndexAtMost(_) if winner == "BobWins" => solver
                .game_chromatic_index(&tree, config.variant, false)
                .ok()
                .map(|r| r.index),
            _ => None,
        };
        let record = SolveRecord {
            n: tree.vertex_count(),
            canonical_id: id.clone(),
            delta,
            d4_shape: shape_name.to_string(),
            k,
            variant: variant.to_string(),
            winner,
            nodes,
            elapsed_ms: start.elapsed().as_millis() as u64,
            edges: tree.edges().to_vec(),
            index,
        };
        out.push((record, false));
    }
    out
}

/// A record whose winner differs from the stored baseline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub canonical_id: String,
    pub k: u8,
    pub variant: String,
    pub baseline: String,
    pub current: String,
}

/// Compares a report against an earlier record file. Entries missing from
/// either side are ignored.
pub fn compare_baseline(report: &SweepReport, baseline: &Path) -> Result<Vec<Mismatch>, ToolError> {
    let stored: HashMap<_, _> = read_records(baseline)?
        .into_iter()
        .map(|r| (r.key(), r.winner))
        .collect();
    Ok(report
        .records
        .iter()
        .filter_map(|r| {
            let old = stored.get(&r.key())?;
            (*old != r.winner).then(|| Mismatch {
                canonical_id: r.canonical_id.clone(),
                k: r.k,
                variant: r.variant.clone(),
                baseline: old.clone(),
                current: r.winner.clone(),
            })
        })
        .collect())
}

/// Trees with maximum degree 4 whose degree-4 vertices induce paths of
/// length at most `l`, solved at 5 colors.
pub fn paths_config(max_vertices: usize, l: usize) -> SweepConfig {
    SweepConfig::new(
        format!("paths<={l} at k=5"),
        max_vertices,
        ClassSpec::degree_four_paths(l),
        Palette::Fixed(vec![5]),
    )
}

pub fn verify_theorem1(max_vertices: usize) -> Result<SweepReport, ToolError> {
    run_sweep(&paths_config(max_vertices, 2))
}

/// Vertex caps for the known-bound sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PriorScales {
    /// All trees at `k = Δ + 2`.
    pub all_trees: usize,
    /// Maximum degree 3 at `k = 4`.
    pub delta_three: usize,
    /// Maximum degree 4 with independent 4-vertices, and caterpillars, at `k = 5`.
    pub delta_four: usize,
}

impl Default for PriorScales {
    fn default() -> Self {
        PriorScales {
            all_trees: 9,
            delta_three: 10,
            delta_four: 10,
        }
    }
}

impl PriorScales {
    pub fn uniform(n: usize) -> Self {
        PriorScales {
            all_trees: n,
            delta_three: n,
            delta_four: n,
        }
    }
}

pub fn prior_bound_configs(scales: PriorScales) -> Vec<SweepConfig> {
    let mut caterpillars = SweepConfig::new(
        "caterpillars at k=5",
        scales.delta_four,
        ClassSpec::max_degree(4),
        Palette::Fixed(vec![5]),
    );
    caterpillars.caterpillars_only = true;
    vec![
        SweepConfig::new(
            "all trees at k=delta+2",
            scales.all_trees,
            ClassSpec::all(),
            Palette::DeltaPlus(2),
        ),
        SweepConfig::new(
            "max degree 3 at k=4",
            scales.delta_three,
            ClassSpec::max_degree(3),
            Palette::Fixed(vec![4]),
        ),
        SweepConfig::new(
            "independent 4-vertices at k=5",
            scales.delta_four,
            ClassSpec::degree_four_paths(0),
            Palette::Fixed(vec![5]),
        ),
        caterpillars,
    ]
}

pub fn verify_prior_bounds(scales: PriorScales) -> Result<Vec<SweepReport>, ToolError> {
    prior_bound_configs(scales).iter().map(run_sweep).collect()
}

/// Maximum degree 4 with degree-4 vertices inducing `shape`, checking
/// that the index stays at most 5.
pub fn probe_config(max_vertices: usize, shape: D4Shape) -> SweepConfig {
    let class = ClassSpec {
        delta_exact: Some(4),
        delta_max: 4,
        d4_shape: shape,
    };
    let mut config = SweepConfig::new("probe at k=5", max_vertices, class, Palette::Fixed(vec![5]));
    config.label = format!("probe {} at k=5", config.class_name());
    config.expect = Expectation::IndexAtMost(5);
    config
}

pub fn probe_conjecture(max_vertices: usize, shape: D4Shape) -> Result<SweepReport, ToolError> {
    run_sweep(&probe_config(max_vertices, shape))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvariantKind {
    /// A colored edge not in exactly two pieces, or an uncolored one not in exactly one.
    DoubleCounting,
    /// A star-node whose degree is not 3 or 4.
    StarNodeDegree,
    /// Star-nodes present exactly when there are at least three colored leaf-edges.
    StarNodeExistence,
    /// Three colored leaf-edges without exactly one 3-SN.
    ThreeLeaves,
    /// Four colored leaf-edges without two 3-SNs or one 4-SN.
    FourLeaves,
    /// One move on a piece with at most three colored edges left two
    /// pieces with three or more each.
    Counting,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: InvariantKind,
    /// The offending position in the position text format.
    pub position: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantReport {
    pub positions: usize,
    pub subtrees: usize,
    pub moves_checked: usize,
    pub violations: Vec<Violation>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Vertex range of the trees sampled by [`check_lemma_invariants`]: up to
/// 12 edges.
pub const INVARIANT_TREE_SIZES: std::ops::RangeInclusive<usize> = 5..=13;

/// Samples random reachable positions on random trees of the main class
/// (degree-4 vertices inducing paths of length at most 2) and checks the
/// decomposition invariants on each.
pub fn check_lemma_invariants(samples: usize, seed: u64) -> InvariantReport {
    let spec = ClassSpec::degree_four_paths(2);
    let trees: Vec<Arc<Tree>> = INVARIANT_TREE_SIZES
        .flat_map(|n| enumerate_trees(n).expect("within cap"))
        .filter(|t| in_class(t, &spec))
        .map(Arc::new)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = InvariantReport::default();
    for _ in 0..samples {
        let tree = trees.choose(&mut rng).expect("class is nonempty");
        let state = random_reachable(tree, 5, &mut rng);
        check_position(&state, &mut report);
        report.positions += 1;
    }
    report
}

/// Plays random legal moves (skips included) from the uncolored BB
/// position for a random number of plies.
pub fn random_reachable<R: Rng>(tree: &Arc<Tree>, k: u8, rng: &mut R) -> GameState {
    let mut state = GameState::new(tree.clone(), k, Variant::BB).expect("valid palette");
    let plies = rng.random_range(0..=2 * tree.edge_count());
    for _ in 0..plies {
        if state.status() != GameStatus::Ongoing {
            break;
        }
        let moves = state.legal_moves().expect("ongoing");
        state
            .play(*moves.choose(rng).expect("ongoing positions have moves"))
            .expect("legal");
    }
    state
}

fn check_position(state: &GameState, report: &mut InvariantReport) {
    let fail = |kind, detail: String| Violation {
        kind,
        position: position_text(state.tree(), state.colors()),
        detail,
    };
    let mut found = Vec::new();
    let d = decompose(state);
    for e in 0..state.tree().edge_count() {
        let expected = if state.colors()[e] != 0 { 2 } else { 1 };
        if d.containing(e).len() != expected {
            found.push(fail(
                InvariantKind::DoubleCounting,
                format!("edge {e} lies in {} pieces", d.containing(e).len()),
            ));
        }
    }
    for s in &d.subtrees {
        report.subtrees += 1;
        let sn = star_nodes(s);
        for &(v, _) in &sn.star_nodes {
            let deg = s.degree_of(v).unwrap_or(0);
            if deg != 3 && deg != 4 {
                found.push(fail(
                    InvariantKind::StarNodeDegree,
                    format!("star-node {v} has degree {deg}"),
                ));
            }
        }
        let lct = count_colored_leaf_edges(s);
        if sn.star_nodes.is_empty() != (lct < 3) {
            found.push(fail(
                InvariantKind::StarNodeExistence,
                format!(
                    "{lct} colored leaf-edges, {} star-nodes",
                    sn.star_nodes.len()
                ),
            ));
        }
        let (three, four, total) = (
            sn.count_with_degree(3),
            sn.count_with_degree(4),
            sn.star_nodes.len(),
        );
        if lct == 3 && (three, total) != (1, 1) {
            found.push(fail(
                InvariantKind::ThreeLeaves,
                format!("star-nodes {:?}", sn.star_nodes),
            ));
        }
        if lct == 4 && !((three == 2 && total == 2) ^ (four == 1 && total == 1)) {
            found.push(fail(
                InvariantKind::FourLeaves,
                format!("star-nodes {:?}", sn.star_nodes),
            ));
        }
        if s.colored_edges().len() <= 3 {
            for e in s.uncolored_edges() {
                let Some(c) = state.available_colors(e).ok().and_then(|a| a.iter().next()) else {
                    continue;
                };
                report.moves_checked += 1;
                let mut colors = state.colors().to_vec();
                colors[e] = c;
                let coloring = EdgeColoring::from_colors(state.tree(), colors, state.k())
                    .expect("available color");
                let next = GameState::from_coloring(
                    state.shared_tree().clone(),
                    coloring,
                    state.variant(),
                    state.mover(),
                )
                .expect("proper coloring");
                let after = decompose(&next);
                let heavy = after
                    .containing(e)
                    .iter()
                    .filter(|&&i| after.subtrees[i].colored_edges().len() >= 3)
                    .count();
                if heavy >= 2 {
                    found.push(fail(
                        InvariantKind::Counting,
                        format!("coloring edge {e} with {c}"),
                    ));
                }
            }
        }
    }
    report.violations.extend(found);
}
