//! Decomposition and star-node invariants over random reachable positions.

use std::sync::{Arc, OnceLock};

use edgegame::enumerate::{enumerate_trees, in_class, ClassSpec};
use edgegame::structure::{
    classify, count_colored_leaf_edges, decompose, detect_forbidden, star_nodes, Subtree,
};
use edgegame::{EdgeColoring, GameState, GameStatus, Move, Tree, Variant};
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn class_trees() -> &'static [Arc<Tree>] {
    static TREES: OnceLock<Vec<Arc<Tree>>> = OnceLock::new();
    TREES.get_or_init(|| {
        let spec = ClassSpec::degree_four_paths(2);
        (5..=13)
            .flat_map(|n| enumerate_trees(n).unwrap())
            .filter(|t| in_class(t, &spec))
            .map(Arc::new)
            .collect()
    })
}

fn random_position(tree: &Arc<Tree>, rng: &mut ChaCha8Rng) -> GameState {
    let mut st = GameState::new(tree.clone(), 5, Variant::BB).unwrap();
    let stop = rng.random_range(0..=tree.edge_count());
    while st.status() == GameStatus::Ongoing && tree.edge_count() - st.uncolored_count() < stop {
        let moves = st.legal_moves().unwrap();
        st.play(*moves.choose(rng).unwrap()).unwrap();
    }
    st
}

fn with_colors(st: &GameState, colors: Vec<u8>) -> GameState {
    let coloring = EdgeColoring::from_colors(st.tree(), colors, st.k()).unwrap();
    GameState::from_coloring(st.shared_tree().clone(), coloring, st.variant(), st.mover()).unwrap()
}

fn check_decomposition(st: &GameState) {
    let d = decompose(st);
    for e in 0..st.tree().edge_count() {
        let expected = if st.colors()[e] != 0 { 2 } else { 1 };
        assert_eq!(
            d.containing(e).len(),
            expected,
            "edge {e} in {:?}",
            st.colors()
        );
    }
    for s in &d.subtrees {
        assert_eq!(s.local_tree().edge_count() + 1, s.vertices().len());
    }
}

fn check_star_nodes(s: &Subtree) {
    let report = star_nodes(s);
    for &(v, _) in &report.star_nodes {
        let deg = s.degree_of(v).unwrap();
        assert!(deg == 3 || deg == 4, "star-node {v} of degree {deg}");
    }
    let lct = count_colored_leaf_edges(s);
    assert_eq!(report.star_nodes.is_empty(), lct < 3);
    let (three, four, total) = (
        report.count_with_degree(3),
        report.count_with_degree(4),
        report.star_nodes.len(),
    );
    if lct == 3 {
        assert_eq!((three, total), (1, 1));
    }
    if lct == 4 {
        assert!(
            (three == 2 && total == 2) ^ (four == 1 && total == 1),
            "{report:?}"
        );
    }
}

/// Coloring one edge of a subtree with at most three colored edges never
/// leaves two pieces with three or more colored edges each.
fn check_counting(st: &GameState) {
    let d = decompose(st);
    for s in d.subtrees.iter().filter(|s| s.colored_edges().len() <= 3) {
        for e in s.uncolored_edges() {
            let Some(c) = st.available_colors(e).unwrap().iter().next() else {
                continue;
            };
            let mut colors = st.colors().to_vec();
            colors[e] = c;
            let next = with_colors(st, colors);
            let after = decompose(&next);
            let heavy = after
                .containing(e)
                .iter()
                .filter(|&&i| after.subtrees[i].colored_edges().len() >= 3)
                .count();
            assert!(heavy < 2, "edge {e} in {:?}", st.colors());
        }
    }
}

/// Recoloring an edge away from a subtree leaves its classification alone.
fn check_stability(st: &GameState, rng: &mut ChaCha8Rng) {
    let d = decompose(st);
    let Some(s) = d.subtrees.choose(rng) else {
        return;
    };
    let tree = st.tree();
    let far: Vec<usize> = (0..tree.edge_count())
        .filter(|&e| {
            let (u, v) = tree.edge(e);
            s.vertices().binary_search(&u).is_err() && s.vertices().binary_search(&v).is_err()
        })
        .collect();
    let Some(&f) = far.choose(rng) else { return };
    let mut colors = st.colors().to_vec();
    colors[f] = 0;
    let cleared = with_colors(st, colors);
    let Some(c) = cleared.available_colors(f).unwrap().iter().last() else {
        return;
    };
    let mut colors = cleared.colors().to_vec();
    colors[f] = c;
    let other = with_colors(st, colors);
    let same = decompose(&other)
        .subtrees
        .into_iter()
        .find(|t| t.edges() == s.edges() && t.vertices() == s.vertices());
    let same = same.expect("subtree survives a distant recoloring");
    assert_eq!(classify(&same), classify(s));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn decomposition_invariants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = class_trees().choose(&mut rng).unwrap();
        for _ in 0..8 {
            let st = random_position(tree, &mut rng);
            check_decomposition(&st);
            for s in &decompose(&st).subtrees {
                check_star_nodes(s);
            }
            check_counting(&st);
            check_stability(&st, &mut rng);
        }
    }
}

#[test]
fn class_excludes_forbidden_patterns() {
    for t in class_trees() {
        let f = detect_forbidden(t);
        assert!(!f.has_s34 && !f.has_p44, "{t}");
    }
}

#[test]
fn two_colored_edges_then_one_move() {
    // Path with colored ends; coloring any middle edge splits the two.
    let tree = Arc::new(Tree::path(5));
    let st = with_colors(
        &GameState::new(tree, 5, Variant::BB).unwrap(),
        vec![1, 0, 0, 0, 2],
    );
    for e in 1..4 {
        let next = st.apply_move(Move::Place { edge: e, color: 3 }).unwrap();
        let d = decompose(&next);
        let counts: Vec<usize> = d
            .containing(e)
            .iter()
            .map(|&i| d.subtrees[i].colored_edges().len())
            .collect();
        assert!(
            counts.iter().all(|&c| c <= 4) && counts.iter().any(|&c| c <= 2),
            "{counts:?}"
        );
    }
}
