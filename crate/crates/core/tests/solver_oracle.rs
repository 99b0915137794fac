//! The memoized solver against plain minimax.

mod oracles {
    pub mod naive;
}

use std::sync::Arc;

use edgegame::enumerate::enumerate_trees;
use edgegame::{Player, Solver, Tree, Variant};
use oracles::naive::Naive;

fn naive_winner(tree: &Tree, k: u8, variant: Variant) -> Player {
    if Naive::new(tree, k, variant).alice_wins() {
        Player::Alice
    } else {
        Player::Bob
    }
}

#[test]
fn matches_naive_minimax_up_to_six_edges() {
    for n in 1..=7 {
        for tree in enumerate_trees(n).unwrap() {
            let shared = Arc::new(tree.clone());
            let mut solver = Solver::new();
            for k in 1..=5 {
                for v in Variant::ALL {
                    let fast = solver.solve_initial(&shared, k, v).unwrap();
                    assert_eq!(fast, naive_winner(&tree, k, v), "{tree} k={k} {v}");
                }
            }
        }
    }
}

#[test]
fn four_edge_path_with_two_colors() {
    let tree = Tree::path(4);
    let expected = naive_winner(&tree, 2, Variant::BB);
    let got = Solver::new()
        .solve_initial(&Arc::new(tree), 2, Variant::BB)
        .unwrap();
    assert_eq!(got, expected);
    assert_eq!(got, Player::Bob);
}

#[test]
fn five_edge_path_index() {
    let tree = Tree::path(5);
    let oracle = (1..)
        .find(|&k| naive_winner(&tree, k, Variant::BB) == Player::Alice)
        .unwrap();
    let report = Solver::new()
        .game_chromatic_index(&Arc::new(tree), Variant::BB, true)
        .unwrap();
    assert_eq!(report.index, oracle);
    assert_eq!(report.index, 3);
    assert!(report.non_monotone.is_empty());
}
