//! Canonical keys against a brute-force orbit computation.

use std::collections::HashMap;
use std::sync::Arc;

use edgegame::enumerate::{enumerate_trees, random_tree};
use edgegame::{EdgeColoring, GameState, Player, Tree, TreeShape, Variant};
use proptest::prelude::*;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Edge permutations induced by the automorphisms of `tree`.
fn automorphisms(tree: &Tree) -> Vec<Vec<usize>> {
    let index: HashMap<(usize, usize), usize> = tree
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(e, &(u, v))| [((u, v), e), ((v, u), e)])
        .collect();
    permutations(tree.vertex_count())
        .into_iter()
        .filter_map(|p| {
            tree.edges()
                .iter()
                .map(|&(u, v)| index.get(&(p[u], p[v])).copied())
                .collect()
        })
        .collect()
}

fn proper_colorings(tree: &Tree, k: u8) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for e in 0..tree.edge_count() {
        let mut next = Vec::new();
        for partial in out {
            for c in 0..=k {
                let clash = c != 0 && tree.adjacent_edges(e).any(|f| f < e && partial[f] == c);
                if !clash {
                    let mut p = partial.clone();
                    p.push(c);
                    next.push(p);
                }
            }
        }
        out = next;
    }
    out
}

/// Smallest image of `colors` under automorphisms and color permutations.
fn orbit_min(colors: &[u8], auts: &[Vec<usize>], color_perms: &[Vec<usize>]) -> Vec<u8> {
    let mut best: Option<Vec<u8>> = None;
    for aut in auts {
        for sigma in color_perms {
            let mut image = vec![0u8; colors.len()];
            for (e, &c) in colors.iter().enumerate() {
                image[aut[e]] = if c == 0 {
                    0
                } else {
                    sigma[c as usize - 1] as u8 + 1
                };
            }
            if best.as_ref().is_none_or(|b| image < *b) {
                best = Some(image);
            }
        }
    }
    best.unwrap()
}

fn check_tree(tree: &Tree, k: u8) {
    let shape = TreeShape::new(tree).unwrap();
    let auts = automorphisms(tree);
    let color_perms = permutations(k as usize);
    let mut by_orbit = HashMap::new();
    let mut by_key = HashMap::new();
    for colors in proper_colorings(tree, k) {
        let orbit = orbit_min(&colors, &auts, &color_perms);
        let key = shape.key(&colors, k, Player::Bob);
        if let Some(prev) = by_orbit.insert(orbit.clone(), key) {
            assert_eq!(
                prev, key,
                "{tree}: equivalent colorings got different keys ({colors:?})"
            );
        }
        if let Some(prev) = by_key.insert(key, orbit.clone()) {
            assert_eq!(
                prev, orbit,
                "{tree}: inequivalent colorings share a key ({colors:?})"
            );
        }
    }
}

#[test]
fn keys_match_orbits_up_to_four_edges() {
    for n in 1..=5 {
        for tree in enumerate_trees(n).unwrap() {
            for k in 1..=3 {
                check_tree(&tree, k);
            }
        }
    }
}

#[test]
fn keys_match_orbits_on_larger_trees() {
    for n in 6..=7 {
        for tree in enumerate_trees(n).unwrap() {
            check_tree(&tree, 3);
        }
    }
    for n in 5..=6 {
        for tree in enumerate_trees(n).unwrap() {
            check_tree(&tree, 4);
        }
    }
}

#[test]
fn keys_match_orbits_on_symmetric_trees() {
    // Spiders and double brooms have large automorphism groups.
    let spider = Tree::new(7, vec![(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
    check_tree(&spider, 4);
    let broom = Tree::new(
        8,
        vec![(0, 1), (0, 2), (0, 3), (0, 4), (4, 5), (4, 6), (4, 7)],
    )
    .unwrap();
    check_tree(&broom, 4);
}

#[test]
fn distinct_trees_have_distinct_keys() {
    let mut seen = HashMap::new();
    for n in 1..=8 {
        for tree in enumerate_trees(n).unwrap() {
            let colors = vec![0; tree.edge_count()];
            let key = TreeShape::new(&tree)
                .unwrap()
                .key(&colors, 3, Player::Alice);
            assert!(seen.insert(key, tree.clone()).is_none(), "{tree}");
        }
    }
}

/// A reachable position: random legal placements from the uncolored tree.
fn random_position(tree: &Tree, k: u8, moves: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut st = GameState::new(Arc::new(tree.clone()), k, Variant::BB).unwrap();
    for _ in 0..moves {
        let Ok(legal) = st.legal_moves() else { break };
        let places: Vec<_> = legal
            .into_iter()
            .filter(|m| *m != edgegame::Move::Skip)
            .collect();
        let Some(&m) = places.choose(rng) else { break };
        st.play(m).unwrap();
    }
    st.colors().to_vec()
}

proptest! {
    #[test]
    fn keys_ignore_vertex_and_color_relabeling(seed in any::<u64>(), n in 2usize..=16, k in 3u8..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = random_tree(n, &mut rng);
        let moves = rng.random_range(0..n);
        let colors = random_position(&tree, k, moves, &mut rng);

        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let other = tree.relabeled(&perm);
        let mut sigma: Vec<u8> = (1..=k).collect();
        sigma.shuffle(&mut rng);
        let recolored: Vec<u8> = colors.iter().map(|&c| if c == 0 { 0 } else { sigma[c as usize - 1] }).collect();
        prop_assert!(EdgeColoring::from_colors(&other, recolored.clone(), k).is_ok());

        let a = TreeShape::new(&tree).unwrap().key(&colors, k, Player::Alice);
        let b = TreeShape::new(&other).unwrap().key(&recolored, k, Player::Alice);
        prop_assert_eq!(a, b);
    }
}
