//! Free-tree enumeration against labeled trees decoded from every Prüfer
//! sequence.

mod oracles {
    pub mod prufer;
}

use std::collections::HashSet;

use edgegame::enumerate::{enumerate_trees, tree_from_prufer};
use edgegame::Tree;
use oracles::prufer::{decode, free_code, from_tree, prufer_classes, worst_branches, MAX_N};

#[test]
fn enumeration_matches_prufer_oracle() {
    for n in 2..=MAX_N {
        let oracle = prufer_classes(n);
        let emitted: Vec<u64> = enumerate_trees(n)
            .unwrap()
            .map(|t| free_code(&from_tree(&t), n))
            .collect();
        let distinct: HashSet<u64> = emitted.iter().copied().collect();
        assert_eq!(
            distinct.len(),
            emitted.len(),
            "n = {n}: duplicate trees emitted"
        );
        assert_eq!(distinct, oracle, "n = {n}");
    }
}

#[test]
fn library_decoder_agrees() {
    let seqs: [&[usize]; 4] = [&[], &[0], &[3, 3, 3], &[4, 1, 1, 7, 0, 2]];
    for seq in seqs {
        let n = seq.len() + 2;
        let raw: Vec<u8> = seq.iter().map(|&x| x as u8).collect();
        assert_eq!(
            from_tree(&tree_from_prufer(seq)),
            decode(&raw, n),
            "{seq:?}"
        );
    }
}

#[test]
fn single_vertex() {
    let trees: Vec<Tree> = enumerate_trees(1).unwrap().collect();
    assert_eq!(trees.len(), 1);
    assert_eq!(trees[0].edge_count(), 0);
}

#[test]
fn larger_counts() {
    let expected = [(13, 1301), (14, 3159), (15, 7741), (16, 19320)];
    for (n, count) in expected {
        assert_eq!(enumerate_trees(n).unwrap().count(), count, "n = {n}");
    }
}

#[test]
fn emitted_trees_are_centroid_rooted() {
    for n in 1..=MAX_N {
        for t in enumerate_trees(n).unwrap() {
            assert!(worst_branches(&from_tree(&t), n)[0] <= n / 2, "{t}");
        }
    }
}
