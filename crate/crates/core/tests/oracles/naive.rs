//! Plain minimax over raw edge colorings: no table, no symmetry, and Bob
//! only wins when the player who has to color cannot.

use edgegame::{Player, Tree, Variant};

pub struct Naive<'a> {
    edges: &'a [(usize, usize)],
    k: u8,
    variant: Variant,
    colors: Vec<u8>,
}

impl<'a> Naive<'a> {
    pub fn new(tree: &'a Tree, k: u8, variant: Variant) -> Self {
        Naive {
            edges: tree.edges(),
            k,
            variant,
            colors: vec![0; tree.edge_count()],
        }
    }

    fn fits(&self, e: usize, c: u8) -> bool {
        let (a, b) = self.edges[e];
        self.edges.iter().enumerate().all(|(f, &(x, y))| {
            f == e || self.colors[f] != c || (x != a && x != b && y != a && y != b)
        })
    }

    /// Whether Alice wins the uncolored position.
    pub fn alice_wins(&mut self) -> bool {
        self.value(self.variant.first_mover)
    }

    fn value(&mut self, mover: Player) -> bool {
        if self.colors.iter().all(|&c| c != 0) {
            return true;
        }
        let want = mover == Player::Alice;
        let mut any_place = false;
        for e in 0..self.edges.len() {
            if self.colors[e] != 0 {
                continue;
            }
            for c in 1..=self.k {
                if !self.fits(e, c) {
                    continue;
                }
                any_place = true;
                self.colors[e] = c;
                let v = self.value(mover.opponent());
                self.colors[e] = 0;
                if v == want {
                    return want;
                }
            }
        }
        if self.variant.skipper == Some(mover) {
            return self.value(mover.opponent());
        }
        if !any_place {
            return false;
        }
        !want
    }
}
