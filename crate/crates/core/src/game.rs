//! Rules of the edge-coloring game under the six first-mover/skipper
//! variants.
//!
//! A position is over as soon as every edge is colored (Alice wins) or some
//! uncolored edge has no available color left (Bob wins). Available sets
//! only shrink, so a dead edge can never be revived and the second rule
//! merely decides the game early.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::tree::{ColorSet, EdgeColoring, Tree, MAX_COLORS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }

    fn letter(self) -> char {
        match self {
            Player::Alice => 'A',
            Player::Bob => 'B',
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "Alice",
            Player::Bob => "Bob",
        })
    }
}

impl FromStr for Player {
    type Err = VariantParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "alice" | "a" => Ok(Player::Alice),
            "bob" | "b" => Ok(Player::Bob),
            _ => Err(VariantParseError),
        }
    }
}

/// Who moves first and who (if anyone) may skip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Variant {
    pub first_mover: Player,
    pub skipper: Option<Player>,
}

impl Variant {
    /// Bob begins and may skip.
    pub const BB: Variant = Variant {
        first_mover: Player::Bob,
        skipper: Some(Player::Bob),
    };

    /// All six variants in the order `A-`, `B-`, `AA`, `AB`, `BA`, `BB`.
    pub const ALL: [Variant; 6] = [
        Variant {
            first_mover: Player::Alice,
            skipper: None,
        },
        Variant {
            first_mover: Player::Bob,
            skipper: None,
        },
        Variant {
            first_mover: Player::Alice,
            skipper: Some(Player::Alice),
        },
        Variant {
            first_mover: Player::Alice,
            skipper: Some(Player::Bob),
        },
        Variant {
            first_mover: Player::Bob,
            skipper: Some(Player::Alice),
        },
        Variant::BB,
    ];

    /// Two-letter name: first mover, then skipper (`-` for none).
    pub fn name(self) -> [u8; 2] {
        [
            self.first_mover.letter() as u8,
            self.skipper.map_or(b'-', |p| p.letter() as u8),
        ]
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.name();
        write!(f, "{}{}", a as char, b as char)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("unknown variant or player (expected one of A-, B-, AA, AB, BA, BB / alice, bob)")]
pub struct VariantParseError;

impl FromStr for Variant {
    type Err = VariantParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let b = s.trim().as_bytes();
        if b.len() != 2 {
            return Err(VariantParseError);
        }
        let player = |c: u8| match c.to_ascii_uppercase() {
            b'A' => Some(Player::Alice),
            b'B' => Some(Player::Bob),
            _ => None,
        };
        let first_mover = player(b[0]).ok_or(VariantParseError)?;
        let skipper = match b[1] {
            b'-' => None,
            c => Some(player(c).ok_or(VariantParseError)?),
        };
        Ok(Variant {
            first_mover,
            skipper,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Skip,
    Place { edge: usize, color: u8 },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Skip => f.write_str("skip"),
            Move::Place { edge, color } => write!(f, "edge {edge} color {color}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameStatus {
    Ongoing,
    AliceWins,
    BobWins,
}

impl GameStatus {
    pub fn winner(self) -> Option<Player> {
        match self {
            GameStatus::Ongoing => None,
            GameStatus::AliceWins => Some(Player::Alice),
            GameStatus::BobWins => Some(Player::Bob),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum IllegalMove {
    #[error("the game is already over")]
    GameOver,
    #[error("edge {edge} does not exist")]
    EdgeOutOfRange { edge: usize },
    #[error("edge {edge} is already colored")]
    EdgeOccupied { edge: usize },
    #[error("color {color} is outside the palette 1..={k}")]
    ColorOutOfPalette { color: u8, k: u8 },
    #[error("color {color} is already used on an edge adjacent to edge {edge}")]
    ColorConflict { edge: usize, color: u8 },
    #[error("{player} is not allowed to skip in this variant")]
    SkipNotPermitted { player: Player },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("palette size {k} must be between 1 and {MAX_COLORS}")]
    InvalidPalette { k: u8 },
    #[error("the position is terminal")]
    Terminal,
    #[error("edge {edge} is already colored")]
    EdgeColored { edge: usize },
    #[error("edge {edge} does not exist")]
    EdgeOutOfRange { edge: usize },
    #[error("coloring does not match the tree or palette")]
    BadColoring,
}

/// A full game position: tree, proper partial coloring, variant and mover.
#[derive(Clone, Debug)]
pub struct GameState {
    tree: Arc<Tree>,
    coloring: EdgeColoring,
    /// Colors present on the edges at each vertex.
    at_vertex: Vec<ColorSet>,
    uncolored: usize,
    variant: Variant,
    mover: Player,
}

impl PartialEq for GameState {
    fn eq(&self, other: &Self) -> bool {
        *self.tree == *other.tree
            && self.coloring == other.coloring
            && self.variant == other.variant
            && self.mover == other.mover
    }
}

impl Eq for GameState {}

impl GameState {
    /// The uncolored starting position; the variant's first mover is to move.
    pub fn new(tree: Arc<Tree>, k: u8, variant: Variant) -> Result<Self, GameError> {
        let coloring = EdgeColoring::uncolored(tree.edge_count(), k);
        GameState::from_coloring(tree, coloring, variant, variant.first_mover)
    }

    pub fn from_coloring(
        tree: Arc<Tree>,
        coloring: EdgeColoring,
        variant: Variant,
        mover: Player,
    ) -> Result<Self, GameError> {
        let k = coloring.k();
        if k == 0 || k > MAX_COLORS {
            return Err(GameError::InvalidPalette { k });
        }
        if coloring.colors().len() != tree.edge_count()
            || coloring.colors().iter().any(|&c| c > k)
            || !coloring.is_proper(&tree)
        {
            return Err(GameError::BadColoring);
        }
        let mut at_vertex = vec![ColorSet::EMPTY; tree.vertex_count()];
        let mut uncolored = 0;
        for (e, &(u, v)) in tree.edges().iter().enumerate() {
            let c = coloring.color(e);
            if c == 0 {
                uncolored += 1;
            } else {
                at_vertex[u].insert(c);
                at_vertex[v].insert(c);
            }
        }
        Ok(GameState {
            tree,
            coloring,
            at_vertex,
            uncolored,
            variant,
            mover,
        })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn shared_tree(&self) -> &Arc<Tree> {
        &self.tree
    }

    pub fn coloring(&self) -> &EdgeColoring {
        &self.coloring
    }

    pub fn colors(&self) -> &[u8] {
        self.coloring.colors()
    }

    pub fn k(&self) -> u8 {
        self.coloring.k()
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn mover(&self) -> Player {
        self.mover
    }

    pub fn uncolored_count(&self) -> usize {
        self.uncolored
    }

    pub fn can_skip(&self) -> bool {
        self.variant.skipper == Some(self.mover)
    }

    /// Colors present at vertex `v`.
    pub fn colors_at(&self, v: usize) -> ColorSet {
        self.at_vertex[v]
    }

    /// Colors that may legally go on the uncolored edge `e`.
    pub fn available_colors(&self, e: usize) -> Result<ColorSet, GameError> {
        if e >= self.tree.edge_count() {
            return Err(GameError::EdgeOutOfRange { edge: e });
        }
        if self.coloring.is_colored(e) {
            return Err(GameError::EdgeColored { edge: e });
        }
        Ok(self.available_unchecked(e))
    }

    #[inline]
    pub(crate) fn available_unchecked(&self, e: usize) -> ColorSet {
        let (u, v) = self.tree.edge(e);
        ColorSet::palette(self.k()).difference(self.at_vertex[u].union(self.at_vertex[v]))
    }

    /// Uncolored edges with no available color.
    pub fn dead_edges(&self) -> Vec<usize> {
        (0..self.tree.edge_count())
            .filter(|&e| !self.coloring.is_colored(e) && self.available_unchecked(e).is_empty())
            .collect()
    }

    pub fn status(&self) -> GameStatus {
        if self.uncolored == 0 {
            return GameStatus::AliceWins;
        }
        let dead = (0..self.tree.edge_count())
            .any(|e| !self.coloring.is_colored(e) && self.available_unchecked(e).is_empty());
        if dead {
            GameStatus::BobWins
        } else {
            GameStatus::Ongoing
        }
    }

    /// Status after placing on `e`, assuming the position before the move
    /// was ongoing: only edges next to `e` can have died.
    pub(crate) fn status_after_place(&self, e: usize) -> GameStatus {
        if self.uncolored == 0 {
            return GameStatus::AliceWins;
        }
        let dead = self
            .tree
            .adjacent_edges(e)
            .any(|f| !self.coloring.is_colored(f) && self.available_unchecked(f).is_empty());
        if dead {
            GameStatus::BobWins
        } else {
            GameStatus::Ongoing
        }
    }

    /// All legal moves of an ongoing position: `Skip` first when the mover
    /// may skip, then placements ordered by edge index and color.
    pub fn legal_moves(&self) -> Result<Vec<Move>, GameError> {
        if self.status() != GameStatus::Ongoing {
            return Err(GameError::Terminal);
        }
        let mut moves = Vec::new();
        if self.can_skip() {
            moves.push(Move::Skip);
        }
        for e in 0..self.tree.edge_count() {
            if !self.coloring.is_colored(e) {
                moves.extend(
                    self.available_unchecked(e)
                        .iter()
                        .map(|color| Move::Place { edge: e, color }),
                );
            }
        }
        Ok(moves)
    }

    pub fn check_move(&self, m: Move) -> Result<(), IllegalMove> {
        if self.status() != GameStatus::Ongoing {
            return Err(IllegalMove::GameOver);
        }
        match m {
            Move::Skip if self.can_skip() => Ok(()),
            Move::Skip => Err(IllegalMove::SkipNotPermitted { player: self.mover }),
            Move::Place { edge, color } => {
                if edge >= self.tree.edge_count() {
                    return Err(IllegalMove::EdgeOutOfRange { edge });
                }
                if self.coloring.is_colored(edge) {
                    return Err(IllegalMove::EdgeOccupied { edge });
                }
                if color == 0 || color > self.k() {
                    return Err(IllegalMove::ColorOutOfPalette { color, k: self.k() });
                }
                if !self.available_unchecked(edge).contains(color) {
                    return Err(IllegalMove::ColorConflict { edge, color });
                }
                Ok(())
            }
        }
    }

    /// Returns the position after `m`.
    pub fn apply_move(&self, m: Move) -> Result<GameState, IllegalMove> {
        let mut next = self.clone();
        next.play(m)?;
        Ok(next)
    }

    /// Applies `m` in place after validating it.
    pub fn play(&mut self, m: Move) -> Result<(), IllegalMove> {
        self.check_move(m)?;
        self.play_unchecked(m);
        Ok(())
    }

    #[inline]
    pub(crate) fn play_unchecked(&mut self, m: Move) {
        if let Move::Place { edge, color } = m {
            let (u, v) = self.tree.edge(edge);
            self.coloring.set(edge, color);
            self.at_vertex[u].insert(color);
            self.at_vertex[v].insert(color);
            self.uncolored -= 1;
        }
        self.mover = self.mover.opponent();
    }

    /// Reverts `m`, which must be the last move applied to this state.
    pub fn undo(&mut self, m: Move) {
        if let Move::Place { edge, color } = m {
            debug_assert_eq!(self.coloring.color(edge), color);
            let (u, v) = self.tree.edge(edge);
            self.coloring.set(edge, 0);
            // Proper coloring: no other edge at u or v carries `color`.
            self.at_vertex[u].remove(color);
            self.at_vertex[v].remove(color);
            self.uncolored += 1;
        }
        self.mover = self.mover.opponent();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn state(tree: Tree, k: u8, variant: &str, mover: Player) -> GameState {
        let variant: Variant = variant.parse().unwrap();
        let n = tree.edge_count();
        GameState::from_coloring(
            Arc::new(tree),
            EdgeColoring::uncolored(n, k),
            variant,
            mover,
        )
        .unwrap()
    }

    #[test]
    fn variant_names_round_trip() {
        let names: Vec<_> = Variant::ALL.iter().map(|v| alloc::format!("{v}")).collect();
        assert_eq!(names, ["A-", "B-", "AA", "AB", "BA", "BB"]);
        for v in Variant::ALL {
            assert_eq!(alloc::format!("{v}").parse::<Variant>(), Ok(v));
        }
        assert!("BX".parse::<Variant>().is_err());
        assert!("B".parse::<Variant>().is_err());
        assert_eq!("bb".parse::<Variant>(), Ok(Variant::BB));
    }

    #[test]
    fn available_colors_examples() {
        let s = state(Tree::path(1), 5, "BB", Player::Bob);
        assert_eq!(
            s.available_colors(0).unwrap().iter().collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5]
        );

        let s = state(Tree::path(3), 5, "BB", Player::Bob)
            .apply_move(Move::Place { edge: 0, color: 1 })
            .unwrap()
            .apply_move(Move::Place { edge: 2, color: 2 })
            .unwrap();
        assert_eq!(
            s.available_colors(1).unwrap().iter().collect::<Vec<_>>(),
            vec![3, 4, 5]
        );
        assert_eq!(
            s.available_colors(0),
            Err(GameError::EdgeColored { edge: 0 })
        );

        // Middle edge of a double star whose other edges use all five colors.
        let tree = Tree::new(
            8,
            vec![(0, 1), (0, 2), (0, 3), (0, 4), (4, 5), (4, 6), (4, 7)],
        )
        .unwrap();
        let colors = vec![1, 2, 3, 0, 4, 5, 1];
        let s = GameState::from_coloring(
            Arc::new(tree.clone()),
            EdgeColoring::from_colors(&tree, colors, 5).unwrap(),
            Variant::BB,
            Player::Alice,
        )
        .unwrap();
        assert!(s.available_colors(3).unwrap().is_empty());
        assert_eq!(s.status(), GameStatus::BobWins);
        assert_eq!(s.dead_edges(), vec![3]);
    }

    #[test]
    fn legal_moves_examples() {
        let bob = state(Tree::path(1), 2, "BB", Player::Bob);
        assert_eq!(
            bob.legal_moves().unwrap(),
            vec![
                Move::Skip,
                Move::Place { edge: 0, color: 1 },
                Move::Place { edge: 0, color: 2 }
            ]
        );
        let alice = state(Tree::path(1), 2, "BB", Player::Alice);
        assert_eq!(
            alice.legal_moves().unwrap(),
            vec![
                Move::Place { edge: 0, color: 1 },
                Move::Place { edge: 0, color: 2 }
            ]
        );
        let done = alice.apply_move(Move::Place { edge: 0, color: 1 }).unwrap();
        assert_eq!(done.legal_moves(), Err(GameError::Terminal));
    }

    #[test]
    fn apply_move_examples() {
        let s = state(Tree::path(2), 3, "BB", Player::Bob);
        let t = s.apply_move(Move::Place { edge: 0, color: 1 }).unwrap();
        assert_eq!(t.colors(), &[1, 0]);
        assert_eq!(t.mover(), Player::Alice);

        let skipped = s.apply_move(Move::Skip).unwrap();
        assert_eq!(skipped.colors(), s.colors());
        assert_eq!(skipped.mover(), Player::Alice);

        assert_eq!(
            t.apply_move(Move::Place { edge: 1, color: 1 }),
            Err(IllegalMove::ColorConflict { edge: 1, color: 1 })
        );
        assert_eq!(
            t.apply_move(Move::Place { edge: 0, color: 2 }),
            Err(IllegalMove::EdgeOccupied { edge: 0 })
        );
        assert_eq!(
            t.apply_move(Move::Skip),
            Err(IllegalMove::SkipNotPermitted {
                player: Player::Alice
            })
        );
        assert_eq!(
            t.apply_move(Move::Place { edge: 1, color: 4 }),
            Err(IllegalMove::ColorOutOfPalette { color: 4, k: 3 })
        );
        assert_eq!(
            t.apply_move(Move::Place { edge: 7, color: 1 }),
            Err(IllegalMove::EdgeOutOfRange { edge: 7 })
        );
    }

    #[test]
    fn status_examples() {
        let mut s = state(Tree::path(2), 3, "BB", Player::Bob);
        assert_eq!(s.status(), GameStatus::Ongoing);
        s.play(Move::Place { edge: 0, color: 1 }).unwrap();
        s.play(Move::Place { edge: 1, color: 2 }).unwrap();
        assert_eq!(s.status(), GameStatus::AliceWins);
        // Terminal states are absorbing.
        assert_eq!(s.apply_move(Move::Skip), Err(IllegalMove::GameOver));

        let mut star = state(Tree::star(4), 5, "BB", Player::Bob);
        star.play(Move::Place { edge: 0, color: 1 }).unwrap();
        star.play(Move::Place { edge: 2, color: 3 }).unwrap();
        assert_eq!(star.status(), GameStatus::Ongoing);
    }

    #[test]
    fn undo_restores_state() {
        let s = state(Tree::star(3), 3, "AB", Player::Alice);
        let mut t = s.clone();
        for m in [
            Move::Place { edge: 1, color: 2 },
            Move::Skip,
            Move::Place { edge: 0, color: 3 },
        ] {
            t.play(m).unwrap();
        }
        t.undo(Move::Place { edge: 0, color: 3 });
        t.undo(Move::Skip);
        t.undo(Move::Place { edge: 1, color: 2 });
        assert_eq!(t, s);
        assert_eq!(t.colors_at(0), ColorSet::EMPTY);
    }

    #[test]
    fn rejects_bad_palettes() {
        let tree = Arc::new(Tree::path(1));
        assert_eq!(
            GameState::new(tree.clone(), 0, Variant::BB).unwrap_err(),
            GameError::InvalidPalette { k: 0 }
        );
        assert_eq!(
            GameState::new(tree, 32, Variant::BB).unwrap_err(),
            GameError::InvalidPalette { k: 32 }
        );
    }
}
