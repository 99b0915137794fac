//! Exact analysis of the edge-coloring game on trees.
//!
//! Alice and Bob alternately color edges of a tree from a palette of `k`
//! colors, keeping the coloring proper. Alice wins when every edge gets
//! colored, Bob wins as soon as some uncolored edge has no color left.
#![no_std]

extern crate alloc;

pub mod canon;
pub mod enumerate;
pub mod game;
pub mod memo;
pub mod solver;
pub mod structure;
pub mod tree;

pub use canon::{canonicalize, CanonicalKey, TreeShape, MAX_SOLVER_EDGES};
pub use enumerate::{enumerate_trees, in_class, ClassSpec, D4Shape};
pub use game::{GameError, GameState, GameStatus, IllegalMove, Move, Player, Variant};
pub use memo::{LruMemo, Memo, NoMemo};
pub use solver::{IndexReport, SolveError, SolveResult, Solver};
pub use tree::{ColorSet, EdgeColoring, Tree, TreeError, MAX_COLORS};
