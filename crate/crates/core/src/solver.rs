//! Exact game values, best moves and the game chromatic index.

use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::canon::{TreeShape, MAX_SOLVER_EDGES};
use crate::game::{GameError, GameState, GameStatus, Move, Player, Variant};
use crate::memo::{LruMemo, Memo};
use crate::tree::{ColorSet, Tree, MAX_COLORS};

/// Default cap on expanded nodes per call.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("node budget of {budget} exhausted")]
    Budget { budget: u64 },
    #[error("tree has {edges} edges; the solver handles at most {MAX_SOLVER_EDGES}")]
    TooLarge { edges: usize },
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveResult {
    pub winner: Player,
    /// Lowest winning move of the mover, when there is one.
    pub best_move: Option<Move>,
    pub nodes_explored: u64,
    pub table_hits: u64,
}

/// Result of scanning palette sizes for one tree and variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexReport {
    pub index: u8,
    /// Winner of the initial position for every scanned k.
    pub outcomes: Vec<(u8, Player)>,
    /// Palette sizes above the index where Alice loses again.
    pub non_monotone: Vec<u8>,
}

/// Memoized minimax search. Reuse one solver for many positions of the
/// same tree so the table carries over.
pub struct Solver<M: Memo = LruMemo> {
    memo: M,
    budget: u64,
    shape: Option<(Arc<Tree>, TreeShape)>,
    nodes: u64,
    hits: u64,
}

impl Solver<LruMemo> {
    pub fn new() -> Self {
        Solver::with_memo(LruMemo::default())
    }
}

impl Default for Solver<LruMemo> {
    fn default() -> Self {
        Solver::new()
    }
}

impl<M: Memo> Solver<M> {
    pub fn with_memo(memo: M) -> Self {
        Solver {
            memo,
            budget: DEFAULT_NODE_BUDGET,
            shape: None,
            nodes: 0,
            hits: 0,
        }
    }

    /// Caps the number of expanded nodes per public call.
    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn set_budget(&mut self, budget: u64) {
        self.budget = budget;
    }

    pub fn memo(&self) -> &M {
        &self.memo
    }

    fn prepare(&mut self, tree: &Arc<Tree>) -> Result<(), SolveError> {
        let fresh = match &self.shape {
            Some((t, _)) => !(Arc::ptr_eq(t, tree) || **t == **tree),
            None => true,
        };
        if fresh {
            let shape = TreeShape::new(tree).ok_or(SolveError::TooLarge {
                edges: tree.edge_count(),
            })?;
            self.shape = Some((tree.clone(), shape));
        }
        self.nodes = 0;
        self.hits = 0;
        Ok(())
    }

    /// Exact value of `state` under optimal play.
    pub fn solve(&mut self, state: &GameState) -> Result<SolveResult, SolveError> {
        self.prepare(state.shared_tree())?;
        let mover = state.mover();
        let (winner, best_move) = match state.status() {
            GameStatus::AliceWins => (Player::Alice, None),
            GameStatus::BobWins => (Player::Bob, None),
            GameStatus::Ongoing => {
                let mut st = state.clone();
                let mut best = None;
                for m in canonical_moves(&st) {
                    if self.child_winner(&mut st, m)? == mover {
                        best = Some(m);
                        break;
                    }
                }
                let winner = if best.is_some() {
                    mover
                } else {
                    mover.opponent()
                };
                self.store(&st, winner == Player::Alice);
                (winner, best)
            }
        };
        Ok(SolveResult {
            winner,
            best_move,
            nodes_explored: self.nodes,
            table_hits: self.hits,
        })
    }

    /// Winner of the uncolored position with palette `k`.
    pub fn solve_initial(
        &mut self,
        tree: &Arc<Tree>,
        k: u8,
        variant: Variant,
    ) -> Result<Player, SolveError> {
        let state = GameState::new(tree.clone(), k, variant)?;
        Ok(self.solve(&state)?.winner)
    }

    /// A move for the mover of an ongoing position: the lowest winning
    /// move if any, otherwise the losing move leaving the opponent the
    /// fewest winning replies.
    pub fn best_move(&mut self, state: &GameState) -> Result<Move, SolveError> {
        let result = self.solve(state)?;
        if let Some(m) = result.best_move {
            return Ok(m);
        }
        let mover = state.mover();
        let mut st = state.clone();
        // (survives, -winning replies); larger is better.
        let mut best: Option<(Move, (bool, i64))> = None;
        for m in canonical_moves(state) {
            st.play_unchecked(m);
            let score = match st.status() {
                GameStatus::Ongoing => {
                    let replies = canonical_moves(&st);
                    let mut wins = 0i64;
                    for r in replies {
                        let w = self.child_winner(&mut st, r);
                        match w {
                            Ok(w) if w != mover => wins += 1,
                            Ok(_) => {}
                            Err(e) => {
                                st.undo(m);
                                return Err(e);
                            }
                        }
                    }
                    (true, -wins)
                }
                _ => (false, 0),
            };
            st.undo(m);
            if best.map_or(true, |(_, s)| score > s) {
                best = Some((m, score));
            }
        }
        Ok(best.expect("ongoing positions have a legal move").0)
    }

    /// Smallest k with an Alice win from the uncolored position. When
    /// `check_above` is set, also solves every k up to Δ+2 past the index
    /// and records the ones Alice loses.
    pub fn game_chromatic_index(
        &mut self,
        tree: &Arc<Tree>,
        variant: Variant,
        check_above: bool,
    ) -> Result<IndexReport, SolveError> {
        let delta = tree.max_degree() as u8;
        let mut outcomes = Vec::new();
        let mut index = None;
        for k in delta.max(1)..=MAX_COLORS {
            let w = self.solve_initial(tree, k, variant)?;
            outcomes.push((k, w));
            if w == Player::Alice {
                index = Some(k);
                break;
            }
        }
        let index = index.expect("Alice wins once k reaches 2Δ-1");
        let mut non_monotone = Vec::new();
        if check_above {
            for k in index + 1..=delta.saturating_add(2).min(MAX_COLORS) {
                let w = self.solve_initial(tree, k, variant)?;
                outcomes.push((k, w));
                if w == Player::Bob {
                    non_monotone.push(k);
                }
            }
        }
        Ok(IndexReport {
            index,
            outcomes,
            non_monotone,
        })
    }

    fn store(&mut self, st: &GameState, alice_wins: bool) {
        let shape = &self.shape.as_ref().expect("prepared").1;
        self.memo
            .insert(shape.key(st.colors(), st.k(), st.mover()), alice_wins);
    }

    /// Winner after the mover of `st` plays `m`; `st` is restored.
    fn child_winner(&mut self, st: &mut GameState, m: Move) -> Result<Player, SolveError> {
        st.play_unchecked(m);
        let status = match m {
            Move::Place { edge, .. } => st.status_after_place(edge),
            Move::Skip => GameStatus::Ongoing,
        };
        let r = match status {
            GameStatus::AliceWins => Ok(true),
            GameStatus::BobWins => Ok(false),
            GameStatus::Ongoing => self.alice_wins(st),
        };
        st.undo(m);
        r.map(|a| if a { Player::Alice } else { Player::Bob })
    }

    /// Value of an ongoing position.
    fn alice_wins(&mut self, st: &mut GameState) -> Result<bool, SolveError> {
        let key = {
            let shape = &self.shape.as_ref().expect("prepared").1;
            shape.key(st.colors(), st.k(), st.mover())
        };
        if let Some(v) = self.memo.get(&key) {
            self.hits += 1;
            return Ok(v);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SolveError::Budget {
                budget: self.budget,
            });
        }
        let want = st.mover() == Player::Alice;
        let mut result = !want;
        for m in search_moves(st) {
            if (self.child_winner(st, m)? == Player::Alice) == want {
                result = want;
                break;
            }
        }
        self.memo.insert(key, result);
        Ok(result)
    }
}

/// Legal moves in the public tie-break order: edge, then color, Skip last.
fn canonical_moves(st: &GameState) -> Vec<Move> {
    let mut moves = Vec::new();
    for e in 0..st.tree().edge_count() {
        if !st.coloring().is_colored(e) {
            moves.extend(
                st.available_unchecked(e)
                    .iter()
                    .map(|color| Move::Place { edge: e, color }),
            );
        }
    }
    if st.can_skip() {
        moves.push(Move::Skip);
    }
    moves
}

/// Moves searched at inner nodes. Colors used nowhere on the tree are
/// interchangeable, so only the smallest of them is tried per edge.
fn search_moves(st: &GameState) -> Vec<Move> {
    let used: ColorSet = st
        .colors()
        .iter()
        .filter(|&&c| c != 0)
        .map(|&c| c)
        .collect();
    let mut moves = Vec::new();
    if st.can_skip() && st.mover() == Player::Bob {
        moves.push(Move::Skip);
    }
    for e in 0..st.tree().edge_count() {
        if st.coloring().is_colored(e) {
            continue;
        }
        let avail = st.available_unchecked(e);
        let fresh = avail.difference(used);
        moves.extend(
            avail
                .difference(fresh)
                .iter()
                .map(|color| Move::Place { edge: e, color }),
        );
        if let Some(color) = fresh.iter().next() {
            moves.push(Move::Place { edge: e, color });
        }
    }
    if st.can_skip() && st.mover() == Player::Alice {
        moves.push(Move::Skip);
    }
    moves
}
