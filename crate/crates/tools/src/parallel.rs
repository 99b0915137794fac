//! Thread-safe transposition table and root-parallel solving.

use std::hash::{BuildHasher, RandomState};

use edgegame::memo::{Memo, DEFAULT_MEMO_CAPACITY};
use edgegame::{
    CanonicalKey, GameState, GameStatus, Move, Player, SolveError, SolveResult, Solver,
};
use lru::LruCache;
use parking_lot::Mutex;
use rayon::prelude::*;

const SHARDS: usize = 64;

/// A memo shared between threads. Each entry is written once and read
/// whole under its shard lock, so readers see either nothing or the final
/// value.
pub struct SharedMemo {
    shards: Vec<Mutex<LruCache<CanonicalKey, bool>>>,
    shard_capacity: usize,
    hasher: RandomState,
}

impl SharedMemo {
    /// `capacity` is split evenly between the shards.
    pub fn new(capacity: usize) -> Self {
        SharedMemo {
            shards: (0..SHARDS)
                .map(|_| Mutex::new(LruCache::unbounded()))
                .collect(),
            shard_capacity: capacity.div_ceil(SHARDS).max(1),
            hasher: RandomState::new(),
        }
    }

    fn shard(&self, key: &CanonicalKey) -> &Mutex<LruCache<CanonicalKey, bool>> {
        &self.shards[self.hasher.hash_one(key) as usize % SHARDS]
    }
}

impl Default for SharedMemo {
    fn default() -> Self {
        SharedMemo::new(DEFAULT_MEMO_CAPACITY)
    }
}

impl Memo for SharedMemo {
    fn get(&self, key: &CanonicalKey) -> Option<bool> {
        self.shard(key).lock().get(key).copied()
    }

    fn insert(&self, key: CanonicalKey, alice_wins: bool) {
        let mut shard = self.shard(&key).lock();
        if !shard.contains(&key) {
            if shard.len() >= self.shard_capacity {
                shard.pop_lru();
            }
            shard.put(key, alice_wins);
        }
    }

    fn len(&self) -> usize {
        self.shards.iter().map(|s| s.lock().len()).sum()
    }
}

/// Solves `state` by evaluating its root moves on the current rayon pool.
/// The budget applies to each root move separately. Returns the same
/// winner and best move as [`Solver::solve`].
pub fn solve_parallel(
    state: &GameState,
    memo: &SharedMemo,
    budget: u64,
) -> Result<SolveResult, SolveError> {
    if state.status() != GameStatus::Ongoing {
        return Solver::with_memo(memo).budget(budget).solve(state);
    }
    let mut moves = state.legal_moves()?;
    // Public tie-break order puts Skip last.
    if moves.first() == Some(&Move::Skip) {
        moves.rotate_left(1);
    }
    let mover = state.mover();
    let outcomes: Vec<Result<SolveResult, SolveError>> = moves
        .par_iter()
        .map(|&m| {
            let child = state.apply_move(m).expect("legal move");
            Solver::with_memo(memo).budget(budget).solve(&child)
        })
        .collect();
    let mut nodes = 0;
    let mut hits = 0;
    let mut best = None;
    for (&m, r) in moves.iter().zip(outcomes) {
        let r = r?;
        nodes += r.nodes_explored;
        hits += r.table_hits;
        if best.is_none() && r.winner == mover {
            best = Some(m);
        }
    }
    let winner = if best.is_some() {
        mover
    } else {
        mover.opponent()
    };
    Ok(SolveResult {
        winner,
        best_move: best,
        nodes_explored: nodes,
        table_hits: hits,
    })
}

/// Runs `f` on a pool with `threads` workers, or the global pool for `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

/// Winner of `state` as the usual label.
pub fn status_label(winner: Player) -> &'static str {
    match winner {
        Player::Alice => "AliceWins",
        Player::Bob => "BobWins",
    }
}
