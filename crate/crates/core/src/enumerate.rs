//! Exhaustive generation of free trees and the degree-4 class predicates.
//!
//! Every free tree has either one centroid, in which case all branches at
//! the centroid have fewer than `n/2` vertices, or two adjacent centroids
//! splitting it into two halves of exactly `n/2` vertices. Trees are
//! therefore built as a centroid with a multiset of small rooted trees
//! below it, or as an unordered pair of rooted halves. Rooted trees are
//! drawn from a catalog where each entry is a multiset of smaller entries,
//! so every isomorphism class is produced exactly once.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::tree::Tree;

pub const DEFAULT_MAX_VERTICES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("vertex count must be at least 1")]
    Empty,
    #[error("{requested} vertices exceeds the enumeration cap of {cap}")]
    OverCap { requested: usize, cap: usize },
}

/// Rooted trees, each stored as the catalog indices of its root's
/// children in nonincreasing order. Entries are sorted by size.
#[derive(Clone, Debug)]
struct Catalog {
    sizes: Vec<usize>,
    children: Vec<Vec<usize>>,
    /// `first_of_size[s]` is the index of the first entry with size `s`.
    first_of_size: Vec<usize>,
}

impl Catalog {
    fn up_to(max_size: usize) -> Self {
        let mut cat = Catalog {
            sizes: Vec::new(),
            children: Vec::new(),
            first_of_size: vec![0, 0],
        };
        for size in 1..=max_size {
            let bound = cat.sizes.len();
            let mut fresh = Vec::new();
            for kids in Multisets::new(cat.sizes.clone(), bound, size - 1) {
                fresh.push(kids);
            }
            for kids in fresh {
                cat.sizes.push(size);
                cat.children.push(kids);
            }
            cat.first_of_size.push(cat.sizes.len());
        }
        cat
    }

    /// Number of entries with size at most `s`.
    fn count_up_to(&self, s: usize) -> usize {
        self.first_of_size[(s + 1).min(self.first_of_size.len() - 1)]
    }

    fn emit(&self, entry: usize, root: usize, edges: &mut Vec<(usize, usize)>, next: &mut usize) {
        for &child in &self.children[entry] {
            let c = *next;
            *next += 1;
            edges.push((root, c));
            self.emit(child, c, edges, next);
        }
    }
}

/// Nonincreasing index sequences over `0..bound` whose sizes sum to
/// `target`, in descending lexicographic order. Index 0 must have size 1,
/// which makes greedy completion always succeed.
struct Multisets {
    sizes: Vec<usize>,
    bound: usize,
    picks: Vec<usize>,
    remaining: usize,
    state: MultisetState,
}

#[derive(PartialEq)]
enum MultisetState {
    Fresh,
    Running,
    Done,
}

impl Multisets {
    fn new(sizes: Vec<usize>, bound: usize, target: usize) -> Self {
        Multisets {
            sizes,
            bound,
            picks: Vec::new(),
            remaining: target,
            state: MultisetState::Fresh,
        }
    }

    /// Greedily appends the largest admissible index until the sum is met.
    fn complete(&mut self) -> bool {
        while self.remaining > 0 {
            let cap = self.picks.last().map_or(self.bound, |&p| p + 1);
            match (0..cap).rev().find(|&j| self.sizes[j] <= self.remaining) {
                Some(j) => {
                    self.picks.push(j);
                    self.remaining -= self.sizes[j];
                }
                None => return false,
            }
        }
        true
    }
}

impl Iterator for Multisets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        match self.state {
            MultisetState::Done => return None,
            MultisetState::Fresh => {
                self.state = MultisetState::Running;
                if self.complete() {
                    return Some(self.picks.clone());
                }
                // Only possible when nothing fits; fall through to backtrack.
            }
            MultisetState::Running => {}
        }
        while let Some(p) = self.picks.pop() {
            self.remaining += self.sizes[p];
            if let Some(q) = (0..p).rev().find(|&q| self.sizes[q] <= self.remaining) {
                self.picks.push(q);
                self.remaining -= self.sizes[q];
                if self.complete() {
                    return Some(self.picks.clone());
                }
            }
        }
        self.state = MultisetState::Done;
        None
    }
}

enum Phase {
    Unicentroidal(Multisets),
    Bicentroidal { hi: usize, lo: usize },
    Done,
}

/// Iterator over one representative of every free tree on `n` vertices.
///
/// Vertex 0 is a centroid and edges are listed in depth-first preorder.
/// The order is deterministic.
pub struct FreeTrees {
    catalog: Catalog,
    n: usize,
    phase: Phase,
}

/// All free trees on `n` vertices, up to [`DEFAULT_MAX_VERTICES`].
pub fn enumerate_trees(n: usize) -> Result<FreeTrees, EnumerationError> {
    enumerate_trees_capped(n, DEFAULT_MAX_VERTICES)
}

pub fn enumerate_trees_capped(n: usize, cap: usize) -> Result<FreeTrees, EnumerationError> {
    if n == 0 {
        return Err(EnumerationError::Empty);
    }
    if n > cap {
        return Err(EnumerationError::OverCap { requested: n, cap });
    }
    let catalog = Catalog::up_to(n / 2);
    // Unicentroidal: every branch has at most (n - 1) / 2 vertices.
    let bound = catalog.count_up_to((n - 1) / 2);
    let phase = Phase::Unicentroidal(Multisets::new(catalog.sizes.clone(), bound, n - 1));
    Ok(FreeTrees { catalog, n, phase })
}

impl FreeTrees {
    /// Every `count`-th tree starting at `index`; shards partition the stream.
    pub fn shard(self, index: usize, count: usize) -> impl Iterator<Item = Tree> {
        self.enumerate()
            .filter(move |(i, _)| count > 0 && i % count == index)
            .map(|(_, t)| t)
    }

    fn start_bicentroidal(&mut self) {
        self.phase = if self.n % 2 == 0 {
            let half = self.n / 2;
            let first = self.catalog.first_of_size[half];
            Phase::Bicentroidal {
                hi: first,
                lo: first,
            }
        } else {
            Phase::Done
        };
    }
}

impl Iterator for FreeTrees {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        loop {
            match &mut self.phase {
                Phase::Unicentroidal(ms) => match ms.next() {
                    Some(kids) => {
                        let mut edges = Vec::with_capacity(self.n - 1);
                        let mut next = 1;
                        for &child in &kids {
                            let c = next;
                            next += 1;
                            edges.push((0, c));
                            self.catalog.emit(child, c, &mut edges, &mut next);
                        }
                        return Some(Tree::new(self.n, edges).expect("generated a tree"));
                    }
                    None => self.start_bicentroidal(),
                },
                Phase::Bicentroidal { hi, lo } => {
                    let half = self.n / 2;
                    let end = self.catalog.first_of_size[half + 1];
                    if *hi >= end {
                        self.phase = Phase::Done;
                        continue;
                    }
                    let (a, b) = (*hi, *lo);
                    if *lo == *hi {
                        *hi += 1;
                        *lo = self.catalog.first_of_size[half];
                    } else {
                        *lo += 1;
                    }
                    let mut edges = Vec::with_capacity(self.n - 1);
                    let mut next = 1;
                    self.catalog.emit(a, 0, &mut edges, &mut next);
                    let other = next;
                    next += 1;
                    edges.push((0, other));
                    self.catalog.emit(b, other, &mut edges, &mut next);
                    return Some(Tree::new(self.n, edges).expect("generated a tree"));
                }
                Phase::Done => return None,
            }
        }
    }
}

/// Decodes a Prüfer sequence over `0..seq.len() + 2`.
pub fn tree_from_prufer(seq: &[usize]) -> Tree {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n)
            .find(|&v| degree[v] == 1)
            .expect("a leaf always exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Tree::new(n, edges).expect("Prüfer sequences encode trees")
}

/// A uniformly random labeled tree on `n` vertices.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tree {
    match n {
        0 | 1 => Tree::new(1, Vec::new()).expect("single vertex"),
        2 => Tree::path(1),
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
            tree_from_prufer(&seq)
        }
    }
}

/// Shape required of the subgraph induced by the degree-4 vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum D4Shape {
    /// Every component is a path with at most `max_length` edges.
    Paths {
        max_length: usize,
    },
    /// Every component is a star (including single vertices and edges).
    Stars,
    Unrestricted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClassSpec {
    pub delta_exact: Option<usize>,
    pub delta_max: usize,
    pub d4_shape: D4Shape,
}

impl ClassSpec {
    /// Maximum degree exactly 4 with 4-vertices inducing paths of length at
    /// most `l`.
    pub fn degree_four_paths(l: usize) -> Self {
        ClassSpec {
            delta_exact: Some(4),
            delta_max: 4,
            d4_shape: D4Shape::Paths { max_length: l },
        }
    }

    pub fn degree_four_stars() -> Self {
        ClassSpec {
            delta_exact: Some(4),
            delta_max: 4,
            d4_shape: D4Shape::Stars,
        }
    }

    pub fn all() -> Self {
        ClassSpec {
            delta_exact: None,
            delta_max: usize::MAX,
            d4_shape: D4Shape::Unrestricted,
        }
    }

    pub fn max_degree(delta: usize) -> Self {
        ClassSpec {
            delta_exact: Some(delta),
            delta_max: delta,
            d4_shape: D4Shape::Unrestricted,
        }
    }
}

/// The subgraph induced by the degree-4 vertices of a tree (a forest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl InducedSubgraph {
    /// Connected components as vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen: Vec<usize> = Vec::new();
        let mut out = Vec::new();
        for &start in &self.vertices {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = vec![start];
            seen.push(start);
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for &(a, b) in &self.edges {
                    let w = if a == v {
                        b
                    } else if b == v {
                        a
                    } else {
                        continue;
                    };
                    if !seen.contains(&w) {
                        seen.push(w);
                        comp.push(w);
                    }
                }
                i += 1;
            }
            out.push(comp);
        }
        out
    }

    fn degree_in(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }
}

pub fn induced_d4_subgraph(tree: &Tree) -> InducedSubgraph {
    let is4 = |v: usize| tree.adjacency(v).len() == 4;
    InducedSubgraph {
        vertices: (0..tree.vertex_count()).filter(|&v| is4(v)).collect(),
        edges: tree
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| is4(u) && is4(v))
            .collect(),
    }
}

pub fn in_class(tree: &Tree, spec: &ClassSpec) -> bool {
    let delta = tree.max_degree();
    if spec.delta_exact.is_some_and(|d| d != delta) || delta > spec.delta_max {
        return false;
    }
    let sub = match spec.d4_shape {
        D4Shape::Unrestricted => return true,
        _ => induced_d4_subgraph(tree),
    };
    sub.components().iter().all(|comp| match spec.d4_shape {
        D4Shape::Paths { max_length } => {
            comp.iter().all(|&v| sub.degree_in(v) <= 2) && comp.len() - 1 <= max_length
        }
        D4Shape::Stars => {
            comp.len() <= 2 || comp.iter().any(|&v| sub.degree_in(v) == comp.len() - 1)
        }
        D4Shape::Unrestricted => true,
    })
}

/// True when deleting all leaves leaves a path (or nothing).
pub fn is_caterpillar(tree: &Tree) -> bool {
    let spine: Vec<usize> = (0..tree.vertex_count())
        .filter(|&v| tree.adjacency(v).len() > 1)
        .collect();
    spine.iter().all(|&v| {
        tree.adjacency(v)
            .iter()
            .filter(|&&(w, _)| tree.adjacency(w).len() > 1)
            .count()
            <= 2
    })
}
