//! Canonical keys for positions, equal exactly when two positions are
//! related by a tree automorphism composed with a permutation of colors.
//!
//! The tree is rooted at its centroid (or at the central edge when there
//! are two centroids) and children are ordered by their rooted shape code.
//! Edges are then listed in depth-first preorder. The only freedom left is
//! the order of siblings with identical shapes, which is exactly the
//! automorphism group of the tree. The key is the lexicographically
//! smallest color sequence over those orders, where colors are relabeled by
//! first occurrence. Colors used on a single edge all share one marker,
//! which preserves the color partition and removes most of the ties.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::game::{GameState, Player};
use crate::tree::{Tree, MAX_COLORS};

/// Largest tree the solver and canonicalizer accept.
pub const MAX_SOLVER_EDGES: usize = 24;

const KEY_BYTES: usize = 40;
const NO_EDGE: usize = usize::MAX;
const UNCOLORED: u8 = 0;
const SINGLETON: u8 = 1;
const FIRST_LABEL: u8 = 2;

/// Canonical form of a position: mover, palette size, tree shape and the
/// relabeled coloring.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    len: u8,
    bytes: [u8; KEY_BYTES],
}

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes[..self.len as usize]
    }

    fn push(&mut self, b: u8) {
        self.bytes[self.len as usize] = b;
        self.len += 1;
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.as_bytes() {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Root {
    Vertex(usize),
    /// Central edge between two centroids; `halves` holds them ordered by
    /// shape code.
    Edge {
        edge: usize,
    },
}

/// Per-tree data needed to canonicalize its positions.
#[derive(Clone, Debug)]
pub struct TreeShape {
    edge_count: usize,
    root: Root,
    /// `(child, edge)` sorted by the child's rooted shape code. Index
    /// `vertex_count` is a virtual root holding the two halves of an
    /// edge-rooted tree with `NO_EDGE`.
    children: Vec<Vec<(usize, usize)>>,
    /// Runs of equal shape code within `children[v]`, as `(start, end)`.
    groups: Vec<Vec<(usize, usize)>>,
    /// Packed shape code of the whole tree.
    code: Vec<u8>,
}

impl TreeShape {
    /// Returns `None` when the tree has more than [`MAX_SOLVER_EDGES`] edges.
    pub fn new(tree: &Tree) -> Option<TreeShape> {
        let n = tree.vertex_count();
        if tree.edge_count() > MAX_SOLVER_EDGES {
            return None;
        }
        let (c1, c2) = centroids(tree);
        let mut children = vec![Vec::new(); n + 1];
        let mut order = Vec::with_capacity(n);
        let root = match c2 {
            None => {
                orient(tree, c1, usize::MAX, &mut children, &mut order);
                Root::Vertex(c1)
            }
            Some(c2) => {
                let edge = tree
                    .adjacency(c1)
                    .iter()
                    .find(|&&(w, _)| w == c2)
                    .expect("centroids adjacent")
                    .1;
                orient(tree, c1, c2, &mut children, &mut order);
                orient(tree, c2, c1, &mut children, &mut order);
                children[n] = vec![(c1, NO_EDGE), (c2, NO_EDGE)];
                Root::Edge { edge }
            }
        };

        // Rooted shape codes, children before parents: '(' = 1, ')' = 0.
        let mut codes: Vec<Vec<u8>> = vec![Vec::new(); n + 1];
        for &v in order.iter().rev() {
            children[v].sort_by(|a, b| codes[a.0].cmp(&codes[b.0]));
            let mut code = vec![1];
            for &(w, _) in &children[v] {
                code.extend_from_slice(&codes[w]);
            }
            code.push(0);
            codes[v] = code;
        }
        children[n].sort_by(|a, b| codes[a.0].cmp(&codes[b.0]));

        let groups = children
            .iter()
            .map(|kids| {
                let mut runs = Vec::new();
                let mut start = 0;
                for i in 1..=kids.len() {
                    if i == kids.len() || codes[kids[i].0] != codes[kids[start].0] {
                        runs.push((start, i));
                        start = i;
                    }
                }
                runs
            })
            .collect();

        let bits: Vec<u8> = match root {
            Root::Vertex(c) => codes[c].clone(),
            Root::Edge { .. } => {
                let mut b = vec![1];
                for &(w, _) in &children[n] {
                    b.extend_from_slice(&codes[w]);
                }
                b.push(0);
                b
            }
        };
        let mut code = vec![n as u8, matches!(root, Root::Edge { .. }) as u8];
        code.extend(
            bits.chunks(8)
                .map(|chunk| chunk.iter().fold(0u8, |acc, &bit| (acc << 1) | bit)),
        );

        Some(TreeShape {
            edge_count: tree.edge_count(),
            root,
            children,
            groups,
            code,
        })
    }

    /// Packed canonical code of the uncolored tree; equal exactly for
    /// isomorphic trees.
    pub fn code(&self) -> &[u8] {
        &self.code
    }

    /// Lowercase hex of [`TreeShape::code`], used as a stable tree id.
    pub fn id(&self) -> alloc::string::String {
        use core::fmt::Write;
        let mut s = alloc::string::String::new();
        for b in &self.code {
            let _ = write!(s, "{b:02x}");
        }
        s
    }

    /// Canonical key of a position on this tree.
    pub fn key(&self, colors: &[u8], k: u8, mover: Player) -> CanonicalKey {
        debug_assert_eq!(colors.len(), self.edge_count);
        let mut key = CanonicalKey {
            len: 0,
            bytes: [0; KEY_BYTES],
        };
        key.push(mover as u8);
        key.push(k);
        for &b in &self.code {
            key.push(b);
        }
        for v in canonical_sequence(self, colors) {
            key.push(v);
        }
        key
    }
}

fn centroids(tree: &Tree) -> (usize, Option<usize>) {
    let n = tree.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![0];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for &(w, _) in tree.adjacency(v) {
            if w != parent[v] {
                parent[w] = v;
                order.push(w);
            }
        }
        i += 1;
    }
    let mut size = vec![1usize; n];
    for &v in order.iter().rev().take(n - 1) {
        size[parent[v]] += size[v];
    }
    let worst = |v: usize| {
        let up = n - size[v];
        tree.adjacency(v)
            .iter()
            .filter(|&&(w, _)| w != parent[v])
            .map(|&(w, _)| size[w])
            .max()
            .unwrap_or(0)
            .max(up)
    };
    let best = (0..n).map(worst).min().expect("nonempty");
    let mut cs = (0..n).filter(|&v| worst(v) == best);
    let c1 = cs.next().expect("a centroid exists");
    (c1, cs.next())
}

/// Orients the component of `root` away from `root`, never crossing into
/// `blocked`. Appends vertices to `order` in BFS order.
fn orient(
    tree: &Tree,
    root: usize,
    blocked: usize,
    children: &mut [Vec<(usize, usize)>],
    order: &mut Vec<usize>,
) {
    let start = order.len();
    order.push(root);
    let mut parent = vec![usize::MAX; tree.vertex_count()];
    let mut i = start;
    while i < order.len() {
        let v = order[i];
        for &(w, e) in tree.adjacency(v) {
            if w != parent[v] && w != blocked {
                parent[w] = v;
                children[v].push((w, e));
                order.push(w);
            }
        }
        i += 1;
    }
}

/// First-occurrence relabeling of repeated colors.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Relabel {
    map: [u8; MAX_COLORS as usize + 1],
    next: u8,
}

impl Relabel {
    const START: Relabel = Relabel {
        map: [0; MAX_COLORS as usize + 1],
        next: FIRST_LABEL,
    };
}

struct Search<'a> {
    shape: &'a TreeShape,
    colors: &'a [u8],
    repeated: u32,
    /// Whether the block below a vertex (edges strictly inside its rooted
    /// subtree) mentions a repeated color.
    dynamic: Vec<bool>,
    /// Cached block of a static child: its edge value then its subtree.
    static_blocks: Vec<Option<Vec<u8>>>,
}

type Frontier = Vec<Relabel>;

impl<'a> Search<'a> {
    fn new(shape: &'a TreeShape, colors: &'a [u8]) -> Self {
        let mut count = [0u8; MAX_COLORS as usize + 1];
        for &c in colors {
            count[c as usize] = count[c as usize].saturating_add(1);
        }
        let repeated = (1..=MAX_COLORS as usize)
            .filter(|&c| count[c] > 1)
            .fold(0u32, |acc, c| acc | 1 << c);
        let slots = shape.children.len();
        let mut s = Search {
            shape,
            colors,
            repeated,
            dynamic: vec![false; slots],
            static_blocks: vec![None; slots],
        };
        s.mark_dynamic();
        s
    }

    fn is_repeated(&self, c: u8) -> bool {
        self.repeated & (1 << c) != 0
    }

    fn edge_dynamic(&self, e: usize) -> bool {
        e != NO_EDGE && self.is_repeated(self.colors[e])
    }

    fn mark_dynamic(&mut self) {
        // Post-order over the real vertices, then the virtual root.
        let slots = self.shape.children.len();
        let mut order = Vec::with_capacity(slots);
        let top = match self.shape.root {
            Root::Vertex(c) => c,
            Root::Edge { .. } => slots - 1,
        };
        let mut stack = vec![top];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.shape.children[v].iter().map(|&(w, _)| w));
        }
        for &v in order.iter().rev() {
            let dynamic = self.shape.children[v]
                .iter()
                .any(|&(w, e)| self.dynamic[w] || self.edge_dynamic(e));
            self.dynamic[v] = dynamic;
            if !dynamic {
                // Static subtree: its block does not depend on the labeling.
                for &(w, e) in &self.shape.children[v] {
                    if self.static_blocks[w].is_none() {
                        let mut block = Vec::new();
                        if e != NO_EDGE {
                            block.push(self.static_value(self.colors[e]));
                        }
                        block.extend(self.children_seq(w, Relabel::START).0);
                        self.static_blocks[w] = Some(block);
                    }
                }
            } else {
                for &(w, e) in &self.shape.children[v] {
                    if !self.dynamic[w] && !self.edge_dynamic(e) && self.static_blocks[w].is_none()
                    {
                        let mut block = Vec::new();
                        if e != NO_EDGE {
                            block.push(self.static_value(self.colors[e]));
                        }
                        block.extend(self.children_seq(w, Relabel::START).0);
                        self.static_blocks[w] = Some(block);
                    }
                }
            }
        }
    }

    fn static_value(&self, c: u8) -> u8 {
        if c == 0 {
            UNCOLORED
        } else {
            SINGLETON
        }
    }

    fn value(&self, c: u8, st: &mut Relabel) -> u8 {
        if c == 0 {
            UNCOLORED
        } else if !self.is_repeated(c) {
            SINGLETON
        } else {
            let slot = &mut st.map[c as usize];
            if *slot == 0 {
                *slot = st.next;
                st.next += 1;
            }
            *slot
        }
    }

    /// Smallest block for child `w` entered via edge `e`, with every end
    /// state reaching it.
    fn block(&self, w: usize, e: usize, start: Relabel) -> (Vec<u8>, Frontier) {
        if let Some(block) = &self.static_blocks[w] {
            if !self.edge_dynamic(e) {
                return (block.clone(), vec![start]);
            }
        }
        let mut st = start;
        let mut block = Vec::new();
        if e != NO_EDGE {
            block.push(self.value(self.colors[e], &mut st));
        }
        let (rest, frontier) = self.children_seq(w, st);
        block.extend(rest);
        (block, frontier)
    }

    fn block_from(&self, w: usize, e: usize, frontier: &[Relabel]) -> (Vec<u8>, Frontier) {
        let mut best: Option<Vec<u8>> = None;
        let mut outs: Frontier = Vec::new();
        for &st in frontier {
            let (block, ends) = self.block(w, e, st);
            merge(&mut best, &mut outs, block, ends);
        }
        (best.unwrap_or_default(), outs)
    }

    /// Smallest concatenation of the children blocks of `v`.
    fn children_seq(&self, v: usize, start: Relabel) -> (Vec<u8>, Frontier) {
        let mut seq = Vec::new();
        let mut frontier = vec![start];
        let kids = &self.shape.children[v];
        for &(gs, ge) in &self.shape.groups[v] {
            let members = &kids[gs..ge];
            if members.len() == 1 {
                let (w, e) = members[0];
                let (block, next) = self.block_from(w, e, &frontier);
                seq.extend(block);
                frontier = next;
                continue;
            }
            let mut states: Vec<(Relabel, u32)> = frontier
                .iter()
                .map(|&s| (s, (1u32 << members.len()) - 1))
                .collect();
            for _ in 0..members.len() {
                let mut best: Option<Vec<u8>> = None;
                let mut next: Vec<(Relabel, u32)> = Vec::new();
                for &(st, remaining) in &states {
                    let mut tried: Vec<(Vec<u8>, Frontier)> = Vec::new();
                    let mut bits = remaining;
                    while bits != 0 {
                        let i = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        let (w, e) = members[i];
                        let (block, ends) = self.block(w, e, st);
                        // A sibling giving the same block and end states as an
                        // earlier one is an identical colored subtree.
                        if tried.iter().any(|(b, f)| *b == block && *f == ends) {
                            continue;
                        }
                        let ord = best.as_ref().map_or(Ordering::Less, |b| block.cmp(b));
                        if ord == Ordering::Greater {
                            tried.push((block, ends));
                            continue;
                        }
                        if ord == Ordering::Less {
                            best = Some(block.clone());
                            next.clear();
                        }
                        for &end in &ends {
                            let item = (end, remaining & !(1 << i));
                            if !next.contains(&item) {
                                next.push(item);
                            }
                        }
                        tried.push((block, ends));
                    }
                }
                seq.extend(best.unwrap_or_default());
                states = next;
            }
            frontier.clear();
            for (st, _) in states {
                if !frontier.contains(&st) {
                    frontier.push(st);
                }
            }
        }
        (seq, frontier)
    }
}

fn merge(best: &mut Option<Vec<u8>>, outs: &mut Frontier, block: Vec<u8>, ends: Frontier) {
    let ord = best.as_ref().map_or(Ordering::Less, |b| block.cmp(b));
    match ord {
        Ordering::Greater => {}
        Ordering::Less => {
            *best = Some(block);
            *outs = ends;
        }
        Ordering::Equal => {
            for end in ends {
                if !outs.contains(&end) {
                    outs.push(end);
                }
            }
        }
    }
}

/// The canonical relabeled color sequence of a coloring of `shape`'s tree.
fn canonical_sequence(shape: &TreeShape, colors: &[u8]) -> Vec<u8> {
    let search = Search::new(shape, colors);
    match shape.root {
        Root::Vertex(c) => search.children_seq(c, Relabel::START).0,
        Root::Edge { edge } => {
            let mut st = Relabel::START;
            let mut seq = vec![search.value(colors[edge], &mut st)];
            seq.extend(search.children_seq(shape.children.len() - 1, st).0);
            seq
        }
    }
}

/// Canonical key of a position. Computes the tree shape on every call;
/// searches should build a [`TreeShape`] once and use [`TreeShape::key`].
pub fn canonicalize(state: &GameState) -> Option<CanonicalKey> {
    let shape = TreeShape::new(state.tree())?;
    Some(shape.key(state.colors(), state.k(), state.mover()))
}
