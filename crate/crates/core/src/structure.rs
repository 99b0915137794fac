//! Decomposition of a partially colored tree along its colored edges, and
//! the structural vocabulary used to reason about the pieces: colored
//! leaf-edges, star-nodes, leaf-paths, forbidden degree-4 patterns and the
//! text-defined subtree types 0 to 4.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::game::GameState;
use crate::tree::{ColorSet, Tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("the subtree has no star-node")]
    NoStarNode,
    #[error("edge {edge} is not a colored leaf-edge of the subtree")]
    NotColoredLeafEdge { edge: usize },
    #[error("vertex {vertex} is not a star-node of the subtree")]
    NotStarNode { vertex: usize },
}

/// A connected piece of a decomposition, stored as a small colored tree in
/// local indices with maps back to the host tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subtree {
    local: Tree,
    colors: Vec<u8>,
    k: u8,
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl Subtree {
    /// Builds the subtree of `state` spanned by the given global edges
    /// (sorted) or, when `edges` is empty, the single vertex `lone`.
    fn build(state: &GameState, mut edges: Vec<usize>, lone: usize) -> Subtree {
        let tree = state.tree();
        edges.sort_unstable();
        let mut vertices: Vec<usize> = if edges.is_empty() {
            vec![lone]
        } else {
            edges
                .iter()
                .flat_map(|&e| {
                    let (u, v) = tree.edge(e);
                    [u, v]
                })
                .collect()
        };
        vertices.sort_unstable();
        vertices.dedup();
        let local_of = |g: usize| vertices.binary_search(&g).expect("endpoint in subtree");
        let local_edges = edges
            .iter()
            .map(|&e| {
                let (u, v) = tree.edge(e);
                (local_of(u), local_of(v))
            })
            .collect();
        let local = Tree::new(vertices.len(), local_edges).expect("subtree of a tree is a tree");
        let colors = edges.iter().map(|&e| state.colors()[e]).collect();
        Subtree {
            local,
            colors,
            k: state.k(),
            vertices,
            edges,
        }
    }

    /// The whole position viewed as a single subtree.
    pub fn whole(state: &GameState) -> Subtree {
        Subtree::build(state, (0..state.tree().edge_count()).collect(), 0)
    }

    /// Global vertex indices, sorted.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Global edge indices, sorted.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn local_tree(&self) -> &Tree {
        &self.local
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// Color of the subtree's `i`-th edge (0 if uncolored).
    pub fn local_color(&self, i: usize) -> u8 {
        self.colors[i]
    }

    pub fn colored_edges(&self) -> Vec<usize> {
        self.edges
            .iter()
            .zip(&self.colors)
            .filter(|(_, &c)| c != 0)
            .map(|(&e, _)| e)
            .collect()
    }

    pub fn uncolored_edges(&self) -> Vec<usize> {
        self.edges
            .iter()
            .zip(&self.colors)
            .filter(|(_, &c)| c == 0)
            .map(|(&e, _)| e)
            .collect()
    }

    pub fn is_fully_colored(&self) -> bool {
        self.colors.iter().all(|&c| c != 0)
    }

    /// Degree of a global vertex inside the subtree.
    pub fn degree_of(&self, v: usize) -> Option<usize> {
        self.vertices
            .binary_search(&v)
            .ok()
            .map(|i| self.local.adjacency(i).len())
    }

    /// Local indices of colored leaf-edges with their local roots.
    fn colored_leaf_edges(&self) -> Vec<(usize, usize)> {
        self.local
            .leaf_edges()
            .into_iter()
            .filter(|&(e, _)| self.colors[e] != 0)
            .collect()
    }

    fn colors_at(&self, v: usize) -> ColorSet {
        self.local
            .adjacency(v)
            .iter()
            .map(|&(_, e)| self.colors[e])
            .collect()
    }

    fn available(&self, local_edge: usize) -> ColorSet {
        let (u, v) = self.local.edge(local_edge);
        ColorSet::palette(self.k).difference(self.colors_at(u).union(self.colors_at(v)))
    }

    /// Whether `local_edge` lies in the `v`-branch starting with edge `first`.
    fn branch_edges(&self, v: usize, first: usize) -> Vec<usize> {
        let (a, b) = self.local.edge(first);
        let start = if a == v { b } else { a };
        let mut out = vec![first];
        let mut stack = vec![(start, v)];
        while let Some((x, parent)) = stack.pop() {
            for &(y, e) in self.local.adjacency(x) {
                if y != parent {
                    out.push(e);
                    stack.push((y, x));
                }
            }
        }
        out
    }

    fn local_path(&self, from: usize, to: usize) -> Vec<usize> {
        let parent = bfs_parents(&self.local, from);
        let mut path = vec![to];
        let mut x = to;
        while x != from {
            x = parent[x].expect("tree is connected");
            path.push(x);
        }
        path.reverse();
        path
    }
}

fn bfs_parents(tree: &Tree, from: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None; tree.vertex_count()];
    let mut seen = vec![false; tree.vertex_count()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for &(y, _) in tree.adjacency(x) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(x);
                queue.push_back(y);
            }
        }
    }
    parent
}

/// The pieces of a position cut along its colored edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtreeDecomposition {
    pub subtrees: Vec<Subtree>,
    /// For each global edge, the indices of the subtrees containing it.
    pub owners: Vec<Vec<usize>>,
}

impl SubtreeDecomposition {
    /// Subtrees containing global edge `e`.
    pub fn containing(&self, e: usize) -> &[usize] {
        &self.owners[e]
    }
}

/// Splits the position into the components of the uncolored-edge graph,
/// each closed under its incident colored edges. A vertex all of whose
/// edges are colored forms its own completely colored star, so every
/// colored edge ends up in exactly two subtrees.
pub fn decompose(state: &GameState) -> SubtreeDecomposition {
    let tree = state.tree();
    let colors = state.colors();
    let n = tree.vertex_count();
    let mut assigned = vec![false; n];
    let mut subtrees = Vec::new();

    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let has_uncolored = |v: usize| tree.adjacency(v).iter().any(|&(_, e)| colors[e] == 0);
        if !has_uncolored(start) {
            assigned[start] = true;
            let edges = tree.adjacency(start).iter().map(|&(_, e)| e).collect();
            subtrees.push(Subtree::build(state, edges, start));
            continue;
        }
        let mut edges = Vec::new();
        let mut stack = vec![start];
        assigned[start] = true;
        while let Some(x) = stack.pop() {
            for &(y, e) in tree.adjacency(x) {
                if colors[e] != 0 {
                    edges.push(e);
                } else {
                    if !edges.contains(&e) {
                        edges.push(e);
                    }
                    if !assigned[y] {
                        assigned[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        subtrees.push(Subtree::build(state, edges, start));
    }

    let mut owners = vec![Vec::new(); tree.edge_count()];
    for (i, s) in subtrees.iter().enumerate() {
        for &e in s.edges() {
            owners[e].push(i);
        }
    }
    SubtreeDecomposition { subtrees, owners }
}

/// Colored edges of `s` incident with a vertex of degree 1 in `s`.
pub fn count_colored_leaf_edges(s: &Subtree) -> usize {
    s.colored_leaf_edges().len()
}

/// Star-node degrees of a subtree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarNodeReport {
    /// `(global vertex, k(v))` for every vertex of the subtree.
    pub sn_degree: Vec<(usize, usize)>,
    /// `(global vertex, k)` for each vertex with `k(v) >= 3`.
    pub star_nodes: Vec<(usize, usize)>,
}

impl StarNodeReport {
    pub fn count_with_degree(&self, k: usize) -> usize {
        self.star_nodes.iter().filter(|&&(_, d)| d == k).count()
    }
}

/// `k(v)` is the number of `v`-branches holding a colored leaf-edge; paths
/// from `v` into distinct branches are edge-disjoint, and a colored
/// leaf-edge at `v` is its own branch reached by the trivial path.
pub fn star_nodes(s: &Subtree) -> StarNodeReport {
    let leafy: Vec<usize> = s.colored_leaf_edges().into_iter().map(|(e, _)| e).collect();
    let mut sn_degree = Vec::with_capacity(s.vertices.len());
    for v in 0..s.local.vertex_count() {
        let k = s
            .local
            .adjacency(v)
            .iter()
            .filter(|&&(_, first)| s.branch_edges(v, first).iter().any(|e| leafy.contains(e)))
            .count();
        sn_degree.push((s.vertices[v], k));
    }
    let star_nodes = sn_degree.iter().copied().filter(|&(_, k)| k >= 3).collect();
    StarNodeReport {
        sn_degree,
        star_nodes,
    }
}

/// Path (global vertices) from the root of the colored leaf-edge `edge` to
/// its nearest star-node; ties go to the lowest vertex index.
pub fn leaf_path(s: &Subtree, edge: usize) -> Result<Vec<usize>, StructureError> {
    let local_edge = s
        .edges
        .binary_search(&edge)
        .map_err(|_| StructureError::NotColoredLeafEdge { edge })?;
    let root = s
        .colored_leaf_edges()
        .into_iter()
        .find(|&(e, _)| e == local_edge)
        .map(|(_, r)| r)
        .ok_or(StructureError::NotColoredLeafEdge { edge })?;
    let report = star_nodes(s);
    let local_stars: Vec<usize> = report
        .star_nodes
        .iter()
        .map(|&(g, _)| s.vertices.binary_search(&g).expect("star-node in subtree"))
        .collect();
    if local_stars.is_empty() {
        return Err(StructureError::NoStarNode);
    }
    let dist = distances(&s.local, root);
    let target = local_stars
        .into_iter()
        .min_by_key(|&v| (dist[v], v))
        .expect("nonempty");
    Ok(s.local_path(root, target)
        .into_iter()
        .map(|v| s.vertices[v])
        .collect())
}

/// Path (global vertices) between two star-nodes.
pub fn star_path(s: &Subtree, a: usize, b: usize) -> Result<Vec<usize>, StructureError> {
    let report = star_nodes(s);
    for v in [a, b] {
        if !report.star_nodes.iter().any(|&(g, _)| g == v) {
            return Err(StructureError::NotStarNode { vertex: v });
        }
    }
    let la = s.vertices.binary_search(&a).expect("checked");
    let lb = s.vertices.binary_search(&b).expect("checked");
    Ok(s.local_path(la, lb)
        .into_iter()
        .map(|v| s.vertices[v])
        .collect())
}

fn distances(tree: &Tree, from: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; tree.vertex_count()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for &(y, _) in tree.adjacency(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ForbiddenPatterns {
    /// A claw formed by four 4-vertices.
    pub has_s34: bool,
    /// A path of four consecutive 4-vertices.
    pub has_p44: bool,
}

pub fn detect_forbidden(tree: &Tree) -> ForbiddenPatterns {
    let is4 = |v: usize| tree.adjacency(v).len() == 4;
    let four_neighbors = |v: usize| tree.adjacency(v).iter().filter(|&&(w, _)| is4(w)).count();
    let has_s34 = (0..tree.vertex_count()).any(|v| is4(v) && four_neighbors(v) >= 3);
    let has_p44 = tree.edges().iter().any(|&(b, c)| {
        is4(b)
            && is4(c)
            && tree.adjacency(b).iter().any(|&(a, _)| a != c && is4(a))
            && tree.adjacency(c).iter().any(|&(d, _)| d != b && is4(d))
    });
    ForbiddenPatterns { has_s34, has_p44 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubtreeKind {
    Type0,
    Type1,
    /// Exactly one star-node; the figure-defined exceptions are not checked.
    Type2Candidate,
    Type3,
    Type4,
    Unclassified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubtreeClass {
    pub kind: SubtreeKind,
    /// Number of colored leaf-edges.
    pub lct: usize,
    pub star_nodes: usize,
    pub is_type3: bool,
    pub is_type4: bool,
}

/// Classifies a subtree. Precedence: Type 0, then Type 1 (no star-node),
/// then Types 3 and 4, then Type 2 candidates (one star-node).
pub fn classify(s: &Subtree) -> SubtreeClass {
    let lct = count_colored_leaf_edges(s);
    let stars = star_nodes(s).star_nodes.len();
    let is_type3 = matches_type3(s);
    let is_type4 = matches_type4(s);
    let kind = if s.is_fully_colored() {
        SubtreeKind::Type0
    } else if stars == 0 {
        SubtreeKind::Type1
    } else if is_type3 {
        SubtreeKind::Type3
    } else if is_type4 {
        SubtreeKind::Type4
    } else if stars == 1 {
        SubtreeKind::Type2Candidate
    } else {
        SubtreeKind::Unclassified
    };
    SubtreeClass {
        kind,
        lct,
        star_nodes: stars,
        is_type3,
        is_type4,
    }
}

/// Local uncolored edges and per-vertex uncolored degree.
fn uncolored_structure(s: &Subtree) -> (Vec<usize>, Vec<usize>) {
    let uncolored: Vec<usize> = (0..s.colors.len()).filter(|&e| s.colors[e] == 0).collect();
    let mut deg = vec![0; s.local.vertex_count()];
    for &e in &uncolored {
        let (u, v) = s.local.edge(e);
        deg[u] += 1;
        deg[v] += 1;
    }
    (uncolored, deg)
}

fn uncolored_connected(s: &Subtree, uncolored: &[usize]) -> bool {
    let Some(&first) = uncolored.first() else {
        return true;
    };
    let mut reached = vec![first];
    let mut changed = true;
    while changed {
        changed = false;
        for &e in uncolored {
            if reached.contains(&e) {
                continue;
            }
            let (u, v) = s.local.edge(e);
            let touches = reached.iter().any(|&f| {
                let (a, b) = s.local.edge(f);
                [a, b].contains(&u) || [a, b].contains(&v)
            });
            if touches {
                reached.push(e);
                changed = true;
            }
        }
    }
    reached.len() == uncolored.len()
}

/// Uncolored edges induce a path of length 1 to 3; with one uncolored edge
/// it needs one available color, otherwise every uncolored edge needs two.
fn matches_type3(s: &Subtree) -> bool {
    let (uncolored, deg) = uncolored_structure(s);
    let m = uncolored.len();
    if !(1..=3).contains(&m) || deg.iter().any(|&d| d > 2) || !uncolored_connected(s, &uncolored) {
        return false;
    }
    let need = if m == 1 { 1 } else { 2 };
    uncolored.iter().all(|&e| s.available(e).len() >= need)
}

/// Uncolored edges are a path `v0..vm` (m = 3 or 4) plus a tree hanging
/// from `vm` only, where no vertex of that tree (vm included) touches a
/// colored edge; `v(m-1)vm` needs four available colors and the other path
/// edges two.
fn matches_type4(s: &Subtree) -> bool {
    let (uncolored, deg) = uncolored_structure(s);
    if uncolored.len() < 3 || !uncolored_connected(s, &uncolored) {
        return false;
    }
    let touches_color = |v: usize| s.local.adjacency(v).iter().any(|&(_, e)| s.colors[e] != 0);
    // v0 is an uncolored leaf; walk while the uncolored degree is 2.
    for v0 in (0..s.local.vertex_count()).filter(|&v| deg[v] == 1) {
        let mut path_vertices = vec![v0];
        let mut path_edges = Vec::new();
        let mut prev = usize::MAX;
        let mut cur = v0;
        loop {
            let step = s
                .local
                .adjacency(cur)
                .iter()
                .find(|&&(w, e)| s.colors[e] == 0 && w != prev)
                .copied();
            let Some((next, e)) = step else { break };
            path_edges.push(e);
            path_vertices.push(next);
            prev = cur;
            cur = next;
            let m = path_edges.len();
            if (3..=4).contains(&m)
                && type4_tail_ok(s, &path_vertices, &path_edges, &deg, &touches_color)
            {
                return true;
            }
            if m >= 4 || deg[cur] != 2 {
                break;
            }
        }
    }
    false
}

fn type4_tail_ok(
    s: &Subtree,
    path_vertices: &[usize],
    path_edges: &[usize],
    deg: &[usize],
    touches_color: &dyn Fn(usize) -> bool,
) -> bool {
    let m = path_edges.len();
    let vm = path_vertices[m];
    // Interior vertices carry only path edges among the uncolored ones.
    if path_vertices[1..m].iter().any(|&v| deg[v] != 2) {
        return false;
    }
    // The hanging tree: everything uncolored reachable from vm off the path.
    let mut tail = vec![vm];
    let mut stack = vec![vm];
    while let Some(x) = stack.pop() {
        for &(y, e) in s.local.adjacency(x) {
            if s.colors[e] == 0 && !path_edges.contains(&e) && !tail.contains(&y) {
                tail.push(y);
                stack.push(y);
            }
        }
    }
    if tail.iter().any(|&v| touches_color(v)) {
        return false;
    }
    path_edges.iter().enumerate().all(|(i, &e)| {
        let need = if i == m - 1 { 4 } else { 2 };
        s.available(e).len() >= need
    })
}
