//! Trees, edge colorings and the plain-text edge-list formats.
//!
//! Vertices and edges are identified by index. A [`Tree`] is validated on
//! construction (connected, acyclic, simple) and never mutated afterwards, so
//! it can be shared freely between threads behind an `Arc`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use thiserror::Error;

/// Largest palette the crate supports; colors are stored in a `u32` bitmask.
pub const MAX_COLORS: u8 = 31;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for a tree on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("edge index {edge} out of range ({edge_count} edges)")]
    EdgeOutOfRange { edge: usize, edge_count: usize },
    #[error("edge {edge} is a self-loop")]
    SelfLoop { edge: usize },
    #[error("edge {edge} duplicates an earlier edge")]
    DuplicateEdge { edge: usize },
    #[error("edge {edge} closes a cycle")]
    Cycle { edge: usize },
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
}

/// An error from [`parse_tree`] or [`parse_position`], tagged with the
/// 1-based line and column where it was detected.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub reason: ParseReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseReason {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Structure(#[from] TreeError),
    #[error("color {color} on edge {edge} is out of range")]
    BadColor { edge: usize, color: u32 },
    #[error("edge {edge} is colored twice")]
    Recolored { edge: usize },
    #[error("edges {first} and {second} share an endpoint and both carry color {color}")]
    Improper {
        first: usize,
        second: usize,
        color: u8,
    },
}

/// An unrooted tree with index-identified vertices and edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    edges: Vec<(usize, usize)>,
    /// Per vertex: `(neighbor, edge index)` in edge-index order.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Tree {
    /// Builds a tree on `vertex_count` vertices from an edge list, checking
    /// that it is simple, acyclic and spanning.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, TreeError> {
        if vertex_count == 0 {
            return Err(TreeError::Empty);
        }
        let mut dsu = DisjointSets::new(vertex_count);
        for (i, &(u, v)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= vertex_count {
                    return Err(TreeError::VertexOutOfRange {
                        vertex: x,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(TreeError::SelfLoop { edge: i });
            }
            if edges[..i]
                .iter()
                .any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
            {
                return Err(TreeError::DuplicateEdge { edge: i });
            }
            if !dsu.union(u, v) {
                return Err(TreeError::Cycle { edge: i });
            }
        }
        if edges.len() != vertex_count - 1 {
            return Err(TreeError::EdgeCount {
                expected: vertex_count - 1,
                found: edges.len(),
            });
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adjacency[u].push((v, i));
            adjacency[v].push((u, i));
        }
        Ok(Tree { edges, adjacency })
    }

    /// The path with `length` edges, vertices numbered along the path.
    pub fn path(length: usize) -> Self {
        let edges = (0..length).map(|i| (i, i + 1)).collect();
        Tree::new(length + 1, edges).expect("a path is a tree")
    }

    /// The star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges = (1..=leaves).map(|i| (0, i)).collect();
        Tree::new(leaves + 1, edges).expect("a star is a tree")
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// `(neighbor, edge)` pairs incident with `v`.
    pub fn adjacency(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> Result<usize, TreeError> {
        self.adjacency
            .get(v)
            .map(Vec::len)
            .ok_or(TreeError::VertexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count(),
            })
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges sharing an endpoint with `e`, excluding `e` itself.
    pub fn adjacent_edges(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        let (u, v) = self.edges[e];
        self.adjacency[u]
            .iter()
            .chain(&self.adjacency[v])
            .map(|&(_, f)| f)
            .filter(move |&f| f != e)
    }

    /// Every edge with a pendant endpoint, paired with its root (the
    /// non-pendant endpoint). In `K_2` both endpoints are pendant and the
    /// lower-indexed vertex is reported as the root.
    pub fn leaf_edges(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(e, &(u, v))| {
                let (du, dv) = (self.adjacency[u].len(), self.adjacency[v].len());
                match (du, dv) {
                    (1, 1) => Some((e, u.min(v))),
                    (1, _) => Some((e, v)),
                    (_, 1) => Some((e, u)),
                    _ => None,
                }
            })
            .collect()
    }

    /// The same tree with vertex `v` renamed to `perm[v]`; edge order and
    /// orientation are kept.
    pub fn relabeled(&self, perm: &[usize]) -> Tree {
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        Tree::new(self.vertex_count(), edges).expect("relabeling preserves tree structure")
    }

    /// Serializes to the edge-list text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.vertex_count());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// A set of colors `1..=MAX_COLORS` packed into a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ColorSet(u32);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    /// `{1, ..., k}`.
    pub fn palette(k: u8) -> Self {
        debug_assert!(k <= MAX_COLORS);
        ColorSet(((1u64 << (k as u32 + 1)) - 2) as u32)
    }

    pub fn single(c: u8) -> Self {
        if c == 0 {
            ColorSet(0)
        } else {
            ColorSet(1 << c)
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, c: u8) -> bool {
        c != 0 && c <= MAX_COLORS && self.0 & (1 << c) != 0
    }

    pub fn insert(&mut self, c: u8) {
        self.0 |= ColorSet::single(c).0;
    }

    pub fn remove(&mut self, c: u8) {
        self.0 &= !ColorSet::single(c).0;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn difference(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & !other.0)
    }

    /// Colors in increasing order.
    pub fn iter(self) -> impl Iterator<Item = u8> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let c = bits.trailing_zeros() as u8;
            bits &= bits - 1;
            Some(c)
        })
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<u8> for ColorSet {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        let mut s = ColorSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

/// Per-edge colors in `0..=k`, where 0 means uncolored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    colors: Vec<u8>,
    k: u8,
}

impl EdgeColoring {
    pub fn uncolored(edge_count: usize, k: u8) -> Self {
        EdgeColoring {
            colors: vec![0; edge_count],
            k,
        }
    }

    /// Wraps an explicit color vector; colors must lie in `0..=k` and the
    /// coloring must be proper on `tree`.
    pub fn from_colors(tree: &Tree, colors: Vec<u8>, k: u8) -> Result<Self, ParseReason> {
        if colors.len() != tree.edge_count() {
            return Err(TreeError::EdgeCount {
                expected: tree.edge_count(),
                found: colors.len(),
            }
            .into());
        }
        for (e, &c) in colors.iter().enumerate() {
            if c > k {
                return Err(ParseReason::BadColor {
                    edge: e,
                    color: c as u32,
                });
            }
        }
        if let Some((first, second, color)) = first_conflict(tree, &colors) {
            return Err(ParseReason::Improper {
                first,
                second,
                color,
            });
        }
        Ok(EdgeColoring { colors, k })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn color(&self, e: usize) -> u8 {
        self.colors[e]
    }

    pub fn is_colored(&self, e: usize) -> bool {
        self.colors[e] != 0
    }

    pub(crate) fn set(&mut self, e: usize, c: u8) {
        self.colors[e] = c;
    }

    pub fn is_proper(&self, tree: &Tree) -> bool {
        first_conflict(tree, &self.colors).is_none()
    }
}

fn first_conflict(tree: &Tree, colors: &[u8]) -> Option<(usize, usize, u8)> {
    for v in 0..tree.vertex_count() {
        let adj = tree.adjacency(v);
        for (i, &(_, e)) in adj.iter().enumerate() {
            for &(_, f) in &adj[i + 1..] {
                if colors[e] != 0 && colors[e] == colors[f] {
                    return Some((e.min(f), e.max(f), colors[e]));
                }
            }
        }
    }
    None
}

/// Parses the tree text format: a vertex count line followed by one `u v`
/// line per edge. Blank lines and `#` comments are ignored.
pub fn parse_tree(text: &str) -> Result<Tree, ParseError> {
    let (tree, colors) = parse_lines(text, false)?;
    debug_assert!(colors.is_empty());
    Ok(tree)
}

/// Parses the position format: the tree format plus `c e x` lines giving
/// edge `e` color `x >= 1`. Returns the tree and per-edge colors (0 where
/// no `c` line was given). Colors are checked for properness but not
/// against a palette.
pub fn parse_position(text: &str) -> Result<(Tree, Vec<u8>), ParseError> {
    let (tree, assignments) = parse_lines(text, true)?;
    let mut colors = vec![0u8; tree.edge_count()];
    for (line, edge, color) in assignments {
        let at = |reason| ParseError {
            line,
            column: 1,
            reason,
        };
        if edge >= tree.edge_count() {
            return Err(at(TreeError::EdgeOutOfRange {
                edge,
                edge_count: tree.edge_count(),
            }
            .into()));
        }
        if color == 0 || color > MAX_COLORS as u32 {
            return Err(at(ParseReason::BadColor { edge, color }));
        }
        if colors[edge] != 0 {
            return Err(at(ParseReason::Recolored { edge }));
        }
        colors[edge] = color as u8;
    }
    if let Some((first, second, color)) = first_conflict(&tree, &colors) {
        return Err(ParseError {
            line: 1,
            column: 1,
            reason: ParseReason::Improper {
                first,
                second,
                color,
            },
        });
    }
    Ok((tree, colors))
}

type ColorLine = (usize, usize, u32);

fn parse_lines(text: &str, allow_colors: bool) -> Result<(Tree, Vec<ColorLine>), ParseError> {
    let mut vertex_count: Option<usize> = None;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    let mut colors = Vec::new();
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        if tokens.is_empty() {
            continue;
        }
        let syntax = |column: usize, msg: String| ParseError {
            line,
            column,
            reason: ParseReason::Syntax(msg),
        };
        let number = |(col, tok): (usize, &str)| -> Result<usize, ParseError> {
            tok.parse::<usize>().map_err(|_| {
                syntax(
                    col,
                    format!("expected a non-negative integer, found `{tok}`"),
                )
            })
        };

        match vertex_count {
            None => {
                if tokens.len() != 1 {
                    return Err(syntax(tokens[1].0, "expected a single vertex count".into()));
                }
                vertex_count = Some(number(tokens[0])?);
            }
            Some(_) if tokens[0].1 == "c" => {
                if !allow_colors {
                    return Err(syntax(
                        tokens[0].0,
                        "color lines are only allowed in positions".into(),
                    ));
                }
                if tokens.len() != 3 {
                    return Err(syntax(tokens[0].0, "expected `c <edge> <color>`".into()));
                }
                let edge = number(tokens[1])?;
                let color = number(tokens[2])?;
                colors.push((line, edge, u32::try_from(color).unwrap_or(u32::MAX)));
            }
            Some(n) => {
                if tokens.len() != 2 {
                    return Err(syntax(tokens[0].0, "expected `<u> <v>`".into()));
                }
                let u = number(tokens[0])?;
                let v = number(tokens[1])?;
                for (x, (col, _)) in [(u, tokens[0]), (v, tokens[1])] {
                    if x >= n {
                        return Err(ParseError {
                            line,
                            column: col,
                            reason: TreeError::VertexOutOfRange {
                                vertex: x,
                                vertex_count: n,
                            }
                            .into(),
                        });
                    }
                }
                edges.push((u, v));
                edge_lines.push(line);
            }
        }
    }

    let n = vertex_count.ok_or(ParseError {
        line: 1,
        column: 1,
        reason: ParseReason::Syntax("missing vertex count".into()),
    })?;
    let tree = Tree::new(n, edges).map_err(|err| {
        let line = match err {
            TreeError::SelfLoop { edge }
            | TreeError::DuplicateEdge { edge }
            | TreeError::Cycle { edge } => edge_lines[edge],
            _ => last_line,
        };
        ParseError {
            line,
            column: 1,
            reason: err.into(),
        }
    })?;
    Ok((tree, colors))
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokenize(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(st)) => {
                out.push((st + 1, &s[st..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((st + 1, &s[st..]));
    }
    out
}
