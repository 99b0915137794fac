//! Free trees obtained by decoding every Prüfer sequence and keeping one
//! labeled tree per isomorphism class.

use std::collections::HashSet;

use edgegame::Tree;

pub const MAX_N: usize = 10;

/// Adjacency bitmasks of a small tree.
pub type Adj = [u16; MAX_N];

pub fn decode(seq: &[u8], n: usize) -> Adj {
    let mut degree = [1u8; MAX_N];
    for &x in seq {
        degree[x as usize] += 1;
    }
    let mut adj = [0u16; MAX_N];
    let mut link = |a: usize, b: usize| {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    };
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        link(leaf, x as usize);
        degree[leaf] = 0;
        degree[x as usize] -= 1;
    }
    let mut rest = (0..n).filter(|&v| degree[v] == 1);
    let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
    link(a, b);
    adj
}

pub fn from_tree(tree: &Tree) -> Adj {
    let mut adj = [0u16; MAX_N];
    for &(u, v) in tree.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

/// Rooted code as (length, bits): '(' = 1, ')' = 0.
fn rooted(adj: &Adj, v: usize, parent: usize) -> (u32, u64) {
    let mut kids = [(0u32, 0u64); MAX_N];
    let mut count = 0;
    let mut rest = adj[v];
    while rest != 0 {
        let w = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if w != parent {
            kids[count] = rooted(adj, w, v);
            count += 1;
        }
    }
    kids[..count].sort_unstable();
    let (mut len, mut bits) = (1u32, 1u64);
    for &(l, b) in &kids[..count] {
        bits = (bits << l) | b;
        len += l;
    }
    (len + 1, bits << 1)
}

/// Subtree sizes and parents with the tree rooted at vertex 0.
fn sizes(adj: &Adj, n: usize) -> ([usize; MAX_N], [usize; MAX_N]) {
    let mut order = [0usize; MAX_N];
    let mut parent = [usize::MAX; MAX_N];
    let mut len = 1;
    let mut i = 0;
    while i < len {
        let v = order[i];
        let mut rest = adj[v];
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if w != parent[v] {
                parent[w] = v;
                order[len] = w;
                len += 1;
            }
        }
        i += 1;
    }
    let mut size = [1usize; MAX_N];
    for &v in order[1..n].iter().rev() {
        size[parent[v]] += size[v];
    }
    (size, parent)
}

/// Largest component left after deleting each vertex.
pub fn worst_branches(adj: &Adj, n: usize) -> [usize; MAX_N] {
    let (size, parent) = sizes(adj, n);
    let mut worst = [0usize; MAX_N];
    for v in 0..n {
        worst[v] = n - size[v];
    }
    for w in 1..n {
        let p = parent[w];
        worst[p] = worst[p].max(size[w]);
    }
    worst
}

/// Isomorphism-invariant code of a free tree on `n` vertices.
pub fn free_code(adj: &Adj, n: usize) -> u64 {
    let worst = worst_branches(adj, n);
    let best = *worst[..n].iter().min().unwrap();
    let mut cs = (0..n).filter(|&v| worst[v] == best);
    let a = cs.next().unwrap();
    match cs.next() {
        None => rooted(adj, a, usize::MAX).1,
        Some(b) => {
            let (x, y) = (rooted(adj, a, b).1, rooted(adj, b, a).1);
            (1 << 63) | (x.min(y) << 24) | x.max(y)
        }
    }
}

pub fn prufer_classes(n: usize) -> HashSet<u64> {
    let mut classes = HashSet::new();
    let len = n - 2;
    let mut seq = vec![0u8; len];
    loop {
        classes.insert(free_code(&decode(&seq, n), n));
        let mut i = 0;
        while i < len && seq[i] as usize == n - 1 {
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            break;
        }
        seq[i] += 1;
    }
    classes
}
