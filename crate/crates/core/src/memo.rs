//! Transposition tables for the solver.

use core::cell::RefCell;

use lru::LruCache;

use crate::canon::CanonicalKey;

/// Default number of entries kept by [`LruMemo`].
pub const DEFAULT_MEMO_CAPACITY: usize = 1 << 22;

/// Maps canonical positions to whether Alice wins them. Entries are never
/// changed once written; an implementation may drop them at any time.
pub trait Memo {
    fn get(&self, key: &CanonicalKey) -> Option<bool>;
    fn insert(&self, key: CanonicalKey, alice_wins: bool);
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<M: Memo + ?Sized> Memo for &M {
    fn get(&self, key: &CanonicalKey) -> Option<bool> {
        (**self).get(key)
    }

    fn insert(&self, key: CanonicalKey, alice_wins: bool) {
        (**self).insert(key, alice_wins)
    }

    fn len(&self) -> usize {
        (**self).len()
    }
}

/// Single-threaded bounded table with least-recently-used eviction.
/// Storage grows on demand up to the capacity.
pub struct LruMemo {
    cache: RefCell<LruCache<CanonicalKey, bool>>,
    capacity: usize,
}

impl LruMemo {
    /// A capacity of zero is treated as one.
    pub fn new(capacity: usize) -> Self {
        LruMemo {
            cache: RefCell::new(LruCache::unbounded()),
            capacity: capacity.max(1),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn clear(&self) {
        self.cache.borrow_mut().clear();
    }
}

impl Default for LruMemo {
    fn default() -> Self {
        LruMemo::new(DEFAULT_MEMO_CAPACITY)
    }
}

impl Memo for LruMemo {
    fn get(&self, key: &CanonicalKey) -> Option<bool> {
        self.cache.borrow_mut().get(key).copied()
    }

    fn insert(&self, key: CanonicalKey, alice_wins: bool) {
        let mut cache = self.cache.borrow_mut();
        if !cache.contains(&key) {
            if cache.len() >= self.capacity {
                cache.pop_lru();
            }
            cache.put(key, alice_wins);
        }
    }

    fn len(&self) -> usize {
        self.cache.borrow().len()
    }
}

/// A table that stores nothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoMemo;

impl Memo for NoMemo {
    fn get(&self, _: &CanonicalKey) -> Option<bool> {
        None
    }

    fn insert(&self, _: CanonicalKey, _: bool) {}

    fn len(&self) -> usize {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::TreeShape;
    use crate::game::Player;
    use crate::tree::Tree;

    #[test]
    fn evicts_least_recent() {
        let shape = TreeShape::new(&Tree::path(3)).unwrap();
        let a = shape.key(&[0, 0, 0], 3, Player::Alice);
        let b = shape.key(&[1, 0, 0], 3, Player::Alice);
        let c = shape.key(&[0, 1, 0], 3, Player::Alice);
        let memo = LruMemo::new(2);
        memo.insert(a, true);
        memo.insert(b, false);
        assert_eq!(memo.get(&a), Some(true));
        memo.insert(c, true);
        assert_eq!(memo.get(&b), None);
        assert_eq!(memo.len(), 2);
        memo.insert(a, false);
        assert_eq!(memo.get(&a), Some(true));
    }
}
