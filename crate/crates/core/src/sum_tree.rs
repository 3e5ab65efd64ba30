//! Ordered map from keys to positive counts with subtree count sums.
//!
//! A treap stored in an arena. Every operation walks one root-to-leaf path,
//! so lookups, prefix sums, inserts and removals are O(log u) expected for
//! u distinct keys. Memory is proportional to the number of keys present.

use std::cmp::Ordering;

const NIL: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Node<K> {
    key: K,
    count: u64,
    sum: u64,
    prio: u32,
    left: u32,
    right: u32,
}

/// Result of [`SumTree::descend`].
#[derive(Debug, PartialEq, Eq)]
pub(crate) enum Descent<'a, K> {
    /// The search stopped at `key`, whose run starts at `before`.
    Found { key: &'a K, before: u64, count: u64 },
    /// The search fell off the tree; `before` is the count of all keys left of the gap.
    Gap { before: u64 },
}

#[derive(Clone, Debug)]
pub(crate) struct SumTree<K> {
    nodes: Vec<Node<K>>,
    free: Vec<u32>,
    root: u32,
    len: usize,
    rng: u64,
}

impl<K: Ord> Default for SumTree<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord> SumTree<K> {
    pub(crate) fn new() -> Self {
        SumTree { nodes: Vec::new(), free: Vec::new(), root: NIL, len: 0, rng: 0x9E37_79B9_7F4A_7C15 }
    }

    /// Number of distinct keys.
    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Sum of all counts.
    pub(crate) fn total(&self) -> u64 {
        self.sum(self.root)
    }

    pub(crate) fn get(&self, key: &K) -> u64 {
        self.sum_below_and_get(key).1
    }

    /// `(sum of counts of keys < key, count of key)`.
    pub(crate) fn sum_below_and_get(&self, key: &K) -> (u64, u64) {
        let mut t = self.root;
        let mut acc = 0;
        while t != NIL {
            let node = &self.nodes[t as usize];
            match key.cmp(&node.key) {
                Ordering::Less => t = node.left,
                Ordering::Equal => return (acc + self.sum(node.left), node.count),
                Ordering::Greater => {
                    acc += self.sum(node.left) + node.count;
                    t = node.right;
                }
            }
        }
        (acc, 0)
    }

    /// Walks down from the root. `decide(key, before, count)` says whether the
    /// target lies left of, inside, or right of the run of `key`.
    pub(crate) fn descend<F>(&self, mut decide: F) -> Descent<'_, K>
    where
        F: FnMut(&K, u64, u64) -> Ordering,
    {
        let mut t = self.root;
        let mut acc = 0;
        while t != NIL {
            let node = &self.nodes[t as usize];
            let before = acc + self.sum(node.left);
            match decide(&node.key, before, node.count) {
                Ordering::Less => t = node.left,
                Ordering::Equal => return Descent::Found { key: &node.key, before, count: node.count },
                Ordering::Greater => {
                    acc = before + node.count;
                    t = node.right;
                }
            }
        }
        Descent::Gap { before: acc }
    }

    /// The key whose run `[before, before + count)` contains `target`.
    pub(crate) fn find_cumulative(&self, target: u64) -> Option<(&K, u64, u64)> {
        match self.descend(|_, before, count| {
            if target < before {
                Ordering::Less
            } else if target - before < count {
                Ordering::Equal
            } else {
                Ordering::Greater
            }
        }) {
            Descent::Found { key, before, count } => Some((key, before, count)),
            Descent::Gap { .. } => None,
        }
    }

    /// Adds `delta` to the count of `key`, inserting it if absent.
    pub(crate) fn add(&mut self, key: K, delta: u64) {
        if delta == 0 {
            return;
        }
        let prio = self.next_prio();
        self.root = self.insert(self.root, key, delta, prio);
    }

    /// Subtracts `delta` from the count of `key`, dropping the key at zero.
    /// Returns `false` (and leaves the tree untouched) if the count is too small.
    pub(crate) fn sub(&mut self, key: &K, delta: u64) -> bool {
        if delta == 0 {
            return true;
        }
        if self.get(key) < delta {
            return false;
        }
        self.root = self.remove(self.root, key, delta);
        true
    }

    /// In-order `(key, count)` pairs.
    pub(crate) fn iter(&self) -> Iter<'_, K> {
        let mut it = Iter { tree: self, stack: Vec::new() };
        it.push_left(self.root);
        it
    }

    fn sum(&self, t: u32) -> u64 {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].sum
        }
    }

    fn prio(&self, t: u32) -> u32 {
        self.nodes[t as usize].prio
    }

    fn pull(&mut self, t: u32) {
        let (l, r) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        let s = self.nodes[t as usize].count + self.sum(l) + self.sum(r);
        self.nodes[t as usize].sum = s;
    }

    fn next_prio(&mut self) -> u32 {
        // xorshift64*
        self.rng ^= self.rng >> 12;
        self.rng ^= self.rng << 25;
        self.rng ^= self.rng >> 27;
        (self.rng.wrapping_mul(0x2545_F491_4F6C_DD1D) >> 32) as u32
    }

    fn alloc(&mut self, key: K, count: u64, prio: u32) -> u32 {
        let node = Node { key, count, sum: count, prio, left: NIL, right: NIL };
        self.len += 1;
        if let Some(i) = self.free.pop() {
            self.nodes[i as usize] = node;
            i
        } else {
            assert!(self.nodes.len() < NIL as usize, "tree capacity exceeded");
            self.nodes.push(node);
            (self.nodes.len() - 1) as u32
        }
    }

    fn rotate_right(&mut self, t: u32) -> u32 {
        let l = self.nodes[t as usize].left;
        self.nodes[t as usize].left = self.nodes[l as usize].right;
        self.nodes[l as usize].right = t;
        self.pull(t);
        self.pull(l);
        l
    }

    fn rotate_left(&mut self, t: u32) -> u32 {
        let r = self.nodes[t as usize].right;
        self.nodes[t as usize].right = self.nodes[r as usize].left;
        self.nodes[r as usize].left = t;
        self.pull(t);
        self.pull(r);
        r
    }

    fn insert(&mut self, t: u32, key: K, delta: u64, prio: u32) -> u32 {
        if t == NIL {
            return self.alloc(key, delta, prio);
        }
        match key.cmp(&self.nodes[t as usize].key) {
            Ordering::Equal => {
                let node = &mut self.nodes[t as usize];
                node.count += delta;
                node.sum += delta;
                t
            }
            Ordering::Less => {
                let l = self.insert(self.nodes[t as usize].left, key, delta, prio);
                self.nodes[t as usize].left = l;
                self.nodes[t as usize].sum += delta;
                if self.prio(l) > self.prio(t) {
                    self.rotate_right(t)
                } else {
                    t
                }
            }
            Ordering::Greater => {
                let r = self.insert(self.nodes[t as usize].right, key, delta, prio);
                self.nodes[t as usize].right = r;
                self.nodes[t as usize].sum += delta;
                if self.prio(r) > self.prio(t) {
                    self.rotate_left(t)
                } else {
                    t
                }
            }
        }
    }

    // Caller guarantees the key is present with count >= delta.
    fn remove(&mut self, t: u32, key: &K, delta: u64) -> u32 {
        debug_assert!(t != NIL);
        match key.cmp(&self.nodes[t as usize].key) {
            Ordering::Equal => {
                let node = &mut self.nodes[t as usize];
                node.count -= delta;
                node.sum -= delta;
                if node.count > 0 {
                    return t;
                }
                let (l, r) = (node.left, node.right);
                self.free.push(t);
                self.len -= 1;
                self.merge(l, r)
            }
            Ordering::Less => {
                let l = self.remove(self.nodes[t as usize].left, key, delta);
                self.nodes[t as usize].left = l;
                self.nodes[t as usize].sum -= delta;
                t
            }
            Ordering::Greater => {
                let r = self.remove(self.nodes[t as usize].right, key, delta);
                self.nodes[t as usize].right = r;
                self.nodes[t as usize].sum -= delta;
                t
            }
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.prio(a) > self.prio(b) {
            let r = self.merge(self.nodes[a as usize].right, b);
            self.nodes[a as usize].right = r;
            self.pull(a);
            a
        } else {
            let l = self.merge(a, self.nodes[b as usize].left);
            self.nodes[b as usize].left = l;
            self.pull(b);
            b
        }
    }
}

pub(crate) struct Iter<'a, K> {
    tree: &'a SumTree<K>,
    stack: Vec<u32>,
}

impl<K> Iter<'_, K> {
    fn push_left(&mut self, mut t: u32) {
        while t != NIL {
            self.stack.push(t);
            t = self.tree.nodes[t as usize].left;
        }
    }
}

impl<'a, K> Iterator for Iter<'a, K> {
    type Item = (&'a K, u64);

    fn next(&mut self) -> Option<Self::Item> {
        let t = self.stack.pop()?;
        let node = &self.tree.nodes[t as usize];
        self.push_left(node.right);
        Some((&node.key, node.count))
    }
}
