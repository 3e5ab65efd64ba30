//! Prefix sums over a fixed number of 32-bit counts whose total fits 32 bits.
//!
//! Counts are stored flat and grouped into blocks of [`BLOCK`]; a Fenwick
//! tree holds the block sums. The tree stays small enough to live in cache, so
//! a query costs one random miss into the block plus a short sequential scan,
//! started from whichever end of the block is nearer.
//! Each entry carries a 32-bit tag next to its count, so callers can keep a
//! per-entry value on the same cache line.

const BLOCK: usize = 64;
const LOW: u64 = 0xFFFF_FFFF;

/// Cache-line aligned, so a scan streams whole lines.
#[derive(Clone, Copy, Debug)]
#[repr(align(128))]
struct Block([u64; BLOCK]);

/// Fenwick tree over per-block sums, plus the sums themselves.
///
/// Entries are 32-bit, so the grand total must stay below 2^32.
#[derive(Clone, Debug)]
struct BlockTree {
    tree: Vec<u32>,
    sums: Vec<u32>,
    total: u64,
    top: usize,
}

impl BlockTree {
    fn from_sums(sums: Vec<u64>) -> Self {
        let total: u64 = sums.iter().sum();
        assert!(total <= LOW, "total {total} exceeds 32 bits");
        let sums: Vec<u32> = sums.into_iter().map(|s| s as u32).collect();
        let mut tree = Vec::with_capacity(sums.len() + 1);
        tree.push(0);
        tree.extend_from_slice(&sums);
        for i in 1..tree.len() {
            let parent = i + (i & i.wrapping_neg());
            if parent < tree.len() {
                tree[parent] += tree[i];
            }
        }
        let top = if sums.is_empty() { 0 } else { 1 << (usize::BITS - 1 - sums.len().leading_zeros()) };
        BlockTree { tree, sums, total, top }
    }

    /// Sum over blocks `< block`.
    fn prefix(&self, block: usize) -> u64 {
        let (mut acc, mut b) = (0, block);
        while b > 0 {
            acc += u64::from(self.tree[b]);
            b &= b - 1;
        }
        acc
    }

    fn block_sum(&self, block: usize) -> u64 {
        u64::from(self.sums[block])
    }

    fn sub(&mut self, block: usize, delta: u64) {
        let delta32 = delta as u32;
        self.total -= delta;
        self.sums[block] -= delta32;
        let mut b = block + 1;
        while b < self.tree.len() {
            self.tree[b] -= delta32;
            b += b & b.wrapping_neg();
        }
    }

    /// Block holding `slot`, and the slot's offset inside it.
    fn descend(&self, slot: u64) -> (usize, u64) {
        let (mut rest, mut pos, mut step) = (slot, 0, self.top);
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && u64::from(self.tree[next]) <= rest {
                rest -= u64::from(self.tree[next]);
                pos = next;
            }
            step >>= 1;
        }
        (pos, rest)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Fenwick {
    /// `tag << 32 | count`, grouped into blocks
    blocks: Vec<Block>,
    len: usize,
    sums: BlockTree,
}

impl Fenwick {
    /// Builds from `(tag, count)` pairs in O(len); every count must be below 2^32.
    pub(crate) fn from_entries(pairs: impl Iterator<Item = (u32, u64)>) -> Self {
        let (lower, _) = pairs.size_hint();
        let mut blocks: Vec<Block> = Vec::with_capacity(lower.div_ceil(BLOCK));
        let mut sums = Vec::with_capacity(blocks.capacity());
        let mut len = 0;
        for (tag, c) in pairs {
            assert!(c <= LOW, "count {c} exceeds 32 bits");
            if len % BLOCK == 0 {
                blocks.push(Block([0; BLOCK]));
                sums.push(0);
            }
            blocks[len / BLOCK].0[len % BLOCK] = (u64::from(tag) << 32) | c;
            sums[len / BLOCK] += c;
            len += 1;
        }
        Fenwick { blocks, len, sums: BlockTree::from_sums(sums) }
    }

    pub(crate) fn total(&self) -> u64 {
        self.sums.total
    }

    fn entry(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        self.blocks[i / BLOCK].0[i % BLOCK]
    }

    pub(crate) fn count(&self, i: usize) -> u64 {
        self.entry(i) & LOW
    }

    pub(crate) fn tag(&self, i: usize) -> u32 {
        (self.entry(i) >> 32) as u32
    }

    /// Position of `tag`, for entries built with increasing tags.
    pub(crate) fn position_of_tag(&self, tag: u32) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.tag(mid).cmp(&tag) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Sum of counts at positions `< i`.
    pub(crate) fn prefix(&self, i: usize) -> u64 {
        let (block, offset) = (i / BLOCK, i % BLOCK);
        let before = self.sums.prefix(block);
        let Some(entries) = self.blocks.get(block) else { return before };
        // scan from the nearer end of the block
        if offset <= BLOCK / 2 {
            before + entries.0[..offset].iter().map(|e| e & LOW).sum::<u64>()
        } else {
            before + self.sums.block_sum(block) - entries.0[offset..].iter().map(|e| e & LOW).sum::<u64>()
        }
    }

    /// Subtracts `delta` at position `i`; the caller guarantees the count stays non-negative.
    pub(crate) fn sub(&mut self, i: usize, delta: u64) {
        debug_assert!(self.count(i) >= delta);
        self.blocks[i / BLOCK].0[i % BLOCK] -= delta;
        self.sums.sub(i / BLOCK, delta);
    }

    /// Position `i` with `prefix(i) <= slot < prefix(i + 1)`, and `prefix(i)`.
    /// Requires `slot < total()`.
    #[cfg(test)]
    pub(crate) fn find(&self, slot: u64) -> (usize, u64) {
        debug_assert!(slot < self.total());
        let (pos, mut rest) = self.sums.descend(slot);
        let mut i = 0;
        let block = &self.blocks[pos].0;
        while block[i] & LOW <= rest {
            rest -= block[i] & LOW;
            i += 1;
        }
        (pos * BLOCK + i, slot - rest)
    }
}

/// Counts with a fixed-width `u32` payload stored right after each count, so
/// finding a slot brings its payload into cache with it.
#[derive(Clone, Debug)]
pub(crate) struct Records {
    /// `[count, payload..]` per record
    data: Vec<u32>,
    width: usize,
    sums: BlockTree,
}

impl Records {
    /// `payloads` holds `counts.len()` runs of `width` values; counts must fit 32 bits.
    pub(crate) fn new(counts: &[u64], payloads: &[u32], width: usize) -> Self {
        assert_eq!(payloads.len(), counts.len() * width);
        let mut data = Vec::with_capacity(counts.len() * (width + 1));
        for (i, &c) in counts.iter().enumerate() {
            assert!(c <= LOW, "count {c} exceeds 32 bits");
            data.push(c as u32);
            data.extend_from_slice(&payloads[i * width..(i + 1) * width]);
        }
        Self::from_data(data, width)
    }

    /// Takes `[count, payload..]` records laid out back to back.
    pub(crate) fn from_data(data: Vec<u32>, width: usize) -> Self {
        let stride = width + 1;
        assert_eq!(data.len() % stride, 0, "partial record");
        let mut sums = vec![0u64; (data.len() / stride).div_ceil(BLOCK)];
        for (i, record) in data.chunks_exact(stride).enumerate() {
            sums[i / BLOCK] += u64::from(record[0]);
        }
        Records { data, width, sums: BlockTree::from_sums(sums) }
    }

    pub(crate) fn total(&self) -> u64 {
        self.sums.total
    }

    pub(crate) fn count(&self, i: usize) -> u64 {
        u64::from(self.data[i * (self.width + 1)])
    }

    pub(crate) fn payload(&self, i: usize) -> &[u32] {
        let at = i * (self.width + 1) + 1;
        &self.data[at..at + self.width]
    }

    pub(crate) fn sub(&mut self, i: usize, delta: u64) {
        debug_assert!(self.count(i) >= delta);
        self.data[i * (self.width + 1)] -= delta as u32;
        self.sums.sub(i / BLOCK, delta);
    }

    /// As [`Fenwick::find`], scanning the block from the nearer end.
    pub(crate) fn find(&self, slot: u64) -> (usize, u64) {
        debug_assert!(slot < self.total());
        let (pos, rest) = self.sums.descend(slot);
        let sum = self.sums.block_sum(pos);
        if rest < sum / 2 {
            let (mut i, mut acc) = (pos * BLOCK, 0);
            loop {
                let next = acc + self.count(i);
                if next > rest {
                    return (i, slot - rest + acc);
                }
                acc = next;
                i += 1;
            }
        }
        // the last record with a start at or below `rest` holds the slot
        let len = self.data.len() / (self.width + 1);
        let (mut i, mut acc) = (((pos + 1) * BLOCK).min(len), sum);
        loop {
            i -= 1;
            acc -= self.count(i);
            if acc <= rest {
                return (i, slot - rest + acc);
            }
        }
    }
}
