//! Multiset of canonical edges for sampling without replacement.
//!
//! Edges are laid out in lexicographic order; edge `e` with `c_e` copies owns
//! the contiguous slot run `[run_start, run_start + c_e)`. Drawing a uniform
//! slot therefore picks `e` with probability `c_e / total`.

use crate::ans::{SymbolRange, MAX_TOTAL};
use crate::error::{Error, Result};
use crate::fenwick::Records;
use crate::graph::{CanonicalEdge, GraphSpec};
use crate::sum_tree::SumTree;

#[derive(Clone, Debug, Default)]
pub struct EdgeMultiset {
    entries: SumTree<CanonicalEdge>,
}

impl EdgeMultiset {
    pub fn new() -> Self {
        EdgeMultiset { entries: SumTree::new() }
    }

    pub fn from_graph(g: &GraphSpec) -> Self {
        let mut ms = EdgeMultiset::new();
        for (e, c) in g.edges() {
            ms.entries.add(e.clone(), c);
        }
        ms
    }

    /// Remaining edge copies.
    pub fn total(&self) -> u64 {
        self.entries.total()
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, e: &CanonicalEdge) -> u64 {
        self.entries.get(e)
    }

    /// The edge whose run contains slot `j`, with its run as a coding range.
    pub fn locate_slot(&self, j: u64) -> Result<(CanonicalEdge, SymbolRange)> {
        let total = self.checked_total()?;
        match self.entries.find_cumulative(j) {
            Some((e, start, freq)) => Ok((e.clone(), SymbolRange { freq, start, total })),
            None => Err(Error::OutOfRange { what: "edge slot", value: j }),
        }
    }

    pub fn run_of(&self, e: &CanonicalEdge) -> Result<SymbolRange> {
        let total = self.checked_total()?;
        let (start, freq) = self.entries.sum_below_and_get(e);
        if freq == 0 {
            return Err(Error::Inconsistent("edge not present in multiset"));
        }
        Ok(SymbolRange { freq, start, total })
    }

    pub fn insert_one(&mut self, e: CanonicalEdge) {
        self.entries.add(e, 1);
    }

    pub fn remove_one(&mut self, e: &CanonicalEdge) -> Result<()> {
        if self.entries.sub(e, 1) {
            Ok(())
        } else {
            Err(Error::Inconsistent("removing an absent edge"))
        }
    }

    /// `(edge, count)` pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalEdge, u64)> {
        self.entries.iter()
    }

    fn checked_total(&self) -> Result<u64> {
        let total = self.entries.total();
        if total > MAX_TOTAL {
            return Err(Error::Bound(format!("{total} edge copies exceed 2^32")));
        }
        Ok(total)
    }
}

/// Removal-only edge multiset backed by flat arrays.
///
/// Slot layout is identical to [`EdgeMultiset`]; edges are addressed by their
/// lexicographic position among the distinct edges.
#[derive(Clone, Debug)]
pub struct FrozenEdgeMultiset {
    counts: Records,
}

impl FrozenEdgeMultiset {
    /// Payload of each edge is its vertex list.
    pub fn from_graph(g: &GraphSpec) -> Result<Self> {
        let counts: Vec<u64> = g.edges().map(|(_, c)| c).collect();
        let members: Vec<u32> = g.edges().flat_map(|(e, _)| e.vertices().to_vec()).collect();
        Self::from_counts(&counts, &members, g.arity())
    }

    /// Copy counts of the distinct edges in lexicographic order, summing below 2^32,
    /// with `width` payload values per edge kept alongside.
    pub fn from_counts(counts: &[u64], payloads: &[u32], width: usize) -> Result<Self> {
        let sum: u128 = counts.iter().map(|&c| u128::from(c)).sum();
        if sum >= u128::from(MAX_TOTAL) {
            return Err(Error::Bound(format!("{sum} edge copies exceed 2^32 - 1")));
        }
        if payloads.len() != counts.len() * width {
            return Err(Error::Inconsistent("payload length does not match edge count"));
        }
        Ok(FrozenEdgeMultiset { counts: Records::new(counts, payloads, width) })
    }

    /// Takes `[count, payload..]` records, `width` payload values each, laid out back to back.
    pub fn from_records(data: Vec<u32>, width: usize) -> Result<Self> {
        if !data.len().is_multiple_of(width + 1) {
            return Err(Error::Inconsistent("partial edge record"));
        }
        let sum: u64 = data.iter().step_by(width + 1).map(|&c| u64::from(c)).sum();
        if sum >= MAX_TOTAL {
            return Err(Error::Bound(format!("{sum} edge copies exceed 2^32 - 1")));
        }
        Ok(FrozenEdgeMultiset { counts: Records::from_data(data, width) })
    }

    /// Payload of the edge at position `i`.
    pub fn payload(&self, i: usize) -> &[u32] {
        self.counts.payload(i)
    }

    pub fn total(&self) -> u64 {
        self.counts.total()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.total() == 0
    }

    /// Position of the edge whose run contains slot `j`, with that run.
    pub fn locate_slot(&self, j: u64) -> Result<(usize, SymbolRange)> {
        let total = self.counts.total();
        if total > MAX_TOTAL {
            return Err(Error::Bound(format!("{total} edge copies exceed 2^32")));
        }
        if j >= total {
            return Err(Error::OutOfRange { what: "edge slot", value: j });
        }
        let (i, start) = self.counts.find(j);
        Ok((i, SymbolRange { freq: self.counts.count(i), start, total }))
    }

    pub fn remove_at(&mut self, i: usize) -> Result<()> {
        if self.counts.count(i) == 0 {
            return Err(Error::Inconsistent("removing an absent edge"));
        }
        self.counts.sub(i, 1);
        Ok(())
    }
}
