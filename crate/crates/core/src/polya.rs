//! Pólya urn conditional over vertices.
//!
//! The weight of vertex `v` is `d(v) + beta`, where `d(v)` is the number of
//! times `v` has been drawn so far. Only vertices with `d(v) > 0` are stored;
//! the base weight `beta` of every other vertex is accounted for analytically,
//! so memory depends on the number of touched vertices, never on `n`.

use std::cmp::Ordering;

use crate::ans::{SymbolRange, MAX_TOTAL};
use crate::error::{Error, Result};
use crate::fenwick::Fenwick;
use crate::graph::VertexId;
use crate::sum_tree::{Descent, SumTree};

#[derive(Clone, Debug)]
pub struct DegreeWeightTable {
    n: u64,
    beta: u64,
    degrees: SumTree<VertexId>,
}

impl DegreeWeightTable {
    /// Empty urn over vertices `1..=n` with bias `beta`.
    pub fn new(n: u64, beta: u64) -> Result<Self> {
        if n == 0 || n > u64::from(VertexId::MAX) {
            return Err(Error::OutOfRange { what: "vertex count", value: n });
        }
        if beta == 0 || n.checked_mul(beta).is_none_or(|b| b > u64::MAX / 2) {
            return Err(Error::OutOfRange { what: "beta", value: beta });
        }
        Ok(DegreeWeightTable { n, beta, degrees: SumTree::new() })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn degree(&self, v: VertexId) -> u64 {
        self.degrees.get(&v)
    }

    pub fn degree_sum(&self) -> u64 {
        self.degrees.total()
    }

    /// Number of vertices with non-zero degree.
    pub fn touched(&self) -> usize {
        self.degrees.len()
    }

    /// Normalizer `n * beta + sum_v d(v)`.
    pub fn total(&self) -> u64 {
        self.n * self.beta + self.degrees.total()
    }

    pub fn weight(&self, v: VertexId) -> Result<u64> {
        self.check_vertex(v)?;
        Ok(self.degree(v) + self.beta)
    }

    /// `sum_{u < v} (d(u) + beta)`, for `1 <= v <= n + 1`.
    pub fn cum_weight_below(&self, v: u64) -> Result<u64> {
        if v == 0 || v > self.n + 1 {
            return Err(Error::OutOfRange { what: "vertex", value: v });
        }
        let below = if v > u64::from(VertexId::MAX) {
            self.degrees.total()
        } else {
            self.degrees.sum_below_and_get(&(v as VertexId)).0
        };
        Ok((v - 1) * self.beta + below)
    }

    /// Coding range of `v` under the current conditional.
    pub fn symbol_range(&self, v: VertexId) -> Result<SymbolRange> {
        self.check_vertex(v)?;
        let (below, d) = self.degrees.sum_below_and_get(&v);
        let total = self.total();
        if total > MAX_TOTAL {
            return Err(Error::Bound(format!("urn total {total} exceeds 2^32")));
        }
        Ok(SymbolRange { freq: d + self.beta, start: u64::from(v - 1) * self.beta + below, total })
    }

    /// Inverse CDF: the vertex whose range covers `slot`.
    pub fn find_slot(&self, slot: u64) -> Result<(VertexId, SymbolRange)> {
        let total = self.total();
        if slot >= total {
            return Err(Error::OutOfRange { what: "slot", value: slot });
        }
        let beta = self.beta;
        let descent = self.degrees.descend(|&key, before, d| {
            let start = u64::from(key - 1) * beta + before;
            if slot < start {
                Ordering::Less
            } else if slot - start < d + beta {
                Ordering::Equal
            } else {
                Ordering::Greater
            }
        });
        let (v, freq, start) = match descent {
            Descent::Found { key, before, count } => (*key, count + beta, u64::from(*key - 1) * beta + before),
            Descent::Gap { before } => {
                // every vertex in the gap is untouched and weighs beta
                let v = (slot - before) / beta + 1;
                (v as VertexId, beta, (v - 1) * beta + before)
            }
        };
        Ok((v, SymbolRange { freq, start, total }))
    }

    /// Records one more draw of `v`.
    pub fn add(&mut self, v: VertexId) -> Result<()> {
        self.add_copies(v, 1)
    }

    pub fn add_copies(&mut self, v: VertexId, copies: u64) -> Result<()> {
        self.check_vertex(v)?;
        self.degrees.add(v, copies);
        Ok(())
    }

    /// Undoes one draw of `v`.
    pub fn remove(&mut self, v: VertexId) -> Result<()> {
        self.check_vertex(v)?;
        if !self.degrees.sub(&v, 1) {
            return Err(Error::Inconsistent("removing a vertex with zero degree"));
        }
        Ok(())
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v == 0 || u64::from(v) > self.n {
            return Err(Error::OutOfRange { what: "vertex", value: u64::from(v) });
        }
        Ok(())
    }
}

/// Removal-only urn over a vertex set fixed at construction.
///
/// Same conditionals as [`DegreeWeightTable`], backed by flat arrays. Vertices
/// are addressed by their position in the sorted vertex list, see
/// [`index_of`](Self::index_of).
#[derive(Clone, Debug)]
pub struct FrozenDegreeTable {
    n: u64,
    beta: u64,
    /// degrees tagged with their vertex
    degrees: Fenwick,
}

impl FrozenDegreeTable {
    /// `degrees` must be sorted by vertex, without duplicates.
    pub fn new(n: u64, beta: u64, degrees: impl IntoIterator<Item = (VertexId, u64)>) -> Result<Self> {
        let (vertices, degrees): (Vec<VertexId>, Vec<u64>) = degrees.into_iter().unzip();
        Self::from_parts(n, beta, vertices, &degrees)
    }

    /// Like [`new`](Self::new) with vertices and degrees in separate lists.
    pub fn from_parts(n: u64, beta: u64, vertices: Vec<VertexId>, degrees: &[u64]) -> Result<Self> {
        DegreeWeightTable::new(n, beta)?;
        if vertices.len() != degrees.len() {
            return Err(Error::Inconsistent("vertex and degree lists differ in length"));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Inconsistent("vertices not strictly increasing"));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v == 0 || u64::from(v) > n) {
            return Err(Error::OutOfRange { what: "vertex", value: u64::from(v) });
        }
        let sum: u128 = degrees.iter().map(|&d| u128::from(d)).sum();
        if sum >= u128::from(MAX_TOTAL) {
            return Err(Error::Bound(format!("degree sum {sum} exceeds 2^32 - 1")));
        }
        let degrees = Fenwick::from_entries(vertices.into_iter().zip(degrees.iter().copied()));
        Ok(FrozenDegreeTable { n, beta, degrees })
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.degrees.position_of_tag(v)
    }

    pub fn degree_sum(&self) -> u64 {
        self.degrees.total()
    }

    pub fn degree_at(&self, i: usize) -> u64 {
        self.degrees.count(i)
    }

    pub fn total(&self) -> u64 {
        self.n * self.beta + self.degrees.total()
    }

    /// Coding range of the vertex at position `i`.
    pub fn symbol_range_at(&self, i: usize) -> Result<SymbolRange> {
        let total = self.total();
        if total > MAX_TOTAL {
            return Err(Error::Bound(format!("urn total {total} exceeds 2^32")));
        }
        let v = u64::from(self.degrees.tag(i));
        Ok(SymbolRange {
            freq: self.degrees.count(i) + self.beta,
            start: (v - 1) * self.beta + self.degrees.prefix(i),
            total,
        })
    }

    /// Undoes one draw of the vertex at position `i`.
    pub fn remove_at(&mut self, i: usize) -> Result<()> {
        if self.degrees.count(i) == 0 {
            return Err(Error::Inconsistent("removing a vertex with zero degree"));
        }
        self.degrees.sub(i, 1);
        Ok(())
    }
}
