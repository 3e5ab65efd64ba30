//! Canonical labeled multigraphs.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Vertex label in `[1, n]`.
pub type VertexId = u32;

/// An edge with its vertices sorted ascending (undirected) or kept in order (directed).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalEdge(SmallVec<[VertexId; 4]>);

impl CanonicalEdge {
    pub fn new(vertices: &[VertexId], directed: bool) -> Self {
        let mut v: SmallVec<[VertexId; 4]> = SmallVec::from_slice(vertices);
        if !directed {
            v.sort_unstable();
        }
        CanonicalEdge(v)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Distinct orderings of the edge's vertex multiset, `a! / prod_v mult(v)!`.
    pub fn orderings(&self) -> u64 {
        let mut sorted: SmallVec<[VertexId; 4]> = self.0.clone();
        sorted.sort_unstable();
        let mut result: u64 = 1;
        let mut run = 0u64;
        for (i, v) in sorted.iter().enumerate() {
            run = if i > 0 && sorted[i - 1] == *v { run + 1 } else { 1 };
            // multiply by (i+1) and divide by the running multiplicity: stays integral
            result = result * (i as u64 + 1) / run;
        }
        result
    }
}

impl fmt::Debug for CanonicalEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A graph as the multiset of its canonical edges.
///
/// Two graphs are equal iff they agree on `n`, arity, directedness and the
/// edge-count map; input order never matters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphSpec {
    n: u64,
    arity: usize,
    directed: bool,
    edges: BTreeMap<CanonicalEdge, u64>,
    m: u64,
}

impl GraphSpec {
    pub fn new(n: u64, arity: usize, directed: bool) -> Result<Self> {
        if n == 0 || n > u64::from(VertexId::MAX) {
            return Err(Error::OutOfRange { what: "vertex count", value: n });
        }
        if !(2..=255).contains(&arity) {
            return Err(Error::OutOfRange { what: "arity", value: arity as u64 });
        }
        Ok(GraphSpec { n, arity, directed, edges: BTreeMap::new(), m: 0 })
    }

    /// Builds a graph from a list of edges given as vertex slices.
    pub fn from_edges<E: AsRef<[VertexId]>>(
        n: u64,
        arity: usize,
        directed: bool,
        edges: impl IntoIterator<Item = E>,
    ) -> Result<Self> {
        let mut g = GraphSpec::new(n, arity, directed)?;
        for e in edges {
            g.add_edge(e.as_ref())?;
        }
        Ok(g)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Number of edge copies.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Number of distinct edges.
    pub fn distinct_edges(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edges with their copy counts, in lexicographic order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = (&CanonicalEdge, u64)> {
        self.edges.iter().map(|(e, c)| (e, *c))
    }

    pub fn count(&self, edge: &CanonicalEdge) -> u64 {
        self.edges.get(edge).copied().unwrap_or(0)
    }

    pub fn add_edge(&mut self, vertices: &[VertexId]) -> Result<()> {
        self.add_edge_copies(vertices, 1)
    }

    pub fn add_edge_copies(&mut self, vertices: &[VertexId], copies: u64) -> Result<()> {
        if vertices.len() != self.arity {
            return Err(Error::OutOfRange { what: "edge arity", value: vertices.len() as u64 });
        }
        if let Some(&v) = vertices.iter().find(|&&v| v == 0 || u64::from(v) > self.n) {
            return Err(Error::OutOfRange { what: "vertex", value: u64::from(v) });
        }
        if copies == 0 {
            return Ok(());
        }
        *self.edges.entry(CanonicalEdge::new(vertices, self.directed)).or_default() += copies;
        self.m += copies;
        Ok(())
    }

    /// Keeps one copy of every distinct edge.
    pub fn dedup(&mut self) {
        for c in self.edges.values_mut() {
            *c = 1;
        }
        self.m = self.edges.len() as u64;
    }

    /// Vertex degrees counted over edge copies; a loop counts its vertex twice.
    pub fn degrees(&self) -> BTreeMap<VertexId, u64> {
        let mut deg = BTreeMap::new();
        for (e, c) in &self.edges {
            for &v in e.vertices() {
                *deg.entry(v).or_default() += c;
            }
        }
        deg
    }

    /// Vertex sequence with edges in lexicographic order, each copy repeated.
    pub fn edge_sorted_sequence(&self) -> Vec<VertexId> {
        let mut seq = Vec::with_capacity(self.m as usize * self.arity);
        for (e, c) in &self.edges {
            for _ in 0..*c {
                seq.extend_from_slice(e.vertices());
            }
        }
        seq
    }
}

/// Canonical multiset equality.
pub fn graphs_equal(a: &GraphSpec, b: &GraphSpec) -> bool {
    a == b
}
