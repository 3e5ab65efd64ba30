//! Reference coder that draws the whole permutation up front.
//!
//! Every vertex sequence equivalent to the graph (reorder edges, reorder
//! vertices inside undirected edges) gets an index in `[0, class_size)`.
//! The encoder decodes one index uniformly, applies it to the edge-sorted
//! sequence and encodes the resulting sequence with the urn. Only practical
//! for a handful of edges; it exists to cross-check the incremental coder.

use crate::ans::{AnsState, MAX_TOTAL};
use crate::error::{Error, Result};
use crate::graph::{CanonicalEdge, GraphSpec, VertexId};
use crate::polya::DegreeWeightTable;

use super::{check_bounds, header_for, CodecHeader};

/// Largest edge count accepted by the naive coder.
pub const NAIVE_MAX_EDGES: u64 = 8;

/// Equivalence class of vertex sequences mapping to one graph.
#[derive(Clone, Debug)]
pub struct EquivalenceClass {
    directed: bool,
    edges: Vec<(CanonicalEdge, u64)>,
    arrangements: u128,
    orderings: u128,
}

impl EquivalenceClass {
    pub fn new(g: &GraphSpec) -> Result<Self> {
        if g.m() > NAIVE_MAX_EDGES {
            return Err(Error::TooLarge(format!("{} edges (naive coder takes at most {NAIVE_MAX_EDGES})", g.m())));
        }
        let edges: Vec<(CanonicalEdge, u64)> = g.edges().map(|(e, c)| (e.clone(), c)).collect();
        let counts: Vec<u64> = edges.iter().map(|(_, c)| *c).collect();
        let arrangements = multinomial(&counts);
        let orderings = if g.is_directed() {
            1
        } else {
            edges.iter().map(|(e, c)| u128::from(e.orderings()).pow(*c as u32)).product()
        };
        Ok(EquivalenceClass { directed: g.is_directed(), edges, arrangements, orderings })
    }

    /// Number of distinct vertex sequences in the class.
    pub fn size(&self) -> u128 {
        self.arrangements * self.orderings
    }

    /// The sequence with the given index.
    pub fn unrank(&self, index: u128) -> Result<Vec<VertexId>> {
        if index >= self.size() {
            return Err(Error::OutOfRange { what: "class index", value: index as u64 });
        }
        let items: Vec<(&CanonicalEdge, u64)> = self.edges.iter().map(|(e, c)| (e, *c)).collect();
        let order = unrank_multiset(&items, index / self.orderings);
        let mut within = index % self.orderings;
        let mut digits = vec![0u128; order.len()];
        for (t, e) in order.iter().enumerate().rev() {
            let w = self.edge_orderings(e);
            digits[t] = within % w;
            within /= w;
        }
        let mut seq = Vec::new();
        for (e, digit) in order.iter().zip(digits) {
            if self.directed {
                seq.extend_from_slice(e.vertices());
            } else {
                let verts = vertex_items(e);
                let refs: Vec<(&VertexId, u64)> = verts.iter().map(|(v, c)| (v, *c)).collect();
                seq.extend(unrank_multiset(&refs, digit).into_iter().copied());
            }
        }
        Ok(seq)
    }

    /// Index of a sequence; inverse of [`unrank`](Self::unrank).
    pub fn rank(&self, seq: &[VertexId]) -> Result<u128> {
        let arity = self.edges.first().map_or(1, |(e, _)| e.arity());
        if seq.len() as u128 != self.edges.iter().map(|(_, c)| u128::from(*c)).sum::<u128>() * arity as u128 {
            return Err(Error::Inconsistent("sequence length does not match the class"));
        }
        let chunks: Vec<&[VertexId]> = seq.chunks(arity).collect();
        let order: Vec<CanonicalEdge> = chunks.iter().map(|c| CanonicalEdge::new(c, self.directed)).collect();
        let items: Vec<(&CanonicalEdge, u64)> = self.edges.iter().map(|(e, c)| (e, *c)).collect();
        let refs: Vec<&CanonicalEdge> = order.iter().collect();
        let arrangement = rank_multiset(&items, &refs)?;
        let mut within = 0u128;
        for (e, chunk) in order.iter().zip(&chunks) {
            let w = self.edge_orderings(e);
            let digit = if self.directed {
                0
            } else {
                let verts = vertex_items(e);
                let items: Vec<(&VertexId, u64)> = verts.iter().map(|(v, c)| (v, *c)).collect();
                let refs: Vec<&VertexId> = chunk.iter().collect();
                rank_multiset(&items, &refs)?
            };
            within = within * w + digit;
        }
        Ok(arrangement * self.orderings + within)
    }

    /// All sequences of the class, in index order.
    pub fn sequences(&self) -> impl Iterator<Item = Vec<VertexId>> + '_ {
        (0..self.size()).map(|i| self.unrank(i).expect("index in range"))
    }

    fn edge_orderings(&self, e: &CanonicalEdge) -> u128 {
        if self.directed {
            1
        } else {
            u128::from(e.orderings())
        }
    }
}

/// Encoder state after running the naive coder from the initial state.
pub fn naive_encode_payload(g: &GraphSpec, beta: u64) -> Result<AnsState> {
    check_bounds(g.n(), g.arity(), g.m(), beta)?;
    let class = EquivalenceClass::new(g)?;
    let size = class.size();
    if size > u128::from(MAX_TOTAL) {
        return Err(Error::TooLarge(format!("equivalence class of size {size}")));
    }
    let mut state = AnsState::new();
    let index = state.decode_uniform(size as u64)?;
    let seq = class.unrank(u128::from(index))?;

    let mut table = DegreeWeightTable::new(g.n(), beta)?;
    for &v in &seq {
        table.add(v)?;
    }
    for &v in seq.iter().rev() {
        table.remove(v)?;
        state.encode(table.symbol_range(v)?)?;
    }
    Ok(state)
}

pub fn naive_encode(g: &GraphSpec, beta: u64) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    if g.m() == 0 {
        check_bounds(g.n(), g.arity(), 0, beta)?;
        header_for(g, beta).write_to(&mut out);
        return Ok(out);
    }
    let state = naive_encode_payload(g, beta)?;
    header_for(g, beta).write_to(&mut out);
    state.flush_into(&mut out);
    Ok(out)
}

pub fn naive_decode(bytes: &[u8]) -> Result<GraphSpec> {
    let (header, payload) = CodecHeader::parse(bytes)?;
    let arity = header.arity as usize;
    check_bounds(header.n, arity, header.m, header.beta)?;
    if header.m > NAIVE_MAX_EDGES {
        return Err(Error::TooLarge(format!("{} edges", header.m)));
    }
    let mut graph = GraphSpec::new(header.n, arity, header.directed)?;
    if header.m == 0 {
        if !payload.is_empty() {
            return Err(Error::CorruptStream("payload present for an empty graph"));
        }
        return Ok(graph);
    }
    let mut state = AnsState::restore(payload)?;
    let mut table = DegreeWeightTable::new(header.n, header.beta)?;
    let mut seq = Vec::with_capacity(arity * header.m as usize);
    for _ in 0..arity * header.m as usize {
        let v = state.decode(table.total(), |slot| table.find_slot(slot))?;
        table.add(v)?;
        seq.push(v);
    }
    for chunk in seq.chunks(arity) {
        graph.add_edge(chunk)?;
    }
    let class = EquivalenceClass::new(&graph)?;
    let index = class.rank(&seq)?;
    state.encode_uniform(index as u64, class.size() as u64)?;
    if !state.is_initial() {
        return Err(Error::Integrity("decoder did not return to the initial state"));
    }
    Ok(graph)
}

fn vertex_items(e: &CanonicalEdge) -> Vec<(VertexId, u64)> {
    let mut sorted = e.vertices().to_vec();
    sorted.sort_unstable();
    let mut items: Vec<(VertexId, u64)> = Vec::new();
    for v in sorted {
        match items.last_mut() {
            Some((last, c)) if *last == v => *c += 1,
            _ => items.push((v, 1)),
        }
    }
    items
}

/// `(sum c)! / prod c!`.
fn multinomial(counts: &[u64]) -> u128 {
    let mut result = 1u128;
    let mut n = 0u128;
    for &c in counts {
        for i in 1..=u128::from(c) {
            n += 1;
            result = result * n / i;
        }
    }
    result
}

/// Distinct permutations of a multiset in lexicographic order; `items` sorted by key.
fn unrank_multiset<T: Copy>(items: &[(T, u64)], mut rank: u128) -> Vec<T> {
    let mut counts: Vec<u64> = items.iter().map(|(_, c)| *c).collect();
    let len: u64 = counts.iter().sum();
    let mut out = Vec::with_capacity(len as usize);
    for _ in 0..len {
        for i in 0..items.len() {
            if counts[i] == 0 {
                continue;
            }
            counts[i] -= 1;
            let below = multinomial(&counts);
            if rank < below {
                out.push(items[i].0);
                break;
            }
            rank -= below;
            counts[i] += 1;
        }
    }
    out
}

fn rank_multiset<T: PartialEq + Copy>(items: &[(T, u64)], seq: &[T]) -> Result<u128> {
    let mut counts: Vec<u64> = items.iter().map(|(_, c)| *c).collect();
    let mut rank = 0u128;
    for x in seq {
        let Some(at) = items.iter().position(|(k, _)| k == x) else {
            return Err(Error::Inconsistent("symbol not in multiset"));
        };
        for i in 0..at {
            if counts[i] > 0 {
                counts[i] -= 1;
                rank += multinomial(&counts);
                counts[i] += 1;
            }
        }
        if counts[at] == 0 {
            return Err(Error::Inconsistent("symbol used too often"));
        }
        counts[at] -= 1;
    }
    Ok(rank)
}
