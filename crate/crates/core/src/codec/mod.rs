//! Random edge coding and its inverse.
//!
//! The encoder turns a graph into one of its vertex sequences while paying
//! only for the graph: edges are drawn without replacement by *decoding* from
//! the ANS state, the vertices within each edge are drawn the same way, and
//! every vertex is then *encoded* with the urn conditional. The decoder runs
//! the steps backwards, re-encoding every draw, and ends on the initial state.
//!
//! Encoder step `i` pairs with decoder step `j = m - i + 1`. At that point the
//! multiset holds edges `1..=j` of the decoder's order and the degree table,
//! once the drawn edge is removed, holds exactly what the decoder has seen
//! before step `j`. Vertex `p_t` of the drawn edge is encoded conditioned on
//! that plus `p_{t+1}..p_a`, so the decoder meets `p_a` first.

mod header;
pub mod naive;

pub use header::{CodecHeader, HEADER_LEN, MAGIC, VERSION};

use crate::ans::{AnsState, SymbolRange, MAX_TOTAL};
use crate::edge_multiset::{EdgeMultiset, FrozenEdgeMultiset};
use crate::error::{Error, Result};
use crate::graph::{CanonicalEdge, GraphSpec, VertexId};
use crate::polya::{DegreeWeightTable, FrozenDegreeTable};

/// Checks that every coding total stays within 2^32.
pub fn check_bounds(n: u64, arity: usize, m: u64, beta: u64) -> Result<()> {
    if beta == 0 {
        return Err(Error::OutOfRange { what: "beta", value: 0 });
    }
    if n == 0 || n > u64::from(VertexId::MAX) {
        return Err(Error::OutOfRange { what: "vertex count", value: n });
    }
    if !(2..=255).contains(&arity) {
        return Err(Error::OutOfRange { what: "arity", value: arity as u64 });
    }
    let urn_total = u128::from(n) * u128::from(beta) + arity as u128 * u128::from(m);
    if urn_total > u128::from(MAX_TOTAL) {
        return Err(Error::Bound(format!("n*beta + arity*m = {urn_total} exceeds 2^32")));
    }
    if m > MAX_TOTAL {
        return Err(Error::Bound(format!("m = {m} exceeds 2^32")));
    }
    Ok(())
}

pub fn header_for(g: &GraphSpec, beta: u64) -> CodecHeader {
    CodecHeader { directed: g.is_directed(), arity: g.arity() as u8, beta, n: g.n(), m: g.m() }
}

/// Runs the encoder from the initial state and returns the final state.
pub fn encode_payload(g: &GraphSpec, beta: u64) -> Result<AnsState> {
    check_bounds(g.n(), g.arity(), g.m(), beta)?;
    let arity = g.arity();
    let layout = IndexedEdges::new(g);
    // both structures only shrink while encoding, so flat arrays suffice
    let mut table = FrozenDegreeTable::from_parts(g.n(), beta, layout.vertices, &layout.degrees)?;
    let mut edges = FrozenEdgeMultiset::from_records(layout.records, arity)?;
    let mut state = AnsState::new();
    let mut residual: Vec<u32> = Vec::with_capacity(arity);
    let mut picks: Vec<u32> = Vec::with_capacity(arity);

    while !edges.is_empty() {
        let at = state.decode(edges.total(), |j| edges.locate_slot(j))?;
        edges.remove_at(at)?;
        let e = edges.payload(at);
        // start every vertex lookup of this edge now so the cache misses overlap
        for &v in e {
            std::hint::black_box(table.degree_at(v as usize));
        }

        picks.clear();
        if g.is_directed() {
            picks.extend_from_slice(e);
        } else {
            // positions are ordered like the vertices, so the draw is the same
            residual.clear();
            residual.extend_from_slice(e);
            while residual.len() > 1 {
                let p = state.decode(residual.len() as u64, |j| {
                    let v = residual[j as usize];
                    Ok((v, pick_range(&residual, v)))
                })?;
                let at = residual.iter().position(|&x| x == p).expect("picked from residual");
                residual.remove(at);
                picks.push(p);
            }
            // the last pick is certain
            picks.extend_from_slice(&residual);
        }

        for &p in &picks {
            table.remove_at(p as usize)?;
            state.encode(table.symbol_range_at(p as usize)?)?;
        }
    }
    if table.degree_sum() != 0 {
        return Err(Error::Inconsistent("degree table not drained"));
    }
    Ok(state)
}

/// Distinct edges with each vertex replaced by its position among the touched vertices.
struct IndexedEdges {
    vertices: Vec<VertexId>,
    degrees: Vec<u64>,
    /// `[count, position..]` per distinct edge, `arity` positions each.
    records: Vec<u32>,
}

impl IndexedEdges {
    fn new(g: &GraphSpec) -> Self {
        let arity = g.arity();
        let stride = arity + 1;
        // counts are below 2^32 by the coding bounds; positions are filled below
        let mut records = vec![0u32; g.distinct_edges() * stride];
        for (record, (_, c)) in records.chunks_exact_mut(stride).zip(g.edges()) {
            record[0] = c as u32;
        }
        // (vertex, occurrence) pairs sorted by vertex; occurrence < a * m <= 2^32
        let mut occurrences: Vec<u64> = g
            .edges()
            .flat_map(|(e, _)| e.vertices().iter())
            .enumerate()
            .map(|(k, &v)| (u64::from(v) << 32) | k as u64)
            .collect();
        sort_by_high_word(&mut occurrences);
        let (mut vertices, mut degrees) = (Vec::new(), Vec::new());
        for key in occurrences {
            let (v, k) = ((key >> 32) as VertexId, (key & 0xFFFF_FFFF) as usize);
            if vertices.last() != Some(&v) {
                vertices.push(v);
                degrees.push(0);
            }
            // count and position share a cache line
            let record = &mut records[k / arity * stride..][..stride];
            *degrees.last_mut().expect("pushed above") += u64::from(record[0]);
            record[1 + k % arity] = (vertices.len() - 1) as u32;
        }
        IndexedEdges { vertices, degrees, records }
    }
}

/// Runs the decoder on a payload state, returning the graph and the final state.
pub fn decode_payload(header: &CodecHeader, mut state: AnsState) -> Result<(GraphSpec, AnsState)> {
    let arity = header.arity as usize;
    check_bounds(header.n, arity, header.m, header.beta)?;
    let mut graph = GraphSpec::new(header.n, arity, header.directed)?;
    let mut table = DegreeWeightTable::new(header.n, header.beta)?;
    let mut edges = EdgeMultiset::new();
    let mut drawn: Vec<VertexId> = Vec::with_capacity(arity);
    let mut residual: Vec<VertexId> = Vec::with_capacity(arity);

    for _ in 0..header.m {
        drawn.clear();
        for _ in 0..arity {
            let v = state.decode(table.total(), |slot| table.find_slot(slot))?;
            table.add(v)?;
            drawn.push(v);
        }
        // the encoder emitted p_1..p_a, so the decoder sees them reversed
        drawn.reverse();
        if !header.directed {
            residual.clear();
            for &p in drawn.iter().rev() {
                let at = residual.partition_point(|&x| x <= p);
                residual.insert(at, p);
                state.encode(pick_range(&residual, p))?;
            }
        }
        let edge = CanonicalEdge::new(&drawn, header.directed);
        edges.insert_one(edge.clone());
        state.encode(edges.run_of(&edge)?)?;
        graph.add_edge(edge.vertices())?;
    }
    Ok((graph, state))
}

/// Compresses `g` into a self-describing container.
pub fn encode_graph(g: &GraphSpec, beta: u64) -> Result<Vec<u8>> {
    check_bounds(g.n(), g.arity(), g.m(), beta)?;
    let mut out = Vec::new();
    header_for(g, beta).write_to(&mut out);
    if g.m() > 0 {
        encode_payload(g, beta)?.flush_into(&mut out);
    }
    Ok(out)
}

/// Decompresses a container, checking that every borrowed bit was returned.
pub fn decode_graph(bytes: &[u8]) -> Result<GraphSpec> {
    decode_container(bytes).map(|(_, g)| g)
}

pub fn decode_container(bytes: &[u8]) -> Result<(CodecHeader, GraphSpec)> {
    let (header, payload) = CodecHeader::parse(bytes)?;
    if header.m == 0 {
        if !payload.is_empty() {
            return Err(Error::CorruptStream("payload present for an empty graph"));
        }
        check_bounds(header.n, header.arity as usize, 0, header.beta)?;
        let g = GraphSpec::new(header.n, header.arity as usize, header.directed)?;
        return Ok((header, g));
    }
    let state = AnsState::restore(payload)?;
    let (g, final_state) = decode_payload(&header, state)?;
    if !final_state.is_initial() {
        return Err(Error::Integrity("decoder did not return to the initial state"));
    }
    Ok((header, g))
}

/// LSD radix sort on the upper 32 bits, two 16-bit digits.
fn sort_by_high_word(keys: &mut Vec<u64>) {
    let mut scratch = vec![0u64; keys.len()];
    for shift in [32u32, 48] {
        let mut offsets = vec![0usize; 1 << 16];
        for &k in keys.iter() {
            offsets[((k >> shift) & 0xFFFF) as usize] += 1;
        }
        let mut sum = 0;
        for o in offsets.iter_mut() {
            (*o, sum) = (sum, sum + *o);
        }
        for &k in keys.iter() {
            let d = ((k >> shift) & 0xFFFF) as usize;
            scratch[offsets[d]] = k;
            offsets[d] += 1;
        }
        std::mem::swap(keys, &mut scratch);
    }
}

/// Range of value `v` among the sorted values `residual`, counting multiplicity.
fn pick_range(residual: &[VertexId], v: VertexId) -> SymbolRange {
    let start = residual.partition_point(|&x| x < v);
    let end = residual.partition_point(|&x| x <= v);
    SymbolRange { freq: (end - start) as u64, start: start as u64, total: residual.len() as u64 }
}
