#![allow(dead_code)]

use grec_core::{GraphSpec, VertexId};
use rand::Rng;

/// Vertex sequence drawn from the urn with bias `beta`, one vertex at a time.
///
/// A draw is a fresh uniform vertex with probability `n beta / (n beta + i)`,
/// otherwise a copy of a uniformly chosen earlier draw.
pub fn urn_sequence<R: Rng>(n: u64, beta: u64, k: usize, rng: &mut R) -> Vec<VertexId> {
    let mut seq: Vec<VertexId> = Vec::with_capacity(k);
    for i in 0..k {
        let total = n * beta + i as u64;
        let slot = rng.gen_range(0..total);
        let v = if slot < n * beta { (slot / beta + 1) as VertexId } else { seq[(slot - n * beta) as usize] };
        seq.push(v);
    }
    seq
}

/// Preferential-attachment graph: consecutive urn draws grouped into edges.
pub fn urn_graph<R: Rng>(n: u64, m: u64, directed: bool, rng: &mut R) -> GraphSpec {
    let seq = urn_sequence(n, 1, 2 * m as usize, rng);
    GraphSpec::from_edges(n, 2, directed, seq.chunks(2)).unwrap()
}

/// Edges with uniformly random endpoints; loops and repeats allowed.
pub fn uniform_graph<R: Rng>(n: u64, m: u64, arity: usize, directed: bool, rng: &mut R) -> GraphSpec {
    let mut g = GraphSpec::new(n, arity, directed).unwrap();
    let mut e = vec![0; arity];
    for _ in 0..m {
        for v in e.iter_mut() {
            *v = rng.gen_range(1..=n as VertexId);
        }
        g.add_edge(&e).unwrap();
    }
    g
}

/// Integer drawn log-uniformly from `[lo, hi]`.
pub fn log_uniform<R: Rng>(lo: u64, hi: u64, rng: &mut R) -> u64 {
    let x = rng.gen_range((lo as f64).ln()..=(hi as f64).ln()).exp().round() as u64;
    x.clamp(lo, hi)
}
