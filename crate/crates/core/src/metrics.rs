//! Information content of graphs under the Pólya urn.
//!
//! A graph `G` with `m` edge copies has many vertex sequences mapping to it,
//! all with the same probability. Hence
//!
//! ```text
//! -log2 P(G) = -log2 P(v^k) - log2 |class(G)|
//! ```
//!
//! where the sequence term only depends on the final degrees through ascending
//! factorials, and the class size counts edge arrangements (a multinomial in
//! the copy counts) times the distinct orderings inside every undirected edge.
//!
//! The log-domain functions are generic over [`Float`]; the probability
//! functions accept any field-like scalar, so the same code yields `f64`
//! estimates and exact [`BigRational`](num_rational::BigRational) values.

use std::collections::HashMap;
use std::ops::{Div, Mul};

use num_traits::{Float, FromPrimitive, One};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::codec::HEADER_LEN;
use crate::error::{Error, Result};
use crate::graph::{GraphSpec, VertexId};
use crate::polya::DegreeWeightTable;

/// Information content of a graph: sequence NLL, class size and graph NLL.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NllReport<F> {
    pub sequence_nll_bits: F,
    pub class_log_size_bits: F,
    pub graph_nll_bits: F,
    /// `(graph_nll_bits + header_bits) / m`; zero for an empty graph.
    pub bits_per_edge: F,
    pub header_bits: u64,
}

impl<F: Float + FromPrimitive> NllReport<F> {
    /// Graph NLL per edge copy without the container header.
    pub fn raw_bits_per_edge(&self, m: u64) -> F {
        per_edge(self.graph_nll_bits, m)
    }

    pub fn sequence_bits_per_edge(&self, m: u64) -> F {
        per_edge(self.sequence_nll_bits, m)
    }
}

fn per_edge<F: Float + FromPrimitive>(bits: F, m: u64) -> F {
    if m == 0 {
        F::zero()
    } else {
        bits / F::from_u64(m).expect("finite")
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug)]
pub struct CompensatedSum<F> {
    sum: F,
    carry: F,
}

impl<F: Float> Default for CompensatedSum<F> {
    fn default() -> Self {
        CompensatedSum { sum: F::zero(), carry: F::zero() }
    }
}

impl<F: Float> CompensatedSum<F> {
    pub fn add(&mut self, x: F) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> F {
        self.sum + self.carry
    }
}

fn log2_of<F: Float + FromPrimitive>(x: u64) -> F {
    F::from_u64(x).expect("finite").log2()
}

/// `sum_{i=0}^{k-1} log2(base + i)`, the log of the ascending factorial `base^(k)`.
pub fn log2_ascending_factorial<F: Float + FromPrimitive>(base: u64, k: u64) -> F {
    let mut acc = CompensatedSum::default();
    for i in 0..k {
        acc.add(log2_of::<F>(base + i));
    }
    acc.value()
}

/// `log2(k!)`.
pub fn log2_factorial<F: Float + FromPrimitive>(k: u64) -> F {
    log2_ascending_factorial(1, k)
}

/// NLL in bits of any vertex sequence with the given final degrees:
/// `log2((n beta)^(k)) - sum_v log2(beta^(d(v)))`.
pub fn sequence_nll<F, I>(degrees: I, k: u64, n: u64, beta: u64) -> Result<F>
where
    F: Float + FromPrimitive,
    I: IntoIterator<Item = u64>,
{
    if n == 0 || beta == 0 {
        return Err(Error::OutOfRange { what: if n == 0 { "vertex count" } else { "beta" }, value: 0 });
    }
    let mut degrees: Vec<u64> = degrees.into_iter().filter(|&d| d > 0).collect();
    if degrees.len() as u64 > n {
        return Err(Error::OutOfRange { what: "touched vertices", value: degrees.len() as u64 });
    }
    let sum: u64 = degrees.iter().sum();
    if sum != k {
        return Err(Error::Bound(format!("degree sum {sum} differs from draw count {k}")));
    }
    let mut acc = CompensatedSum::default();
    acc.add(log2_ascending_factorial::<F>(n * beta, k));
    // log2(beta^(d)) for all d up to the largest degree, shared across vertices
    degrees.sort_unstable();
    let mut prefix = CompensatedSum::<F>::default();
    let mut at = 0u64;
    for d in degrees {
        while at < d {
            prefix.add(log2_of::<F>(beta + at));
            at += 1;
        }
        acc.add(-prefix.value());
    }
    Ok(acc.value())
}

/// `log2 |class(g)|`: edge arrangements times within-edge orderings.
pub fn class_log_size<F: Float + FromPrimitive>(g: &GraphSpec) -> F {
    let mut acc = CompensatedSum::default();
    acc.add(log2_factorial::<F>(g.m()));
    for (e, c) in g.edges() {
        acc.add(-log2_factorial::<F>(c));
        if !g.is_directed() {
            let w: F = log2_of(e.orderings());
            acc.add(w * F::from_u64(c).expect("finite"));
        }
    }
    acc.value()
}

/// Sequence NLL, class size and graph NLL of `g`, with the container header counted per edge.
pub fn graph_nll<F: Float + FromPrimitive>(g: &GraphSpec, beta: u64) -> Result<NllReport<F>> {
    let k = g.m() * g.arity() as u64;
    let sequence_nll_bits: F = sequence_nll(g.degrees().into_values(), k, g.n(), beta)?;
    let class_log_size_bits: F = class_log_size(g);
    let graph_nll_bits = (sequence_nll_bits - class_log_size_bits).max(F::zero());
    let header_bits = 8 * HEADER_LEN as u64;
    let bits_per_edge = if g.m() == 0 {
        F::zero()
    } else {
        (graph_nll_bits + F::from_u64(header_bits).expect("finite")) / F::from_u64(g.m()).expect("finite")
    };
    Ok(NllReport { sequence_nll_bits, class_log_size_bits, graph_nll_bits, bits_per_edge, header_bits })
}

/// Probability of a vertex sequence as the product of urn conditionals
/// `(d(v) + beta) / (i + n beta)`.
pub fn sequence_probability<T>(seq: &[VertexId], n: u64, beta: u64) -> Result<T>
where
    T: Clone + One + Mul<Output = T> + Div<Output = T> + FromPrimitive,
{
    let mut table = DegreeWeightTable::new(n, beta)?;
    let mut p = T::one();
    for &v in seq {
        let num = T::from_u64(table.weight(v)?).expect("representable");
        let den = T::from_u64(table.total()).expect("representable");
        p = p * num / den;
        table.add(v)?;
    }
    Ok(p)
}

/// Closed form of the same probability: `prod_v beta^(d(v)) / (n beta)^(k)`.
pub fn joint_probability<T>(degrees: &[u64], n: u64, beta: u64) -> T
where
    T: Clone + One + Mul<Output = T> + Div<Output = T> + FromPrimitive,
{
    let k: u64 = degrees.iter().sum();
    let mut p = T::one();
    for &d in degrees {
        for j in 0..d {
            p = p * T::from_u64(beta + j).expect("representable");
        }
    }
    for i in 0..k {
        p = p / T::from_u64(n * beta + i).expect("representable");
    }
    p
}

/// `log2` of the product of urn conditionals along `seq`.
pub fn sequence_log2_probability<F: Float + FromPrimitive>(seq: &[VertexId], n: u64, beta: u64) -> Result<F> {
    let mut table = DegreeWeightTable::new(n, beta)?;
    let mut acc = CompensatedSum::default();
    for &v in seq {
        acc.add(log2_of::<F>(table.weight(v)?) - log2_of::<F>(table.total()));
        table.add(v)?;
    }
    Ok(acc.value())
}

/// Largest sequence length checked with exact rational arithmetic by [`check_vpi`].
pub const EXACT_VPI_MAX_LEN: usize = 20;

/// Tolerance in bits for the log-domain comparison of [`check_vpi`].
pub const VPI_LOG_TOLERANCE: f64 = 1e-9;

/// Checks that the urn assigns `seq` the same probability as `trials` random
/// permutations of it.
pub fn check_vpi<R: Rng + ?Sized>(seq: &[VertexId], n: u64, beta: u64, trials: usize, rng: &mut R) -> Result<bool> {
    let mut perm = seq.to_vec();
    if seq.len() <= EXACT_VPI_MAX_LEN {
        use num_rational::BigRational;
        let base: BigRational = sequence_probability(seq, n, beta)?;
        for _ in 0..trials {
            perm.shuffle(rng);
            if sequence_probability::<BigRational>(&perm, n, beta)? != base {
                return Ok(false);
            }
        }
    } else {
        let base: f64 = sequence_log2_probability(seq, n, beta)?;
        for _ in 0..trials {
            perm.shuffle(rng);
            let p: f64 = sequence_log2_probability(&perm, n, beta)?;
            if (p - base).abs() >= VPI_LOG_TOLERANCE {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Final degrees of a vertex sequence.
pub fn sequence_degrees(seq: &[VertexId]) -> Vec<u64> {
    let mut counts: HashMap<VertexId, u64> = HashMap::new();
    for &v in seq {
        *counts.entry(v).or_default() += 1;
    }
    counts.into_values().collect()
}
