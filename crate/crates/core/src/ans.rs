//! Stack-like (LIFO) rANS coder with a 96-bit head and 32-bit words.
//!
//! Distributions are given as integer ranges `(freq, start, total)` with an
//! arbitrary total up to 2^32. Internally every range is mapped onto the
//! fixed total 2^32 by flooring the cumulative endpoints, which is monotone
//! and keeps every `freq >= 1` symbol non-empty. This keeps encode and decode
//! exact inverses of each other in both orders, which bits-back coding needs:
//! decoding from an arbitrary state and encoding the result back must restore
//! the state bit for bit.
//!
//! The head lives in `[2^64, 2^96)` while words are on the stack, so it is
//! always at least 2^32 times the coding precision and the per-step excess
//! over `log2(total / freq)` stays around 2^-32 bits. With an empty stack the
//! head may drop below 2^64; this happens right after the deterministic
//! initial state is used as a source of randomness.

use crate::error::{Error, Result};

/// Lower bound of the head while words are on the stack.
pub const HEAD_MIN: u128 = 1 << 64;

/// Largest total accepted for a single coding step.
pub const MAX_TOTAL: u64 = 1 << 32;

/// Serialized size of the head.
pub const HEAD_BYTES: usize = 12;

const WORD_BITS: u32 = 32;
const WORD_MASK: u64 = (1 << WORD_BITS) - 1;

/// Half-open slot range `[start, start + freq)` of one symbol out of `total`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymbolRange {
    pub freq: u64,
    pub start: u64,
    pub total: u64,
}

impl SymbolRange {
    pub fn new(freq: u64, start: u64, total: u64) -> Result<Self> {
        let range = SymbolRange { freq, start, total };
        range.validate()?;
        Ok(range)
    }

    /// The only symbol of a one-letter alphabet. Coding it is a no-op.
    pub const fn certain() -> Self {
        SymbolRange { freq: 1, start: 0, total: 1 }
    }

    pub fn contains(&self, slot: u64) -> bool {
        slot >= self.start && slot - self.start < self.freq
    }

    /// Ideal codelength `log2(total / freq)`.
    pub fn information_bits(&self) -> f64 {
        (self.total as f64).log2() - (self.freq as f64).log2()
    }

    fn validate(&self) -> Result<()> {
        let ok = self.freq >= 1
            && self.total >= 1
            && self.total <= MAX_TOTAL
            && self.start < self.total
            && self.freq <= self.total - self.start;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidRange { freq: self.freq, start: self.start, total: self.total })
        }
    }

    /// Maps the range onto total 2^32, returning `(freq, start)` at that scale.
    fn quantized(&self) -> (u64, u64) {
        if self.total.is_power_of_two() {
            let shift = WORD_BITS - self.total.trailing_zeros();
            return (self.freq << shift, self.start << shift);
        }
        // start < total <= 2^32, so start << 32 fits in u64.
        let lo = (self.start << WORD_BITS) / self.total;
        let end = self.start + self.freq;
        let hi = if end == self.total { MAX_TOTAL } else { (end << WORD_BITS) / self.total };
        (hi - lo, lo)
    }
}

/// Maps a 32-bit slot back to the slot `j in [0, total)` whose quantized range holds it.
fn unquantize(slot: u64, total: u64) -> u64 {
    // slot < 2^32 and total <= 2^32: the sum is at most 2^64 - 1.
    (slot * total + (total - 1)) >> WORD_BITS
}

/// The coder state: a head below 2^96 and a stack of 32-bit words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnsState {
    head: u128,
    words: Vec<u32>,
}

impl Default for AnsState {
    fn default() -> Self {
        Self::new()
    }
}

impl AnsState {
    /// Deterministic initial state: head = 2^64, no words.
    pub fn new() -> Self {
        AnsState { head: HEAD_MIN, words: Vec::new() }
    }

    pub fn head(&self) -> u128 {
        self.head
    }

    /// Words bottom to top.
    pub fn words(&self) -> &[u32] {
        &self.words
    }

    pub fn is_initial(&self) -> bool {
        self.head == HEAD_MIN && self.words.is_empty()
    }

    /// Pushes a symbol. Grows the state by about `log2(total / freq)` bits.
    pub fn encode(&mut self, range: SymbolRange) -> Result<()> {
        range.validate()?;
        let (freq, start) = range.quantized();
        if freq == MAX_TOTAL {
            return Ok(());
        }
        if (self.head >> 64) as u64 >= freq {
            self.words.push(self.head as u32);
            self.head >>= WORD_BITS;
        }
        // head < 2^96 and freq < 2^32: long division in two 64-bit steps
        let upper = (self.head >> WORD_BITS) as u64;
        let (q1, r1) = (upper / freq, upper % freq);
        let lower = (r1 << WORD_BITS) | (self.head as u64 & WORD_MASK);
        let (q0, r0) = (lower / freq, lower % freq);
        self.head = (u128::from(q1) << 64) + (u128::from(q0) << WORD_BITS) + u128::from(r0 + start);
        Ok(())
    }

    /// Pops a symbol from a distribution with the given total.
    ///
    /// `locate` receives a slot in `[0, total)` and must return the symbol
    /// whose range covers it. Used on a state that carries no message this
    /// samples from the distribution; encoding the result gives the bits back.
    pub fn decode<S, F>(&mut self, total: u64, locate: F) -> Result<S>
    where
        F: FnOnce(u64) -> Result<(S, SymbolRange)>,
    {
        if total == 0 || total > MAX_TOTAL {
            return Err(Error::OutOfRange { what: "total", value: total });
        }
        let slot = self.head as u64 & WORD_MASK;
        let j = unquantize(slot, total);
        let (symbol, range) = locate(j)?;
        if range.total != total || !range.contains(j) {
            return Err(Error::Inconsistent("located range does not cover the decoded slot"));
        }
        range.validate()?;
        let (freq, start) = range.quantized();
        debug_assert!(slot >= start && slot - start < freq);
        let upper = (self.head >> WORD_BITS) as u64;
        self.head = u128::from(freq) * u128::from(upper) + u128::from(slot - start);
        if self.head < HEAD_MIN {
            if let Some(word) = self.words.pop() {
                self.head = (self.head << WORD_BITS) | u128::from(word);
            }
        }
        Ok(symbol)
    }

    /// Pops an integer uniformly distributed on `[0, total)`.
    pub fn decode_uniform(&mut self, total: u64) -> Result<u64> {
        self.decode(total, |j| Ok((j, SymbolRange { freq: 1, start: j, total })))
    }

    /// Pushes `value` under the uniform distribution on `[0, total)`.
    pub fn encode_uniform(&mut self, value: u64, total: u64) -> Result<()> {
        self.encode(SymbolRange::new(1, value, total)?)
    }

    /// Information held relative to the initial state, in bits.
    pub fn information_bits(&self) -> f64 {
        (WORD_BITS as f64) * self.words.len() as f64 + (self.head.max(1) as f64).log2() - 64.0
    }

    /// Serialized length in bytes.
    pub fn flushed_len(&self) -> usize {
        HEAD_BYTES + 4 * self.words.len()
    }

    /// Head as 12 little-endian bytes, then the words bottom to top, 4 bytes each.
    pub fn flush(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.flushed_len());
        self.flush_into(&mut out);
        out
    }

    pub fn flush_into(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.head.to_le_bytes()[..HEAD_BYTES]);
        for word in &self.words {
            out.extend_from_slice(&word.to_le_bytes());
        }
    }

    pub fn restore(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEAD_BYTES {
            return Err(Error::CorruptStream("truncated head"));
        }
        if !(bytes.len() - HEAD_BYTES).is_multiple_of(4) {
            return Err(Error::CorruptStream("truncated word"));
        }
        let (head_bytes, rest) = bytes.split_at(HEAD_BYTES);
        let mut wide = [0u8; 16];
        wide[..HEAD_BYTES].copy_from_slice(head_bytes);
        let head = u128::from_le_bytes(wide);
        let words: Vec<u32> =
            rest.chunks_exact(4).map(|w| u32::from_le_bytes(w.try_into().expect("4 bytes"))).collect();
        if !words.is_empty() && head < HEAD_MIN {
            return Err(Error::CorruptStream("head below range with pending words"));
        }
        Ok(AnsState { head, words })
    }
}
