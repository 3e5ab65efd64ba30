use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"GREC";
pub const VERSION: u8 = 1;
/// Encoded header size in bytes.
pub const HEADER_LEN: usize = 31;

const FLAG_DIRECTED: u8 = 0b01;
const FLAG_HYPERGRAPH: u8 = 0b10;

/// Container metadata.
///
/// Layout: magic (4) | version (1) | flags (1) | arity (1) | beta (8, LE) |
/// n (8, LE) | m (8, LE). Flag bit 0 marks directed edges, bit 1 marks
/// arity above two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodecHeader {
    pub directed: bool,
    pub arity: u8,
    pub beta: u64,
    pub n: u64,
    pub m: u64,
}

impl CodecHeader {
    pub fn flags(&self) -> u8 {
        let mut flags = 0;
        if self.directed {
            flags |= FLAG_DIRECTED;
        }
        if self.arity > 2 {
            flags |= FLAG_HYPERGRAPH;
        }
        flags
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(self.flags());
        out.push(self.arity);
        out.extend_from_slice(&self.beta.to_le_bytes());
        out.extend_from_slice(&self.n.to_le_bytes());
        out.extend_from_slice(&self.m.to_le_bytes());
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = Vec::with_capacity(HEADER_LEN);
        self.write_to(&mut out);
        out.try_into().expect("header length")
    }

    /// Parses the header and returns it with the remaining payload bytes.
    pub fn parse(bytes: &[u8]) -> Result<(CodecHeader, &[u8])> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::CorruptStream("truncated header"));
        }
        if bytes[..4] != MAGIC {
            return Err(Error::Unsupported("bad magic".into()));
        }
        if bytes[4] != VERSION {
            return Err(Error::Unsupported(format!("version {}", bytes[4])));
        }
        let flags = bytes[5];
        if flags & !(FLAG_DIRECTED | FLAG_HYPERGRAPH) != 0 {
            return Err(Error::Unsupported(format!("flags {flags:#04x}")));
        }
        let arity = bytes[6];
        if arity < 2 || (arity > 2) != (flags & FLAG_HYPERGRAPH != 0) {
            return Err(Error::Unsupported(format!("arity {arity} with flags {flags:#04x}")));
        }
        let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
        let header =
            CodecHeader { directed: flags & FLAG_DIRECTED != 0, arity, beta: word(7), n: word(15), m: word(23) };
        Ok((header, &bytes[HEADER_LEN..]))
    }
}
