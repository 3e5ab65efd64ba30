//! Plain-text edge lists.
//!
//! One edge per line, vertex ids separated by whitespace. Lines starting with
//! `#` are comments, except `# n=<N>` which declares the vertex count.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{GraphSpec, VertexId};

#[derive(Clone, Debug)]
pub struct ParseOptions {
    pub directed: bool,
    /// Vertices per edge; inferred from the first edge line when `None`.
    pub arity: Option<usize>,
    /// Overrides both a declared and the inferred vertex count.
    pub n_override: Option<u64>,
    /// Ids start at 1 (default). Otherwise every id is shifted up by one.
    pub one_indexed: bool,
    /// Keep a single copy of repeated edges.
    pub dedup: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { directed: false, arity: None, n_override: None, one_indexed: true, dedup: false }
    }
}

/// Mapping from dense labels `1..=n` back to the original ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdMap {
    originals: Vec<u64>,
}

impl IdMap {
    pub fn len(&self) -> usize {
        self.originals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.originals.is_empty()
    }

    pub fn original(&self, v: VertexId) -> Option<u64> {
        self.originals.get((v as usize).checked_sub(1)?).copied()
    }

    /// Two-column text: dense label, original id.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        for (i, id) in self.originals.iter().enumerate() {
            writeln!(out, "{} {}", i + 1, id)?;
        }
        Ok(())
    }

    /// Inverse of [`IdMap::write`]; labels must run `1, 2, 3, ...`.
    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let mut originals = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::Parse { line: idx + 1, msg };
            let mut fields = text.split_whitespace().map(str::parse::<u64>);
            let (Some(Ok(label)), Some(Ok(id)), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(bad(format!("expected \"<label> <id>\", found {text:?}")));
            };
            if label != originals.len() as u64 + 1 {
                return Err(bad(format!("label {label} out of sequence")));
            }
            originals.push(id);
        }
        Ok(IdMap { originals })
    }
}

struct RawEdges {
    arity: usize,
    declared_n: Option<u64>,
    ids: Vec<u64>,
}

fn read_raw<R: BufRead>(input: R, arity: Option<usize>) -> Result<RawEdges> {
    let mut raw = RawEdges { arity: arity.unwrap_or(0), declared_n: None, ids: Vec::new() };
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(comment) = text.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("n=") {
                let n = value.trim().parse::<u64>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad vertex count declaration {value:?}"),
                })?;
                raw.declared_n = Some(n);
            }
            continue;
        }
        let before = raw.ids.len();
        for token in text.split_whitespace() {
            let id = token
                .parse::<u64>()
                .map_err(|e| Error::Parse { line: lineno, msg: format!("bad vertex id {token:?}: {e}") })?;
            raw.ids.push(id);
        }
        let width = raw.ids.len() - before;
        if raw.arity == 0 {
            if width < 2 {
                return Err(Error::Parse { line: lineno, msg: format!("edge with {width} vertices") });
            }
            raw.arity = width;
        } else if width != raw.arity {
            return Err(Error::Parse { line: lineno, msg: format!("expected {} vertices, found {width}", raw.arity) });
        }
    }
    if raw.arity == 0 {
        raw.arity = 2;
    }
    Ok(raw)
}

fn build(raw: RawEdges, n: u64, opts: &ParseOptions, label: impl Fn(u64) -> u64) -> Result<GraphSpec> {
    let mut g = GraphSpec::new(n.max(1), raw.arity, opts.directed)?;
    let mut edge = Vec::with_capacity(raw.arity);
    for chunk in raw.ids.chunks(raw.arity) {
        edge.clear();
        edge.extend(chunk.iter().map(|&id| label(id) as VertexId));
        g.add_edge(&edge)?;
    }
    if opts.dedup {
        g.dedup();
    }
    Ok(g)
}

/// Reads an edge list with ids used as labels directly.
///
/// `n` is `opts.n_override`, else a `# n=` declaration, else the largest id.
pub fn parse_edge_list<R: BufRead>(input: R, opts: &ParseOptions) -> Result<GraphSpec> {
    let mut raw = read_raw(input, opts.arity)?;
    let shift = u64::from(!opts.one_indexed);
    let mut max_id = 0;
    for (i, id) in raw.ids.iter_mut().enumerate() {
        if *id == 0 && opts.one_indexed {
            return Err(Error::Parse {
                line: 0,
                msg: format!("vertex id 0 in edge {} of a 1-indexed list", i / raw.arity + 1),
            });
        }
        *id = id
            .checked_add(shift)
            .filter(|&v| v <= u64::from(VertexId::MAX))
            .ok_or(Error::OutOfRange { what: "vertex id", value: *id })?;
        max_id = max_id.max(*id);
    }
    let n = opts.n_override.or(raw.declared_n).unwrap_or(max_id);
    if n < max_id {
        return Err(Error::OutOfRange { what: "vertex id above declared n", value: max_id });
    }
    build(raw, n, opts, |id| id)
}

/// Reads an edge list and relabels the ids that occur to `1..=n` in ascending
/// order of original id. `opts.n_override` and `opts.one_indexed` are ignored.
pub fn parse_edge_list_compacted<R: BufRead>(input: R, opts: &ParseOptions) -> Result<(GraphSpec, IdMap)> {
    let raw = read_raw(input, opts.arity)?;
    let mut originals = raw.ids.clone();
    originals.sort_unstable();
    originals.dedup();
    if originals.len() as u64 > u64::from(VertexId::MAX) {
        return Err(Error::TooLarge(format!("{} distinct vertex ids", originals.len())));
    }
    let dense: HashMap<u64, u64> = originals.iter().enumerate().map(|(i, &id)| (id, i as u64 + 1)).collect();
    let n = originals.len() as u64;
    let g = build(raw, n, opts, |id| dense[&id])?;
    Ok((g, IdMap { originals }))
}

/// Canonical text form: a `# n=` line, then every edge copy in lexicographic order.
pub fn write_edge_list<W: Write>(g: &GraphSpec, mut out: W) -> Result<()> {
    writeln!(out, "# n={}", g.n())?;
    let mut line = String::new();
    for (e, c) in g.edges() {
        line.clear();
        for (i, v) in e.vertices().iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&v.to_string());
        }
        for _ in 0..c {
            writeln!(out, "{line}")?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Like [`write_edge_list`], translating labels back through `map`.
pub fn write_edge_list_mapped<W: Write>(g: &GraphSpec, map: &IdMap, mut out: W) -> Result<()> {
    for (e, c) in g.edges() {
        let mut ids = Vec::with_capacity(e.arity());
        for &v in e.vertices() {
            ids.push(map.original(v).ok_or(Error::OutOfRange { what: "vertex", value: u64::from(v) })?);
        }
        let line = ids.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        for _ in 0..c {
            writeln!(out, "{line}")?;
        }
    }
    out.flush()?;
    Ok(())
}
