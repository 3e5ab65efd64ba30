//! Command-line surface for the graph codec.
//!
//! Data (containers, edge lists, `info`/`verify` reports) goes to the output
//! stream; statistics and diagnostics go to the error stream.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use grec_core::ans::AnsState;
use grec_core::codec::MAGIC;
use grec_core::graph_io::{parse_edge_list_compacted, write_edge_list_mapped};
use grec_core::metrics::graph_nll;
use grec_core::{
    decode_container, encode_graph, graphs_equal, parse_edge_list, write_edge_list, GraphSpec, IdMap, ParseOptions,
    HEADER_LEN,
};
use serde::Serialize;

/// Version tag of the JSON report.
pub const REPORT_SCHEMA: &str = "grec.report.v1";

#[derive(Parser, Debug)]
#[command(name = "grec", version, about = "Lossless compression of labeled graphs and multigraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compress an edge list into a container
    Compress(CompressArgs),
    /// Expand a container into the canonical edge list
    Decompress(DecompressArgs),
    /// Report the information content of an edge list or a container
    Info(InfoArgs),
    /// Compress, decompress and compare
    Verify(VerifyArgs),
}

/// How to read an edge list.
#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// Input path; `-` or nothing reads standard input
    pub input: Option<PathBuf>,
    /// Treat edges as ordered tuples
    #[arg(long)]
    pub directed: bool,
    /// Vertices per edge; inferred from the first edge when omitted
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=255))]
    pub arity: Option<u64>,
    /// Vertex count; defaults to a `# n=` line or the largest id
    #[arg(long, conflicts_with = "compact_ids")]
    pub n: Option<u64>,
    /// Ids start at 0 instead of 1
    #[arg(long)]
    pub zero_indexed: bool,
    /// Keep one copy of repeated edges
    #[arg(long)]
    pub dedup: bool,
    /// Relabel the ids that occur to 1..=n
    #[arg(long)]
    pub compact_ids: bool,
}

#[derive(Args, Debug)]
pub struct CompressArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Urn base weight
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub beta: u64,
    /// Output path; standard output when omitted
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Where to write the label-to-original-id map
    #[arg(long, requires = "compact_ids")]
    pub id_map: Option<PathBuf>,
    /// Statistics as JSON
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct DecompressArgs {
    /// Container path; `-` or nothing reads standard input
    pub input: Option<PathBuf>,
    /// Output path; standard output when omitted
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Map written by `compress --id-map`; restores the original ids
    #[arg(long)]
    pub id_map: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InfoArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Urn base weight; containers use their own
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub beta: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub beta: u64,
    #[arg(long)]
    pub json: bool,
}

/// Everything `info`, `compress` and `verify` know about one graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub n: u64,
    pub m: u64,
    pub directed: bool,
    pub arity: usize,
    pub beta: u64,
    pub sequence_nll_bits: f64,
    pub class_log_size_bits: f64,
    pub graph_nll_bits: f64,
    pub bits_per_edge: f64,
    pub header_bits: u64,
    /// Size of the coded payload in whole bits.
    pub payload_bits: Option<u64>,
    /// Exact information content of the final coder state.
    pub information_bits: Option<f64>,
    pub file_bits: Option<u64>,
    pub file_bits_per_edge: Option<f64>,
    /// `100 * (information_bits - graph_nll_bits) / graph_nll_bits`.
    pub gap_percent: Option<f64>,
    pub verified: Option<bool>,
}

impl Report {
    pub fn for_graph(g: &GraphSpec, beta: u64) -> Result<Self> {
        let nll = graph_nll::<f64>(g, beta)?;
        Ok(Report {
            schema: REPORT_SCHEMA,
            n: g.n(),
            m: g.m(),
            directed: g.is_directed(),
            arity: g.arity(),
            beta,
            sequence_nll_bits: nll.sequence_nll_bits,
            class_log_size_bits: nll.class_log_size_bits,
            graph_nll_bits: nll.graph_nll_bits,
            bits_per_edge: nll.bits_per_edge,
            header_bits: nll.header_bits,
            payload_bits: None,
            information_bits: None,
            file_bits: None,
            file_bits_per_edge: None,
            gap_percent: None,
            verified: None,
        })
    }

    /// Adds the sizes measured on a container.
    pub fn with_container(mut self, container: &[u8]) -> Result<Self> {
        let payload = &container[HEADER_LEN.min(container.len())..];
        let information = if payload.is_empty() { 0.0 } else { AnsState::restore(payload)?.information_bits() };
        let file_bits = 8 * container.len() as u64;
        self.payload_bits = Some(8 * payload.len() as u64);
        self.information_bits = Some(information);
        self.file_bits = Some(file_bits);
        self.file_bits_per_edge = (self.m > 0).then(|| file_bits as f64 / self.m as f64);
        self.gap_percent =
            (self.graph_nll_bits > 0.0).then(|| 100.0 * (information - self.graph_nll_bits) / self.graph_nll_bits);
        Ok(self)
    }

    pub fn write_text<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        let kind = if self.directed { "directed" } else { "undirected" };
        writeln!(out, "n={} m={} arity={} {kind} beta={}", self.n, self.m, self.arity, self.beta)?;
        writeln!(out, "sequence NLL   {:.3} bits", self.sequence_nll_bits)?;
        writeln!(out, "log2 |class|   {:.3} bits", self.class_log_size_bits)?;
        writeln!(
            out,
            "graph NLL      {:.3} bits ({:.4} bits/edge incl. header)",
            self.graph_nll_bits, self.bits_per_edge
        )?;
        if let (Some(payload), Some(info)) = (self.payload_bits, self.information_bits) {
            writeln!(out, "payload        {payload} bits ({info:.3} bits of information)")?;
        }
        if let Some(file) = self.file_bits {
            let per_edge = self.file_bits_per_edge.map_or(String::new(), |b| format!(" ({b:.4} bits/edge)"));
            writeln!(out, "file           {file} bits{per_edge}")?;
        }
        if let Some(gap) = self.gap_percent {
            writeln!(out, "gap            {gap:.5}%")?;
        }
        if let Some(ok) = self.verified {
            writeln!(out, "verify         {}", if ok { "PASS" } else { "FAIL" })?;
        }
        Ok(())
    }

    pub fn write_json<W: Write + ?Sized>(&self, out: &mut W) -> Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)?;
        Ok(())
    }

    fn emit<W: Write + ?Sized>(&self, json: bool, out: &mut W) -> Result<()> {
        if json {
            self.write_json(out)
        } else {
            Ok(self.write_text(out)?)
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    match path {
        None => io::stdin().lock().read_to_end(&mut bytes).context("reading standard input")?,
        Some(p) if p == Path::new("-") => {
            io::stdin().lock().read_to_end(&mut bytes).context("reading standard input")?
        }
        Some(p) => File::open(p)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .with_context(|| format!("reading {}", p.display()))?,
    };
    Ok(bytes)
}

fn parse_options(args: &GraphArgs) -> ParseOptions {
    ParseOptions {
        directed: args.directed,
        arity: args.arity.map(|a| a as usize),
        n_override: args.n,
        one_indexed: !args.zero_indexed,
        dedup: args.dedup,
    }
}

/// Parses an edge list per `args`; the id map is present with `--compact-ids`.
pub fn load_graph(args: &GraphArgs, bytes: &[u8]) -> Result<(GraphSpec, Option<IdMap>)> {
    let opts = parse_options(args);
    if args.compact_ids {
        let (g, map) = parse_edge_list_compacted(bytes, &opts)?;
        Ok((g, Some(map)))
    } else {
        Ok((parse_edge_list(bytes, &opts)?, None))
    }
}

fn is_container(bytes: &[u8]) -> bool {
    bytes.starts_with(&MAGIC)
}

/// Writes to `path`, or to `stdout` when there is none.
fn with_output<F>(path: Option<&Path>, stdout: &mut dyn Write, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut out = BufWriter::new(file);
            body(&mut out)?;
            out.flush()?;
        }
        None => {
            let mut out = BufWriter::new(stdout);
            body(&mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn cmd_compress(args: &CompressArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let bytes = read_input(args.graph.input.as_deref())?;
    let (g, map) = load_graph(&args.graph, &bytes)?;
    drop(bytes);
    let container = encode_graph(&g, args.beta)?;
    with_output(args.output.as_deref(), stdout, |out| Ok(out.write_all(&container)?))?;
    if let (Some(path), Some(map)) = (&args.id_map, &map) {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        map.write(BufWriter::new(file))?;
    }
    Report::for_graph(&g, args.beta)?.with_container(&container)?.emit(args.json, stderr)
}

pub fn cmd_decompress(args: &DecompressArgs, stdout: &mut dyn Write) -> Result<()> {
    let bytes = read_input(args.input.as_deref())?;
    let (_, g) = decode_container(&bytes)?;
    let map = match &args.id_map {
        Some(path) => {
            let file = File::open(path).with_context(|| format!("reading {}", path.display()))?;
            Some(IdMap::read(BufReader::new(file))?)
        }
        None => None,
    };
    with_output(args.output.as_deref(), stdout, |out| {
        match &map {
            Some(map) => write_edge_list_mapped(&g, map, out)?,
            None => write_edge_list(&g, out)?,
        }
        Ok(())
    })
}

/// Containers are decoded and measured; edge lists only get the model report.
pub fn cmd_info(args: &InfoArgs, stdout: &mut dyn Write) -> Result<()> {
    let bytes = read_input(args.graph.input.as_deref())?;
    let report = if is_container(&bytes) {
        let (header, g) = decode_container(&bytes)?;
        Report::for_graph(&g, header.beta)?.with_container(&bytes)?
    } else {
        let (g, _) = load_graph(&args.graph, &bytes)?;
        Report::for_graph(&g, args.beta)?
    };
    report.emit(args.json, stdout)
}

/// Round trip through the codec; decoding also checks the final coder state.
pub fn verify_graph(g: &GraphSpec, beta: u64) -> Result<Report> {
    let container = encode_graph(g, beta)?;
    let ok = match decode_container(&container) {
        Ok((header, decoded)) => header.beta == beta && graphs_equal(g, &decoded),
        Err(_) => false,
    };
    let mut report = Report::for_graph(g, beta)?.with_container(&container)?;
    report.verified = Some(ok);
    Ok(report)
}

pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<()> {
    let bytes = read_input(args.graph.input.as_deref())?;
    let (g, _) = load_graph(&args.graph, &bytes)?;
    let report = verify_graph(&g, args.beta)?;
    report.emit(args.json, stdout)?;
    if report.verified != Some(true) {
        bail!("roundtrip mismatch");
    }
    Ok(())
}

pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Compress(args) => cmd_compress(args, stdout, stderr),
        Command::Decompress(args) => cmd_decompress(args, stdout),
        Command::Info(args) => cmd_info(args, stdout),
        Command::Verify(args) => cmd_verify(args, stdout),
    }
}
