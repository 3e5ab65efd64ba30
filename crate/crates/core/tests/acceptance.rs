//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line; tolerances
//! are the constants below. Run with `cargo test -p grec-core --test acceptance -- --nocapture`.

mod common;

use std::alloc::{GlobalAlloc, Layout, System};
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grec_core::ans::{AnsState, SymbolRange};
use grec_core::codec::naive::{naive_decode, naive_encode_payload};
use grec_core::codec::{decode_payload, encode_graph, encode_payload, header_for};
use grec_core::graph_io::{parse_edge_list_compacted, ParseOptions};
use grec_core::metrics::{class_log_size, graph_nll, sequence_probability};
use grec_core::{decode_graph, GraphSpec, NllReport, VertexId};

// criterion 1
const C1_PROB_TOL: f64 = 1e-12;
const C1_BITS_TOL: f64 = 64.0;
const C1_TIME: Duration = Duration::from_secs(10);
// criterion 2
const C2_GRAPHS: usize = 200;
const C2_TIME: Duration = Duration::from_secs(60);
// criterion 3
const C3_MAX_GAP: f64 = 1e-3;
const C3_TIME: Duration = Duration::from_secs(120);
// criterion 4
const C4_TIME: Duration = Duration::from_secs(30);
const C4_TOL: f64 = 1e-9;
// criterion 5
const C5_MAX_TIME_RATIO: f64 = 2.5;
const C5_MAX_MEM_RATIO: f64 = 2.5;
const C5_MAX_N_MEM_RATIO: f64 = 1.25;
// criterion 6
const C6_OPS: usize = 1_000_000;
const C6_SLACK_BITS: f64 = 64.0;
const C6_PER_OP_BITS: f64 = 0.001;
// criterion 7
const C7_TOL: f64 = 0.02;

struct CountingAlloc;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let now = CURRENT.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

#[global_allocator]
static ALLOC: CountingAlloc = CountingAlloc;

// timing and memory measurements must not overlap
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

/// Written to the raw stderr handle so the line shows even when output is captured.
fn report(id: &str, ok: bool, detail: String) {
    use std::io::Write;
    let line = format!("criterion {id}: {} | {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}

fn payload_bits(bytes: &[u8]) -> f64 {
    8.0 * (bytes.len() - grec_core::HEADER_LEN) as f64
}

// ---------------------------------------------------------------- criterion 1

fn sequences(n: u32, k: usize) -> impl Iterator<Item = Vec<VertexId>> {
    (0..(n as u64).pow(k as u32)).map(move |mut code| {
        (0..k)
            .map(|_| {
                let v = (code % n as u64) as u32 + 1;
                code /= n as u64;
                v
            })
            .collect()
    })
}

fn allowed(g: &GraphSpec, loops: bool, multi: bool) -> bool {
    g.edges().all(|(e, c)| (loops || e.vertices()[0] != e.vertices()[1]) && (multi || c == 1))
}

#[test]
fn c1_exhaustive_small_instances() {
    let _guard = serial();
    let start = Instant::now();
    let one = BigRational::from_integer(BigInt::from(1));
    let (mut failures, mut graphs_checked) = (Vec::new(), 0usize);
    let (mut worst_prob, mut worst_rec, mut worst_naive) = (0f64, 0f64, 0f64);

    for beta in [1u64, 2] {
        for n in 1..=3u32 {
            for m in 0..=2usize {
                let k = 2 * m;
                for directed in [false, true] {
                    // (a) joint mass and per-graph brute-force sums
                    let mut mass = BigRational::zero();
                    let mut by_graph: HashMap<GraphSpec, BigRational> = HashMap::new();
                    for seq in sequences(n, k) {
                        let p: BigRational = sequence_probability(&seq, n as u64, beta).unwrap();
                        mass += p.clone();
                        let g = GraphSpec::from_edges(n as u64, 2, directed, seq.chunks(2)).unwrap();
                        *by_graph.entry(g).or_insert_with(BigRational::zero) += p;
                    }
                    if mass != one {
                        failures.push(format!("(a) n={n} m={m} beta={beta}: mass {mass}"));
                    }
                    for (loops, multi) in [(true, true), (true, false), (false, true), (false, false)] {
                        for (g, brute) in by_graph.iter().filter(|(g, _)| allowed(g, loops, multi)) {
                            graphs_checked += 1;
                            let r: NllReport = graph_nll(g, beta).unwrap();
                            // (b)
                            let p = (-r.graph_nll_bits).exp2();
                            let diff = (p - brute.to_f64().unwrap()).abs();
                            worst_prob = worst_prob.max(diff);
                            if diff > C1_PROB_TOL {
                                failures.push(format!("(b) {g:?}: {p} vs {brute}"));
                            }
                            // (c)
                            let bytes = encode_graph(g, beta).unwrap();
                            if decode_graph(&bytes).ok().as_ref() != Some(g) {
                                failures.push(format!("(c) {g:?}"));
                            }
                            let (back, fin) =
                                decode_payload(&header_for(g, beta), encode_payload(g, beta).unwrap()).unwrap();
                            if &back != g || !fin.is_initial() {
                                failures.push(format!("(c) final state {g:?}"));
                            }
                            // (d)
                            let rec = encode_payload(g, beta).unwrap().information_bits();
                            worst_rec = worst_rec.max((rec - r.graph_nll_bits).abs());
                            if (rec - r.graph_nll_bits).abs() > C1_BITS_TOL {
                                failures.push(format!("(d) {g:?}: {rec} vs {}", r.graph_nll_bits));
                            }
                            // (e)
                            let naive_state = naive_encode_payload(g, beta).unwrap();
                            let naive = naive_state.information_bits();
                            worst_naive = worst_naive.max((naive - rec).abs());
                            if (naive - rec).abs() > C1_BITS_TOL {
                                failures.push(format!("(e) {g:?}: naive {naive} vs {rec}"));
                            }
                            let naive_bytes = grec_core::codec::naive::naive_encode(g, beta).unwrap();
                            if naive_decode(&naive_bytes).ok().as_ref() != Some(g) {
                                failures.push(format!("(e) naive roundtrip {g:?}"));
                            }
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < C1_TIME;
    report(
        "1 exhaustive n<=3 m<=2",
        ok,
        format!(
            "{graphs_checked} graph checks, max |P-brute|={worst_prob:.2e} (tol {C1_PROB_TOL:e}), \
             max |REC-NLL|={worst_rec:.3} bits, max |naive-REC|={worst_naive:.3} bits (tol {C1_BITS_TOL}), \
             {:.2}s (limit {}s)",
            elapsed.as_secs_f64(),
            C1_TIME.as_secs()
        ),
    );
    assert!(ok, "{failures:#?} in {elapsed:?}");
}

// ---------------------------------------------------------------- criterion 2

#[test]
fn c2_random_roundtrips() {
    let _guard = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(0x2002);
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut total_edges = 0;
    for i in 0..C2_GRAPHS {
        let n = common::log_uniform(2, 10_000, &mut rng);
        let m = common::log_uniform(1, 100_000, &mut rng);
        let directed = rng.gen_bool(0.5);
        let beta = *[1u64, 1, 2, 5].get(rng.gen_range(0..4)).unwrap();
        let g = if rng.gen_bool(0.5) {
            common::uniform_graph(n, m, 2, directed, &mut rng)
        } else {
            common::urn_graph(n, m, directed, &mut rng)
        };
        total_edges += m;
        let state = encode_payload(&g, beta).unwrap();
        let bytes = encode_graph(&g, beta).unwrap();
        let (back, fin) = decode_payload(&header_for(&g, beta), state).unwrap();
        if back != g || !fin.is_initial() || decode_graph(&bytes).ok().as_ref() != Some(&g) {
            failures.push(format!("graph {i}: n={n} m={m} directed={directed} beta={beta}"));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < C2_TIME;
    report(
        "2 random roundtrips",
        ok,
        format!(
            "{C2_GRAPHS} graphs, {total_edges} edges, {} failures, {:.2}s (limit {}s)",
            failures.len(),
            elapsed.as_secs_f64(),
            C2_TIME.as_secs()
        ),
    );
    assert!(ok, "{failures:#?} in {elapsed:?}");
}

// ---------------------------------------------------------------- criterion 3

#[test]
fn c3_optimality_at_scale() {
    let _guard = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(0x3003);
    let mut all_ok = true;
    for m in [100_000u64, 1_000_000] {
        let n = m / 3;
        let g = common::urn_graph(n, m, false, &mut rng);
        let start = Instant::now();
        let bytes = encode_graph(&g, 1).unwrap();
        let back = decode_graph(&bytes).unwrap();
        let elapsed = start.elapsed();
        let r: NllReport = graph_nll(&g, 1).unwrap();
        let bits = payload_bits(&bytes);
        let gap = (bits - r.graph_nll_bits) / r.graph_nll_bits;
        let ok = back == g && gap <= C3_MAX_GAP && elapsed < C3_TIME;
        all_ok &= ok;
        report(
            &format!("3 optimality m={m}"),
            ok,
            format!(
                "n={n}, seq NLL {:.3} b/e, graph NLL {:.3} b/e, payload {:.3} b/e, gap {:.5}% (limit {}%), {:.2}s (limit {}s)",
                r.sequence_bits_per_edge(m),
                r.raw_bits_per_edge(m),
                bits / m as f64,
                100.0 * gap,
                100.0 * C3_MAX_GAP,
                elapsed.as_secs_f64(),
                C3_TIME.as_secs()
            ),
        );
    }
    assert!(all_ok);
}

// ---------------------------------------------------------------- criterion 4

#[test]
fn c4_class_sizes_by_enumeration() {
    let _guard = serial();
    let start = Instant::now();
    let n = 4u32;
    let (mut checked, mut worst) = (0usize, 0f64);
    let mut failures = Vec::new();
    for directed in [false, true] {
        for m in 0..=5usize {
            let mut classes: HashMap<GraphSpec, u64> = HashMap::new();
            for seq in sequences(n, 2 * m) {
                let g = GraphSpec::from_edges(n as u64, 2, directed, seq.chunks(2)).unwrap();
                *classes.entry(g).or_default() += 1;
            }
            for (g, size) in &classes {
                checked += 1;
                let expect = (*size as f64).log2();
                let got: f64 = class_log_size(g);
                worst = worst.max((got - expect).abs());
                if (got - expect).abs() > C4_TOL {
                    failures.push(format!("{g:?}: {got} vs log2 {size}"));
                }
            }
        }
    }
    // the two-edge example with a loop: class of size 4
    let fig = GraphSpec::from_edges(5, 2, false, [[3, 5], [3, 3]]).unwrap();
    let fig_bits: f64 = class_log_size(&fig);
    if (fig_bits - 2.0).abs() > C4_TOL {
        failures.push(format!("loop example: {fig_bits}"));
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < C4_TIME;
    report(
        "4 class sizes m<=5 n<=4",
        ok,
        format!(
            "{checked} graphs, max error {worst:.2e} bits (tol {C4_TOL:e}), {:.2}s (limit {}s)",
            elapsed.as_secs_f64(),
            C4_TIME.as_secs()
        ),
    );
    assert!(ok, "{failures:#?} in {elapsed:?}");
}

// ---------------------------------------------------------------- criterion 5

/// Best-of-three encode time and peak heap growth during one encode.
const C5_ROUNDS: usize = 5;

fn measure_once(g: &GraphSpec) -> (Duration, usize) {
    let base = CURRENT.load(Ordering::Relaxed);
    PEAK.store(base, Ordering::Relaxed);
    let start = Instant::now();
    let bytes = encode_graph(g, 1).unwrap();
    let elapsed = start.elapsed();
    let peak = PEAK.load(Ordering::Relaxed) - base;
    drop(bytes);
    (elapsed, peak)
}

/// Best time and largest peak over interleaved rounds, so transient load hits all sizes alike.
fn measure_encode(graphs: &[GraphSpec]) -> Vec<(Duration, usize)> {
    let mut points = vec![(Duration::MAX, 0); graphs.len()];
    for _ in 0..C5_ROUNDS {
        for (g, p) in graphs.iter().zip(&mut points) {
            let (t, mem) = measure_once(g);
            *p = (p.0.min(t), p.1.max(mem));
        }
    }
    points
}

#[test]
fn c5_complexity_scaling() {
    let _guard = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5005);
    let sizes = [100_000u64, 200_000, 400_000, 800_000, 1_600_000];
    let graphs: Vec<GraphSpec> = sizes.iter().map(|&m| common::uniform_graph(10 * m, m, 2, false, &mut rng)).collect();
    let points = measure_encode(&graphs);
    drop(graphs);
    let mut ok = true;
    let mut detail = Vec::new();
    for (i, w) in points.windows(2).enumerate() {
        let t = w[1].0.as_secs_f64() / w[0].0.as_secs_f64();
        let mem = w[1].1 as f64 / w[0].1 as f64;
        ok &= t <= C5_MAX_TIME_RATIO && mem <= C5_MAX_MEM_RATIO;
        detail.push(format!("m={}: t x{t:.2} mem x{mem:.2}", sizes[i + 1]));
    }
    // same m, 10x more vertices: memory must not follow n
    let m = 200_000;
    let small = measure_once(&common::uniform_graph(10 * m, m, 2, false, &mut rng)).1;
    let large = measure_once(&common::uniform_graph(100 * m, m, 2, false, &mut rng)).1;
    let n_ratio = large as f64 / small as f64;
    ok &= n_ratio <= C5_MAX_N_MEM_RATIO;
    let per_edge: Vec<String> =
        sizes.iter().zip(&points).map(|(m, p)| format!("{:.0}", p.1 as f64 / *m as f64)).collect();
    report(
        "5 scaling",
        ok,
        format!(
            "{} (limits t x{C5_MAX_TIME_RATIO}, mem x{C5_MAX_MEM_RATIO}); peak bytes/edge [{}]; \
             n 10m->100m mem x{n_ratio:.3} (limit x{C5_MAX_N_MEM_RATIO}); t(1.6M)={:.2}s",
            detail.join(", "),
            per_edge.join(", "),
            points.last().unwrap().0.as_secs_f64()
        ),
    );
    assert!(ok);
}

// ---------------------------------------------------------------- criterion 6

fn random_range<R: Rng>(rng: &mut R) -> SymbolRange {
    let total = common::log_uniform(1, 1 << 32, rng);
    let freq = common::log_uniform(1, total, rng);
    let start = rng.gen_range(0..=total - freq);
    SymbolRange { freq, start, total }
}

#[test]
fn c6_ans_fidelity() {
    let _guard = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6006);

    // pure encode stream: length against the ideal codelength
    let ranges: Vec<SymbolRange> = (0..C6_OPS).map(|_| random_range(&mut rng)).collect();
    let mut state = AnsState::new();
    let mut ideal = 0f64;
    for r in &ranges {
        state.encode(*r).unwrap();
        ideal += r.information_bits();
    }
    let measured = 8.0 * (state.flushed_len() - AnsState::new().flushed_len()) as f64;
    let bound = C6_SLACK_BITS + C6_PER_OP_BITS * C6_OPS as f64;
    let mut restored = AnsState::restore(&state.flush()).unwrap();
    let mut decoded_ok = true;
    for r in ranges.iter().rev() {
        let got = restored.decode(r.total, |j| Ok((r.contains(j), *r))).unwrap();
        decoded_ok &= got;
    }
    let encode_ok = decoded_ok && restored.is_initial() && (measured - ideal).abs() <= bound;

    // mixed stream: random decodes (sampling) interleaved with encodes, then undone
    let mut state = AnsState::new();
    let mut log: Vec<(bool, SymbolRange)> = Vec::with_capacity(C6_OPS);
    for _ in 0..C6_OPS {
        if rng.gen_bool(0.4) {
            let total = common::log_uniform(1, 1 << 32, &mut rng);
            // split the alphabet in two at a random point
            let cut = rng.gen_range(0..total);
            let r = state
                .decode(total, |j| {
                    Ok(if j < cut || cut == 0 {
                        SymbolRange { freq: if cut == 0 { total } else { cut }, start: 0, total }
                    } else {
                        SymbolRange { freq: total - cut, start: cut, total }
                    })
                    .map(|r| (r, r))
                })
                .unwrap();
            log.push((true, r));
        } else {
            let r = random_range(&mut rng);
            state.encode(r).unwrap();
            log.push((false, r));
        }
    }
    for (was_decode, r) in log.iter().rev() {
        if *was_decode {
            state.encode(*r).unwrap();
        } else {
            state.decode(r.total, |_| Ok(((), *r))).unwrap();
        }
    }
    let mixed_ok = state.is_initial();

    let ok = encode_ok && mixed_ok;
    report(
        "6 ans fidelity",
        ok,
        format!(
            "{C6_OPS} encodes: measured {measured:.1} bits vs ideal {ideal:.1} (|diff| {:.1}, limit {bound:.0}), \
             restored init: {}; mixed encode/decode stream restored init: {mixed_ok}",
            (measured - ideal).abs(),
            decoded_ok && restored.is_initial()
        ),
    );
    assert!(ok);
}

// ---------------------------------------------------------------- criterion 7

#[test]
fn c7_datasets_optional() {
    let Some(dir) = std::env::var_os("GREC_DATASETS_DIR").map(PathBuf::from) else {
        println!("criterion 7 datasets: SKIP | set GREC_DATASETS_DIR to a directory of <name>.txt edge lists");
        return;
    };
    let _guard = serial();
    // (name, reported bits/edge, checked against the payload rather than the NLL)
    let targets = [
        ("youtube", 15.19, true),
        ("foursquare", 9.96, true),
        ("digg", 10.62, true),
        ("skitter", 14.26, true),
        ("dblp", 15.92, true),
        ("gowalla", 11.69, false),
    ];
    let mut all_ok = true;
    for (name, expect, strict) in targets {
        let path = dir.join(format!("{name}.txt"));
        let Ok(file) = std::fs::File::open(&path) else {
            println!("criterion 7 {name}: SKIP | {} not found", path.display());
            continue;
        };
        let opts = ParseOptions { dedup: true, ..Default::default() };
        let (g, _) = parse_edge_list_compacted(std::io::BufReader::new(file), &opts).unwrap();
        let m = g.m();
        let bytes = encode_graph(&g, 1).unwrap();
        let r: NllReport = graph_nll(&g, 1).unwrap();
        let file_bpe = (bytes.len() as f64 * 8.0) / m as f64;
        let nll_bpe = r.raw_bits_per_edge(m) + 32.0 / m as f64;
        let gap = (payload_bits(&bytes) - r.graph_nll_bits) / r.graph_nll_bits;
        let ok = if strict {
            (file_bpe - expect).abs() <= C7_TOL && decode_graph(&bytes).ok().as_ref() == Some(&g)
        } else {
            (nll_bpe - expect).abs() <= C7_TOL && gap <= C3_MAX_GAP
        };
        all_ok &= ok;
        report(
            &format!("7 dataset {name}"),
            ok,
            format!(
                "n={} m={m}: file {file_bpe:.3} b/e, graph NLL {nll_bpe:.3} b/e, gap {:.4}%, target {expect} ± {C7_TOL}",
                g.n(),
                100.0 * gap
            ),
        );
    }
    assert!(all_ok);
}
