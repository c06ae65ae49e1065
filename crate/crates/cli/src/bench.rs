//! Benchmark harness: feed a corpus through the index and compare three
//! query strategies at sampled points along the stream.
//!
//! Strategies: (a) the index itself, (b) a KMP rescan of the extracted
//! window, (c) rebuilding a fresh index over the window content and querying
//! it once. Reported per query: occurrence count, work ratio
//! visited/(|Q|+occ), and mean wall times. Totals include amortized
//! structural operations per shift.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;
use std::time::Instant;

use slidetree::WindowIndex;

pub fn run(
    corpus: &Path,
    window: usize,
    queries: &Path,
    csv: Option<&Path>,
    samples: usize,
) -> io::Result<()> {
    let corpus_bytes = fs::read(corpus)?;
    let query_list: Vec<Vec<u8>> = fs::read(queries)?
        .split(|&c| c == b'\n')
        .map(|l| l.strip_suffix(b"\r").unwrap_or(l).to_vec())
        .filter(|l| !l.is_empty())
        .collect();
    if window == 0 {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "window must be positive"));
    }

    let n = corpus_bytes.len();
    let samples = samples.max(1);
    // Sample points, always including the end of the stream.
    let mut points: Vec<usize> = (1..=samples).map(|k| n * k / samples).filter(|&p| p > 0).collect();
    points.dedup();

    let mut idx = WindowIndex::new(window);
    let mut fed = 0usize;
    let feed_start = Instant::now();
    let mut rows: Vec<Row> = query_list.iter().map(|q| Row::new(q)).collect();

    for &point in &points {
        while fed < point {
            idx.shift(corpus_bytes[fed]);
            fed += 1;
        }
        let content = idx.contents();
        for row in rows.iter_mut() {
            let t = Instant::now();
            let result = idx.find(&row.query);
            row.index_nanos += t.elapsed().as_nanos();
            let work = result.visited_nodes + result.link_checks + result.scan_chars;
            let ratio =
                work as f64 / (row.query.len() as u64 + result.positions.len() as u64 + 1) as f64;
            row.max_ratio = row.max_ratio.max(ratio);
            row.occurrences = result.positions.len();

            let t = Instant::now();
            let rescan = kmp_find(&content, &row.query);
            row.rescan_nanos += t.elapsed().as_nanos();
            assert_eq!(
                rescan.len(),
                result.positions.len(),
                "index and rescan disagree on query {:?}",
                String::from_utf8_lossy(&row.query)
            );

            let t = Instant::now();
            let mut fresh = WindowIndex::new(window);
            for &c in &content {
                fresh.shift(c);
            }
            let rebuilt = fresh.find(&row.query);
            row.rebuild_nanos += t.elapsed().as_nanos();
            assert_eq!(rebuilt.positions.len(), result.positions.len());

            row.samples += 1;
        }
    }
    // Finish feeding whatever the sampling loop did not consume.
    while fed < n {
        idx.shift(corpus_bytes[fed]);
        fed += 1;
    }
    let feed_elapsed = feed_start.elapsed();

    let counters = idx.op_counters();
    let shifts = idx.n().max(1);
    let mut out = String::new();
    writeln!(out, "corpus: {} bytes, window capacity {}", n, window).unwrap();
    writeln!(
        out,
        "feed: {:.3}s total ({:.1} Mshift/s, includes sampling pauses)",
        feed_elapsed.as_secs_f64(),
        shifts as f64 / feed_elapsed.as_secs_f64() / 1e6
    )
    .unwrap();
    writeln!(
        out,
        "amortized ops/shift: {:.3} structural ({} total / {} shifts)",
        counters.structural_total() as f64 / shifts as f64,
        counters.structural_total(),
        shifts
    )
    .unwrap();
    writeln!(
        out,
        "  creations {} deletions {} rescan_hops {} credit_steps {} marker_ops {}",
        counters.node_creations,
        counters.node_deletions,
        counters.rescan_hops,
        counters.credit_steps,
        counters.marker_ops
    )
    .unwrap();
    writeln!(out).unwrap();
    writeln!(
        out,
        "{:<24} {:>8} {:>10} {:>12} {:>12} {:>12}",
        "query", "occ", "max_ratio", "index_us", "rescan_us", "rebuild_us"
    )
    .unwrap();
    for row in &rows {
        let s = row.samples.max(1) as f64;
        writeln!(
            out,
            "{:<24} {:>8} {:>10.3} {:>12.2} {:>12.2} {:>12.2}",
            printable(&row.query),
            row.occurrences,
            row.max_ratio,
            row.index_nanos as f64 / s / 1e3,
            row.rescan_nanos as f64 / s / 1e3,
            row.rebuild_nanos as f64 / s / 1e3,
        )
        .unwrap();
    }
    print!("{}", out);

    if let Some(path) = csv {
        let mut csv_out = String::from("query,occ,max_ratio,index_us,rescan_us,rebuild_us\n");
        for row in &rows {
            let s = row.samples.max(1) as f64;
            writeln!(
                csv_out,
                "{},{},{:.6},{:.3},{:.3},{:.3}",
                printable(&row.query),
                row.occurrences,
                row.max_ratio,
                row.index_nanos as f64 / s / 1e3,
                row.rescan_nanos as f64 / s / 1e3,
                row.rebuild_nanos as f64 / s / 1e3,
            )
            .unwrap();
        }
        fs::write(path, csv_out)?;
    }
    Ok(())
}

struct Row {
    query: Vec<u8>,
    occurrences: usize,
    max_ratio: f64,
    index_nanos: u128,
    rescan_nanos: u128,
    rebuild_nanos: u128,
    samples: usize,
}

impl Row {
    fn new(query: &[u8]) -> Self {
        Row {
            query: query.to_vec(),
            occurrences: 0,
            max_ratio: 0.0,
            index_nanos: 0,
            rescan_nanos: 0,
            rebuild_nanos: 0,
            samples: 0,
        }
    }
}

fn printable(q: &[u8]) -> String {
    q.iter()
        .map(|&c| {
            if c.is_ascii_graphic() {
                (c as char).to_string()
            } else {
                format!("\\x{:02x}", c)
            }
        })
        .collect()
}

/// Linear-time rescan baseline.
fn kmp_find(text: &[u8], pat: &[u8]) -> Vec<usize> {
    if pat.is_empty() || pat.len() > text.len() {
        return Vec::new();
    }
    let m = pat.len();
    let mut lps = vec![0usize; m];
    let mut k = 0;
    for i in 1..m {
        while k > 0 && pat[i] != pat[k] {
            k = lps[k - 1];
        }
        if pat[i] == pat[k] {
            k += 1;
        }
        lps[i] = k;
    }
    let mut out = Vec::new();
    let mut k = 0;
    for (i, &c) in text.iter().enumerate() {
        while k > 0 && c != pat[k] {
            k = lps[k - 1];
        }
        if c == pat[k] {
            k += 1;
        }
        if k == m {
            out.push(i + 1 - m);
            k = lps[k - 1];
        }
    }
    out
}
