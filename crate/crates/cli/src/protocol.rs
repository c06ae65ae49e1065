//! Line protocol on a reader/writer pair.
//!
//! Commands: `window <N>`, `feed <bytes>`, `find <bytes>`, `stats`, `audit`,
//! `quit`. Byte arguments accept `\xHH` escapes for non-printables. Every
//! malformed command produces a single `ERR <reason>` line and processing
//! continues. The runner reports success iff no `ERR` and no audit violation
//! was emitted.

use std::io::{BufRead, Write};

use slidetree::WindowIndex;

#[derive(Clone, Copy)]
pub struct Options {
    pub relative: bool,
    pub paranoid: bool,
}

pub fn run<R: BufRead, W: Write>(reader: R, out: &mut W, opts: Options) -> bool {
    let mut idx: Option<WindowIndex> = None;
    let mut clean = true;
    for line in reader.lines() {
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                writeln!(out, "ERR read failure: {}", e).unwrap();
                clean = false;
                break;
            }
        };
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() {
            continue;
        }
        match dispatch(&mut idx, line, out, opts) {
            Dispatch::Ok => {}
            Dispatch::Error => clean = false,
            Dispatch::Quit => break,
        }
    }
    clean
}

enum Dispatch {
    Ok,
    Error,
    Quit,
}

fn dispatch<W: Write>(
    idx: &mut Option<WindowIndex>,
    line: &str,
    out: &mut W,
    opts: Options,
) -> Dispatch {
    let (cmd, rest) = match line.split_once(' ') {
        Some((c, r)) => (c, r),
        None => (line, ""),
    };
    let err = |out: &mut W, reason: &str| {
        writeln!(out, "ERR {}", reason).unwrap();
        Dispatch::Error
    };
    match cmd {
        "window" => {
            let n: usize = match rest.trim().parse() {
                Ok(n) if n >= 1 => n,
                _ => return err(out, "window expects a positive integer capacity"),
            };
            *idx = Some(WindowIndex::new(n));
            Dispatch::Ok
        }
        "feed" => {
            let Some(idx) = idx.as_mut() else {
                return err(out, "no window configured (use: window <N>)");
            };
            let bytes = match unescape(rest) {
                Ok(b) => b,
                Err(reason) => return err(out, &reason),
            };
            for c in bytes {
                idx.shift(c);
                if opts.paranoid {
                    let report = idx.audit();
                    if !report.is_empty() {
                        for v in &report {
                            writeln!(out, "VIOLATION {}", v).unwrap();
                        }
                        return Dispatch::Error;
                    }
                }
            }
            Dispatch::Ok
        }
        "find" => {
            let Some(idx) = idx.as_ref() else {
                return err(out, "no window configured (use: window <N>)");
            };
            let q = match unescape(rest) {
                Ok(b) => b,
                Err(reason) => return err(out, &reason),
            };
            if q.is_empty() {
                return err(out, "find expects a nonempty query");
            }
            let result = idx.find(&q);
            let mut line = result.positions.len().to_string();
            for p in &result.positions {
                let shown = if opts.relative { p - idx.start() } else { *p };
                line.push(' ');
                line.push_str(&shown.to_string());
            }
            writeln!(out, "{}", line).unwrap();
            Dispatch::Ok
        }
        "stats" => {
            let Some(idx) = idx.as_ref() else {
                return err(out, "no window configured (use: window <N>)");
            };
            writeln!(
                out,
                "n={} start={} fill={} b={} leaves={} internal={}",
                idx.n(),
                idx.start(),
                idx.window_len(),
                idx.buffer_len(),
                idx.leaf_count(),
                idx.internal_count()
            )
            .unwrap();
            Dispatch::Ok
        }
        "audit" => {
            let Some(idx) = idx.as_ref() else {
                return err(out, "no window configured (use: window <N>)");
            };
            let report = idx.audit();
            if report.is_empty() {
                writeln!(out, "OK").unwrap();
                Dispatch::Ok
            } else {
                for v in &report {
                    writeln!(out, "VIOLATION {}", v).unwrap();
                }
                Dispatch::Error
            }
        }
        "quit" => Dispatch::Quit,
        _ => err(out, &format!("unknown command {:?}", cmd)),
    }
}

/// Decodes `\xHH` escapes; all other bytes pass through verbatim.
fn unescape(s: &str) -> Result<Vec<u8>, String> {
    let raw = s.as_bytes();
    let mut out = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        if raw[i] == b'\\' {
            if raw.get(i + 1) == Some(&b'x') && i + 4 <= raw.len() {
                let hex = std::str::from_utf8(&raw[i + 2..i + 4]).ok();
                match hex.and_then(|h| u8::from_str_radix(h, 16).ok()) {
                    Some(b) => {
                        out.push(b);
                        i += 4;
                        continue;
                    }
                    None => return Err(format!("bad \\x escape in {:?}", s)),
                }
            }
            return Err(format!("bad escape in {:?} (only \\xHH is recognized)", s));
        }
        out.push(raw[i]);
        i += 1;
    }
    Ok(out)
}
