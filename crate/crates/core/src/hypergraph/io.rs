//! Text formats for hypergraphs and degree sequences. Node labels are 1-based.
//!
//! Edge list:
//!
//! ```text
//! n=4
//! # comment
//! 1 2 3
//! 1 4
//! 3 4
//! ```
//!
//! A file may hold several hypergraphs on the same nodes separated by `---`
//! lines (see [`read_hypergraphs`]).
//!
//! Degree sequence: `n=<N>` then one `k=<K>: v1 .. vN` line per size, or a
//! single `d: v1 .. vN` line of total degrees.

use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::{DegreeSequence, Edge, Hypergraph};

/// Non-empty lines with comments stripped, paired with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// Parses an `n=<N>` header line.
pub(crate) fn parse_header(line_no: usize, line: &str) -> Result<usize> {
    let parse_err = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    let (key, value) = line
        .split_once('=')
        .ok_or_else(|| parse_err(format!("expected `n=<N>`, found `{line}`")))?;
    if key.trim() != "n" {
        return Err(parse_err(format!("expected `n=<N>`, found `{line}`")));
    }
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| parse_err(format!("invalid node count `{}`", value.trim())))?;
    if n == 0 {
        return Err(parse_err("node count must be positive".into()));
    }
    Ok(n)
}

fn parse_edge(line_no: usize, line: &str, n: usize) -> Result<Edge> {
    let mut nodes = Vec::new();
    for tok in line.split_whitespace() {
        let label: usize = tok.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("invalid node label `{tok}`"),
        })?;
        if label == 0 || label > n {
            return Err(Error::NodeOutOfRange {
                line: line_no,
                label,
                n,
            });
        }
        nodes.push(label - 1);
    }
    if nodes.len() < 2 {
        return Err(Error::EdgeTooSmall { line: line_no });
    }
    nodes.sort_unstable();
    if let Some(w) = nodes.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Parse {
            line: line_no,
            message: format!("node {} repeated within an edge", w[0] + 1),
        });
    }
    Ok(Edge::from_sorted_unchecked(&nodes))
}

fn finish_block(n: usize, mut edges: Vec<(Edge, usize)>) -> Result<Hypergraph> {
    edges.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    for w in edges.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DuplicateEdge {
                line: w[0].1.max(w[1].1),
                edge: w[0].0.nodes().iter().map(|v| v + 1).collect(),
            });
        }
    }
    Ok(Hypergraph::from_canonical_unchecked(
        n,
        edges.into_iter().map(|(e, _)| e).collect(),
    ))
}

/// Reads one or more hypergraphs sharing the `n=<N>` header, separated by `---` lines.
pub fn read_hypergraphs(text: &str) -> Result<Vec<Hypergraph>> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing `n=<N>` header".into(),
    })?;
    let n = parse_header(line_no, header)?;
    let mut blocks = Vec::new();
    let mut current = Vec::new();
    for (line_no, line) in lines {
        if line.starts_with("---") {
            blocks.push(finish_block(n, std::mem::take(&mut current))?);
        } else {
            current.push((parse_edge(line_no, line, n)?, line_no));
        }
    }
    blocks.push(finish_block(n, current)?);
    Ok(blocks)
}

/// Reads a single hypergraph in edge-list format.
pub fn read_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut blocks = read_hypergraphs(text)?;
    if blocks.len() != 1 {
        return Err(Error::Parse {
            line: 0,
            message: format!("expected one hypergraph, found {} blocks", blocks.len()),
        });
    }
    Ok(blocks.pop().expect("one block"))
}

/// Writes `h` in edge-list format, edges in canonical order.
pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("n={}\n", h.n());
    write_edges(&mut out, h);
    out
}

/// Writes several hypergraphs on the same node set, separated by `---`.
pub fn write_hypergraphs(hs: &[Hypergraph]) -> Result<String> {
    let n = hs.first().ok_or(Error::EmptySampleSet)?.n();
    if hs.iter().any(|h| h.n() != n) {
        return Err(Error::DimensionMismatch(
            "hypergraphs with different node counts".into(),
        ));
    }
    let mut out = format!("n={n}\n");
    for (i, h) in hs.iter().enumerate() {
        if i > 0 {
            out.push_str("---\n");
        }
        write_edges(&mut out, h);
    }
    Ok(out)
}

fn write_edges(out: &mut String, h: &Hypergraph) {
    for e in h.edges() {
        let mut first = true;
        for v in e.nodes() {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{}", v + 1);
        }
        out.push('\n');
    }
}

/// Parses whitespace-separated reals following a `label:` prefix.
pub(crate) fn parse_values(line_no: usize, body: &str, n: usize) -> Result<Vec<f64>> {
    let values = body
        .split_whitespace()
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid number `{tok}`"),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.len() != n {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected {n} values, found {}", values.len()),
        });
    }
    Ok(values)
}

/// Parses `k=<K>` into K.
pub(crate) fn parse_size_key(line_no: usize, key: &str) -> Result<Option<usize>> {
    let key = key.trim();
    let Some(rest) = key.strip_prefix("k") else {
        return Ok(None);
    };
    let Some(value) = rest.trim_start().strip_prefix('=') else {
        return Ok(None);
    };
    value.trim().parse().map(Some).map_err(|_| Error::Parse {
        line: line_no,
        message: format!("invalid edge size in `{key}`"),
    })
}

/// Reads a degree sequence file.
pub fn read_degrees(text: &str) -> Result<DegreeSequence> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing `n=<N>` header".into(),
    })?;
    let n = parse_header(line_no, header)?;
    let mut layers = Vec::new();
    let mut total = None;
    for (line_no, line) in lines {
        let (key, body) = line.split_once(':').ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected `k=<K>: ...` or `d: ...`, found `{line}`"),
        })?;
        if key.trim() == "d" {
            if total.is_some() || !layers.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "`d:` must be the only degree line".into(),
                });
            }
            total = Some(parse_values(line_no, body, n)?);
        } else if let Some(k) = parse_size_key(line_no, key)? {
            if total.is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "`d:` must be the only degree line".into(),
                });
            }
            layers.push((k, parse_values(line_no, body, n)?));
        } else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("unknown key `{}`", key.trim()),
            });
        }
    }
    match total {
        Some(d) => DegreeSequence::from_totals(d),
        None if layers.is_empty() => Err(Error::Parse {
            line: 0,
            message: "no degree lines".into(),
        }),
        None => DegreeSequence::from_layers(n, layers),
    }
}

/// Writes a degree sequence; per-size lines when available, else a `d:` line.
/// Values use Rust's shortest round-trip float formatting.
pub fn write_degrees(d: &DegreeSequence) -> String {
    let mut out = format!("n={}\n", d.n());
    if d.has_layers() {
        for layer in d.layers() {
            let _ = write!(out, "k={}:", layer.size);
            push_values(&mut out, &layer.values);
        }
    } else {
        out.push_str("d:");
        push_values(&mut out, d.total());
    }
    out
}

pub(crate) fn push_values(out: &mut String, values: &[f64]) {
    for v in values {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
}
