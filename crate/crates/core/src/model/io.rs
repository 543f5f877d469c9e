//! Parameter files: `n=<N>` then either one `beta: b1 .. bN` line or one
//! `k=<K>: b1 .. bN` line per layer.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hypergraph::io::{
    content_lines, parse_header, parse_size_key, parse_values, push_values,
};

use super::ParamVector;

/// Reads a parameter file, returning the node count and the parameters.
pub fn read_params(text: &str) -> Result<(usize, ParamVector)> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing `n=<N>` header".into(),
    })?;
    let n = parse_header(line_no, header)?;
    let mut shared = None;
    let mut layers: Vec<(usize, Vec<f64>)> = Vec::new();
    for (line_no, line) in lines {
        let (key, body) = line.split_once(':').ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected `beta: ...` or `k=<K>: ...`, found `{line}`"),
        })?;
        let mixed = || Error::Parse {
            line: line_no,
            message: "`beta:` cannot be combined with other parameter lines".into(),
        };
        if key.trim() == "beta" {
            if shared.is_some() || !layers.is_empty() {
                return Err(mixed());
            }
            shared = Some(parse_values(line_no, body, n)?);
        } else if let Some(k) = parse_size_key(line_no, key)? {
            if shared.is_some() {
                return Err(mixed());
            }
            if layers.iter().any(|(s, _)| *s == k) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("size {k} given twice"),
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
    let params = match shared {
        Some(b) => ParamVector::Shared(b),
        None if layers.is_empty() => {
            return Err(Error::Parse {
                line: 0,
                message: "no parameter lines".into(),
            })
        }
        None => {
            layers.sort_by_key(|(k, _)| *k);
            ParamVector::Layered(layers)
        }
    };
    Ok((n, params))
}

/// Writes parameters in the format read by [`read_params`].
pub fn write_params(beta: &ParamVector) -> String {
    match beta {
        ParamVector::Shared(b) => {
            let mut out = format!("n={}\nbeta:", b.len());
            push_values(&mut out, b);
            out
        }
        ParamVector::Layered(layers) => {
            let n = layers.first().map_or(0, |(_, b)| b.len());
            let mut out = format!("n={n}\n");
            for (k, b) in layers {
                let _ = write!(out, "k={k}:");
                push_values(&mut out, b);
            }
            out
        }
    }
}
