//! Text format:
//!
//! ```text
//! s <node-count>
//! b <id> v1 v2 ...
//! e <id1> <id2>
//! ```
//!
//! Node ids and vertex ids are 0-based. Lines starting with `#` or `c` are
//! comments. Bags not listed are empty.

use super::TreeDecomposition;
use crate::error::{Error, ParseErrorKind, Result};
use crate::Vertex;

fn number(tok: &str, line: usize) -> Result<u64> {
    tok.parse().map_err(|_| Error::parse(line, ParseErrorKind::Malformed(format!("bad number {tok:?}"))))
}

pub fn parse_decomposition(text: &str) -> Result<TreeDecomposition> {
    let mut count: Option<usize> = None;
    let mut bags: Vec<Option<Vec<Vertex>>> = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with("c ") || t == "c" {
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        let node_id = |tok: &str| -> Result<usize> {
            let id = number(tok, line)?;
            let k = count.ok_or(Error::parse(line, ParseErrorKind::MissingHeader))?;
            if id >= k as u64 {
                return Err(Error::parse(line, ParseErrorKind::NodeOutOfRange { id, count: k }));
            }
            Ok(id as usize)
        };
        match toks[0] {
            "s" => {
                if count.is_some() {
                    return Err(Error::parse(line, ParseErrorKind::DuplicateHeader));
                }
                if toks.len() != 2 {
                    return Err(Error::parse(line, ParseErrorKind::Malformed(t.to_string())));
                }
                let k = number(toks[1], line)? as usize;
                count = Some(k);
                bags = vec![None; k];
            }
            "b" => {
                if toks.len() < 2 {
                    return Err(Error::parse(line, ParseErrorKind::Malformed(t.to_string())));
                }
                let id = node_id(toks[1])?;
                if bags[id].is_some() {
                    return Err(Error::parse(line, ParseErrorKind::DuplicateBag(id)));
                }
                let bag = toks[2..]
                    .iter()
                    .map(|tok| number(tok, line).map(|v| v as Vertex))
                    .collect::<Result<Vec<_>>>()?;
                bags[id] = Some(bag);
            }
            "e" => {
                if toks.len() != 3 {
                    return Err(Error::parse(line, ParseErrorKind::Malformed(t.to_string())));
                }
                edges.push((node_id(toks[1])?, node_id(toks[2])?));
            }
            _ => return Err(Error::parse(line, ParseErrorKind::Malformed(t.to_string()))),
        }
    }
    if count.is_none() {
        return Err(Error::parse(0, ParseErrorKind::MissingHeader));
    }
    Ok(TreeDecomposition::new(bags.into_iter().map(Option::unwrap_or_default).collect(), edges))
}

pub fn write_decomposition(td: &TreeDecomposition) -> String {
    let mut out = format!("s {}\n", td.node_count());
    for (i, bag) in td.bags().iter().enumerate() {
        out.push_str(&format!("b {i}"));
        for v in bag {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        out.push_str(&format!("e {a} {b}\n"));
    }
    out
}
