//! HGT v1 line format.
//!
//! UTF-8 text. The first line is the header `#HGT1`; any other line
//! starting with `#` is a comment. Each data line is
//! `TIMESTAMP<TAB>ID,ID,...` with decimal non-negative integers. A header
//! of `#HGT1 static` switches to order-only streams whose data lines are
//! bare `ID,ID,...`; such edges receive their insertion index as a
//! placeholder timestamp and the graph reports `has_timestamps() ==
//! false`. The serializer writes edges in list order, node ids ascending,
//! `\n` endings, and no trailing whitespace, so parse ∘ serialize is the
//! identity on the edge list.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use super::{Hyperedge, NodeId, TemporalHypergraph};

pub const HEADER: &str = "#HGT1";
pub const STATIC_HEADER: &str = "#HGT1 static";

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct HgtParseError {
    /// 1-based line number.
    pub line: usize,
    pub kind: HgtErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HgtErrorKind {
    #[error("unknown header mode {0:?}")]
    UnknownHeaderMode(String),
    #[error("missing timestamp field (expected TIMESTAMP<TAB>ID,ID,...)")]
    MissingTimestamp,
    #[error("invalid integer token {0:?}")]
    BadInteger(String),
    #[error("empty node list")]
    EmptyNodeList,
}

#[derive(Debug, Error)]
pub enum HgtFileError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Parse(#[from] HgtParseError),
}

/// Parses HGT v1 text. Files without a header are accepted and treated as
/// timestamped. Blank lines are skipped.
pub fn parse_hypergraph(text: &str) -> Result<TemporalHypergraph, HgtParseError> {
    let mut h = TemporalHypergraph::new();
    let mut static_mode = false;

    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if index == 0 && line.starts_with(HEADER) {
            match line[HEADER.len()..].trim() {
                "" => {}
                "static" => {
                    static_mode = true;
                    h.set_timestamped(false);
                }
                mode => {
                    return Err(HgtParseError {
                        line: line_no,
                        kind: HgtErrorKind::UnknownHeaderMode(mode.to_owned()),
                    })
                }
            }
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }

        let (timestamp, ids) = if static_mode {
            (h.edge_count() as u64, line)
        } else {
            let (ts, ids) = line.split_once('\t').ok_or(HgtParseError {
                line: line_no,
                kind: HgtErrorKind::MissingTimestamp,
            })?;
            (parse_int(ts, line_no)?, ids)
        };

        let mut nodes = Vec::new();
        for token in ids.split(',') {
            let token = token.trim();
            if token.is_empty() {
                return Err(HgtParseError {
                    line: line_no,
                    kind: HgtErrorKind::EmptyNodeList,
                });
            }
            nodes.push(NodeId(parse_int(token, line_no)?));
        }
        let edge = Hyperedge::new(nodes, timestamp).map_err(|_| HgtParseError {
            line: line_no,
            kind: HgtErrorKind::EmptyNodeList,
        })?;
        h.add_hyperedge(edge);
    }
    Ok(h)
}

fn parse_int(token: &str, line: usize) -> Result<u64, HgtParseError> {
    token.parse().map_err(|_| HgtParseError {
        line,
        kind: HgtErrorKind::BadInteger(token.to_owned()),
    })
}

/// Serializes to HGT v1 text. Deterministic: equal graphs produce equal
/// bytes. Isolated nodes are not representable in the line format and are
/// dropped.
pub fn serialize_hypergraph(h: &TemporalHypergraph) -> String {
    let mut out = String::new();
    if h.has_timestamps() {
        out.push_str(HEADER);
    } else {
        out.push_str(STATIC_HEADER);
    }
    out.push('\n');
    for edge in h.edges() {
        if h.has_timestamps() {
            out.push_str(&edge.timestamp.to_string());
            out.push('\t');
        }
        let mut first = true;
        for v in edge.nodes() {
            if !first {
                out.push(',');
            }
            out.push_str(&v.0.to_string());
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn load_path(path: impl AsRef<Path>) -> Result<TemporalHypergraph, HgtFileError> {
    let text = fs::read_to_string(path)?;
    Ok(parse_hypergraph(&text)?)
}

pub fn save_path(h: &TemporalHypergraph, path: impl AsRef<Path>) -> io::Result<()> {
    fs::write(path, serialize_hypergraph(h))
}
