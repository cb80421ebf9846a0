//! Text formats: graph files, JSONL journals, and solution files.
//!
//! Graph files are DIMACS-like: `p cvc <n> <m>`, then `m` lines `e <u> <v>`
//! with ids in `1..=n`. Lines starting with `c` are comments. File id `i`
//! becomes `VertexId(i - 1)` on parse; serialization renumbers vertices
//! `1..=n` in ascending id order.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::reductions::ReductionStep;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header, expected `p cvc <n> <m>`")]
    MalformedHeader { line: usize },
    #[error("line {line}: second header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: edge before header")]
    MissingHeader { line: usize },
    #[error("no header line")]
    NoHeader,
    #[error("line {line}: malformed edge line, expected `e <u> <v>`")]
    MalformedEdge { line: usize },
    #[error("line {line}: vertex id {id} outside 1..={n}")]
    IdOutOfRange { line: usize, id: u64, n: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: u64, v: u64 },
    #[error("line {line}: self-loop on {id}")]
    SelfLoop { line: usize, id: u64 },
    #[error("line {line}: unrecognized line")]
    UnknownLine { line: usize },
    #[error("header declares {declared} edges, found {found}")]
    EdgeCount { declared: usize, found: usize },
}

/// A parsed graph file: the graph plus the vertex for each 1-based file id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub ids: Vec<VertexId>,
}

pub fn parse_graph(text: &str) -> Result<ParsedGraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut graph = Graph::new();
    let mut found = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut tok = raw.split_whitespace();
        match tok.next() {
            None => continue,
            Some(t) if t.starts_with('c') => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(ParseError::DuplicateHeader { line });
                }
                let rest: Vec<&str> = tok.collect();
                let (n, m) = match rest.as_slice() {
                    ["cvc", n, m] => match (n.parse::<usize>(), m.parse::<usize>()) {
                        (Ok(n), Ok(m)) if n <= u32::MAX as usize => (n, m),
                        _ => return Err(ParseError::MalformedHeader { line }),
                    },
                    _ => return Err(ParseError::MalformedHeader { line }),
                };
                graph = Graph::with_vertices(n);
                header = Some((n, m));
            }
            Some("e") => {
                let Some((n, _)) = header else {
                    return Err(ParseError::MissingHeader { line });
                };
                let rest: Vec<&str> = tok.collect();
                let (u, v) = match rest.as_slice() {
                    [u, v] => match (u.parse::<u64>(), v.parse::<u64>()) {
                        (Ok(u), Ok(v)) => (u, v),
                        _ => return Err(ParseError::MalformedEdge { line }),
                    },
                    _ => return Err(ParseError::MalformedEdge { line }),
                };
                for id in [u, v] {
                    if id == 0 || id > n as u64 {
                        return Err(ParseError::IdOutOfRange { line, id, n });
                    }
                }
                if u == v {
                    return Err(ParseError::SelfLoop { line, id: u });
                }
                let added = graph
                    .add_edge(VertexId(u as u32 - 1), VertexId(v as u32 - 1))
                    .expect("ids checked against header");
                if !added {
                    return Err(ParseError::DuplicateEdge { line, u, v });
                }
                found += 1;
            }
            Some(_) => return Err(ParseError::UnknownLine { line }),
        }
    }
    let (n, m) = header.ok_or(ParseError::NoHeader)?;
    if found != m {
        return Err(ParseError::EdgeCount { declared: m, found });
    }
    Ok(ParsedGraph {
        graph,
        ids: (0..n as u32).map(VertexId).collect(),
    })
}

/// 1-based file ids of `g`'s vertices in canonical order.
pub fn canonical_ids(g: &Graph) -> BTreeMap<VertexId, usize> {
    g.vertices().enumerate().map(|(i, v)| (v, i + 1)).collect()
}

pub fn serialize_graph(g: &Graph) -> String {
    let ids = canonical_ids(g);
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .map(|(u, v)| {
            let (a, b) = (ids[&u], ids[&v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    let mut out = format!("p cvc {} {}\n", g.vertex_count(), g.edge_count());
    for (a, b) in edges {
        out.push_str(&format!("e {a} {b}\n"));
    }
    out
}

#[derive(Debug, Error)]
pub enum JournalError {
    #[error("journal line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("journal line {line}: step_index {found}, expected {expected}")]
    Index { line: usize, expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct JournalRecord {
    step_index: usize,
    #[serde(flatten)]
    step: ReductionStep,
}

/// One JSON object per line. Vertex ids are the internal ids, so a journal is
/// meaningful together with the graph file it was produced from.
pub fn write_journal(steps: &[ReductionStep]) -> String {
    let mut out = String::new();
    for (i, step) in steps.iter().enumerate() {
        let rec = JournalRecord {
            step_index: i,
            step: step.clone(),
        };
        out.push_str(&serde_json::to_string(&rec).expect("journal records serialize"));
        out.push('\n');
    }
    out
}

pub fn read_journal(text: &str) -> Result<Vec<ReductionStep>, JournalError> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let line = i + 1;
        let rec: JournalRecord = serde_json::from_str(raw).map_err(|source| JournalError::Json { line, source })?;
        if rec.step_index != steps.len() {
            return Err(JournalError::Index {
                line,
                expected: steps.len(),
                found: rec.step_index,
            });
        }
        steps.push(rec.step);
    }
    Ok(steps)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionError {
    #[error("solution line {line}: not a vertex id")]
    Malformed { line: usize },
    #[error("solution line {line}: vertex {id} is not in the graph")]
    Unknown { line: usize, id: u64 },
}

/// Reads 1-based canonical ids of `g`, one per line.
pub fn read_solution(text: &str, g: &Graph) -> Result<BTreeSet<VertexId>, SolutionError> {
    let by_file: Vec<VertexId> = g.vertices().collect();
    let mut out = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        let line = i + 1;
        let id: u64 = t.parse().map_err(|_| SolutionError::Malformed { line })?;
        let v = (id as usize)
            .checked_sub(1)
            .and_then(|j| by_file.get(j))
            .ok_or(SolutionError::Unknown { line, id })?;
        out.insert(*v);
    }
    Ok(out)
}

pub fn write_solution(s: &BTreeSet<VertexId>, g: &Graph) -> String {
    let ids = canonical_ids(g);
    s.iter().map(|v| format!("{}\n", ids[v])).collect()
}
