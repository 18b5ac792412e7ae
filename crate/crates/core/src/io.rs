// SPDX-License-Identifier: Apache-2.0

//! Text formats: `edges.tsv`, `communities.tsv`, degree-sequence files and
//! pmf files. Lines starting with `#` are comments everywhere.

use std::fmt::Write as _;

use crate::degree::{DegreeDistribution, DegreeSequence};
use crate::error::{Error, Result};
use crate::graph::{CtcGraph, Edge, EdgeKind};

fn parse_err(source: &str, line: usize, reason: impl Into<String>) -> Error {
    Error::Parse { source_name: source.to_string(), line, reason: reason.into() }
}

/// Data lines with their one-based line numbers; skips comments, blank
/// lines and a header that starts with `header`.
fn data_lines<'a>(text: &'a str, header: &'a str) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(move |(i, l)| !l.is_empty() && !l.starts_with('#') && !(*i == 1 && l.starts_with(header)))
}

/// `u\tv\tkind`, one line per raw edge, regular edges first.
pub fn write_edges(graph: &CtcGraph) -> String {
    let mut out = String::from("u\tv\tkind\n");
    for e in &graph.edges {
        let _ = writeln!(out, "{}\t{}\t{}", e.u, e.v, e.kind.code());
    }
    out
}

pub fn read_edges(text: &str, source: &str) -> Result<Vec<Edge>> {
    data_lines(text, "u\t")
        .map(|(line, l)| {
            let fields: Vec<&str> = l.split('\t').collect();
            let (u, v, kind) = match fields[..] {
                [u, v] => (u, v, "R"),
                [u, v, k] => (u, v, k),
                _ => return Err(parse_err(source, line, "expected `u<TAB>v<TAB>kind`")),
            };
            let vertex = |s: &str| s.trim().parse::<u32>().map_err(|e| parse_err(source, line, format!("vertex `{s}`: {e}")));
            let kind = match kind.trim() {
                "R" => EdgeKind::Regular,
                "T" => EdgeKind::Transitive,
                other => return Err(parse_err(source, line, format!("edge kind `{other}`, expected R or T"))),
            };
            Ok(Edge { u: vertex(u)?, v: vertex(v)?, kind })
        })
        .collect()
}

/// `vertex\tcommunity` for vertices `0..n`.
pub fn write_communities(labels: &[u32]) -> String {
    let mut out = String::from("vertex\tcommunity\n");
    for (v, c) in labels.iter().enumerate() {
        let _ = writeln!(out, "{v}\t{c}");
    }
    out
}

/// Reads a community file; every vertex `0..n` must appear exactly once.
pub fn read_communities(text: &str, source: &str) -> Result<Vec<u32>> {
    let mut pairs = Vec::new();
    for (line, l) in data_lines(text, "vertex") {
        let mut fields = l.split('\t');
        let (Some(v), Some(c), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(source, line, "expected `vertex<TAB>community`"));
        };
        let v = v.trim().parse::<usize>().map_err(|e| parse_err(source, line, format!("vertex `{v}`: {e}")))?;
        let c = c.trim().parse::<u32>().map_err(|e| parse_err(source, line, format!("community `{c}`: {e}")))?;
        pairs.push((line, v, c));
    }
    let mut labels = vec![None; pairs.len()];
    for (line, v, c) in pairs {
        match labels.get_mut(v) {
            Some(slot @ None) => *slot = Some(c),
            Some(Some(_)) => return Err(parse_err(source, line, format!("vertex {v} listed twice"))),
            None => return Err(parse_err(source, line, format!("vertex {v} out of range"))),
        }
    }
    Ok(labels.into_iter().map(|l| l.expect("every slot filled")).collect())
}

/// Graph from an edge list and a community file.
pub fn read_graph(edges: &str, edges_source: &str, communities: &str, communities_source: &str) -> Result<CtcGraph> {
    let labels = read_communities(communities, communities_source)?;
    let edges = read_edges(edges, edges_source)?;
    if let Some(e) = edges.iter().find(|e| e.u.max(e.v) as usize >= labels.len()) {
        return Err(parse_err(edges_source, 0, format!("edge ({}, {}) names a vertex without a community", e.u, e.v)));
    }
    Ok(CtcGraph::from_edges(labels, edges))
}

/// One degree per line; a blank line starts the next community.
pub fn read_degree_sequence(text: &str, source: &str) -> Result<DegreeSequence> {
    let mut communities: Vec<Vec<u32>> = vec![Vec::new()];
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.starts_with('#') {
            continue;
        }
        if l.is_empty() {
            if !communities.last().expect("non-empty").is_empty() {
                communities.push(Vec::new());
            }
            continue;
        }
        let k = l.parse::<u32>().map_err(|e| parse_err(source, i + 1, format!("degree `{l}`: {e}")))?;
        communities.last_mut().expect("non-empty").push(k);
    }
    if communities.last().is_some_and(Vec::is_empty) {
        communities.pop();
    }
    if communities.is_empty() {
        return Err(Error::EmptySequence);
    }
    DegreeSequence::new(communities)
}

pub fn write_degree_sequence(seq: &DegreeSequence) -> String {
    let blocks: Vec<String> = seq
        .communities()
        .iter()
        .map(|c| c.iter().map(|k| format!("{k}\n")).collect())
        .collect();
    blocks.join("\n")
}

/// `k\tp_k` per line.
pub fn read_pmf(text: &str, source: &str) -> Result<DegreeDistribution> {
    let pairs = data_lines(text, "k\t")
        .map(|(line, l)| {
            let mut fields = l.split_whitespace();
            let (Some(k), Some(p), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(parse_err(source, line, "expected `k<TAB>p_k`"));
            };
            let k = k.parse::<u32>().map_err(|e| parse_err(source, line, format!("degree `{k}`: {e}")))?;
            let p = parse_probability(p).map_err(|r| parse_err(source, line, r))?;
            Ok((k, p))
        })
        .collect::<Result<Vec<_>>>()?;
    DegreeDistribution::new(pairs)
}

/// A probability written as a decimal or a fraction such as `2/3`.
pub fn parse_probability(s: &str) -> std::result::Result<f64, String> {
    let value = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            let d: f64 = d.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
            n / d
        }
        None => s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?,
    };
    if !value.is_finite() || value < 0.0 {
        return Err(format!("`{s}` is not a probability"));
    }
    Ok(value)
}

pub fn write_pmf(dist: &DegreeDistribution) -> String {
    let mut out = String::from("k\tp_k\n");
    for &(k, p) in dist.support() {
        let _ = writeln!(out, "{k}\t{p}");
    }
    out
}
