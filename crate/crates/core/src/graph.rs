// SPDX-License-Identifier: Apache-2.0

//! Graph containers: a compact CSR adjacency for simple graphs and the
//! labeled CTC multigraph built on top of it.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeKind {
    Regular,
    Transitive,
}

impl EdgeKind {
    pub fn code(self) -> char {
        match self {
            EdgeKind::Regular => 'R',
            EdgeKind::Transitive => 'T',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub kind: EdgeKind,
}

/// Undirected simple graph in CSR form: neighbor lists are sorted, free of
/// duplicates and self-loops.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    /// Builds the simple projection of an undirected edge list.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut directed: Vec<(u32, u32)> = Vec::new();
        for (u, v) in pairs {
            if u != v {
                directed.push((u, v));
                directed.push((v, u));
            }
        }
        directed.sort_unstable();
        directed.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &directed {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = directed.into_iter().map(|(_, v)| v).collect();
        Self { offsets, targets }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Every undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.vertex_count() as u32)
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }
}

/// A generated (or imported) CTC graph.
///
/// `edges` keeps the raw multigraph: regular edges exactly as wired
/// (self-loops and repeats included) followed by transitive edges. All
/// measurements run on the simple projections `regular` and `simple`.
#[derive(Debug, Clone)]
pub struct CtcGraph {
    pub community: Vec<u32>,
    pub edges: Vec<Edge>,
    /// Stub count per vertex (a self-loop counts twice).
    pub regular_degree: Vec<u32>,
    pub transitive_degree: Vec<u32>,
    pub self_loops: usize,
    pub multi_edges: usize,
    /// Simple projection of the regular edges.
    pub regular: Csr,
    /// Simple projection of all edges.
    pub simple: Csr,
}

impl CtcGraph {
    pub fn from_edges(community: Vec<u32>, edges: Vec<Edge>) -> Self {
        let n = community.len();
        let mut regular_degree = vec![0u32; n];
        let mut self_loops = 0;
        let mut regular_non_loop = 0;
        for e in edges.iter().filter(|e| e.kind == EdgeKind::Regular) {
            regular_degree[e.u as usize] += 1;
            regular_degree[e.v as usize] += 1;
            if e.u == e.v {
                self_loops += 1;
            } else {
                regular_non_loop += 1;
            }
        }
        let regular = Csr::from_pairs(
            n,
            edges.iter().filter(|e| e.kind == EdgeKind::Regular).map(|e| (e.u, e.v)),
        );
        let simple = Csr::from_pairs(n, edges.iter().map(|e| (e.u, e.v)));
        let transitive_degree = (0..n as u32)
            .map(|v| (simple.degree(v) - regular.degree(v)) as u32)
            .collect();
        let multi_edges = regular_non_loop - regular.edge_count();
        Self {
            community,
            edges,
            regular_degree,
            transitive_degree,
            self_loops,
            multi_edges,
            regular,
            simple,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.community.len()
    }

    pub fn transitive_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.kind == EdgeKind::Transitive).count()
    }

    /// Regular degree in the simple projection.
    pub fn simple_regular_degree(&self, v: u32) -> usize {
        self.regular.degree(v)
    }

    pub fn total_degree(&self, v: u32) -> usize {
        self.simple.degree(v)
    }

    /// Copy with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[u32]) -> Self {
        let mut community = vec![0; self.community.len()];
        for (v, &c) in self.community.iter().enumerate() {
            community[perm[v] as usize] = c;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { u: perm[e.u as usize], v: perm[e.v as usize], kind: e.kind })
            .collect();
        Self::from_edges(community, edges)
    }
}
