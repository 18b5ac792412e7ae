// SPDX-License-Identifier: Apache-2.0

//! Community detection and the NMI benchmark harness.

mod bench;
mod label_propagation;
mod louvain;

pub use bench::{run_benchmark, run_benchmark_with, spearman, BenchCase, BenchCell, BenchReport, Sweep};
pub use label_propagation::label_propagation;
pub use louvain::{fast_unfolding, fast_unfolding_traced, Unfolding};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Csr;

/// Built-in detectors. Partitions from other tools are scored through
/// [`run_benchmark_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Detector {
    FastUnfolding,
    LabelPropagation,
}

impl Detector {
    pub const NAMES: [&'static str; 2] = ["fast_unfolding", "label_propagation"];

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "fast_unfolding" => Ok(Self::FastUnfolding),
            "label_propagation" => Ok(Self::LabelPropagation),
            other => Err(Error::param("detector", format!("unknown detector `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::FastUnfolding => "fast_unfolding",
            Self::LabelPropagation => "label_propagation",
        }
    }

    pub fn detect(self, graph: &Csr, seed: u64) -> Vec<u32> {
        match self {
            Self::FastUnfolding => fast_unfolding(graph, seed),
            Self::LabelPropagation => label_propagation(graph, seed),
        }
    }
}

/// Newman modularity (resolution 1) of a labeling of a simple graph.
pub fn modularity(graph: &Csr, labels: &[u32]) -> f64 {
    let m2 = 2.0 * graph.edge_count() as f64;
    if m2 == 0.0 {
        return 0.0;
    }
    let c = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut inside = vec![0.0; c];
    let mut total = vec![0.0; c];
    for v in 0..graph.vertex_count() as u32 {
        let l = labels[v as usize] as usize;
        total[l] += graph.degree(v) as f64;
        inside[l] += graph.neighbors(v).iter().filter(|&&w| labels[w as usize] as usize == l).count() as f64;
    }
    inside.iter().zip(&total).map(|(i, t)| i / m2 - (t / m2).powi(2)).sum()
}

/// Renumbers labels to `0..k` in order of first appearance.
pub fn compact_labels(labels: &[u32]) -> Vec<u32> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len() as u32;
            *map.entry(l).or_insert(next)
        })
        .collect()
}
