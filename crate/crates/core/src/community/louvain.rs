// SPDX-License-Identifier: Apache-2.0

//! Fast unfolding (Louvain) modularity optimization.

use rand::seq::SliceRandom;

use super::{compact_labels, modularity};
use crate::graph::Csr;
use crate::rng::stage_rng;

const MIN_GAIN: f64 = 1e-7;

/// Weighted graph of one aggregation level.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    /// Total weight of edges folded inside each node.
    loops: Vec<f64>,
}

impl Level {
    fn from_csr(g: &Csr) -> Self {
        let adj = (0..g.vertex_count() as u32)
            .map(|v| g.neighbors(v).iter().map(|&w| (w as usize, 1.0)).collect())
            .collect();
        Self { adj, loops: vec![0.0; g.vertex_count()] }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn strength(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.loops[v]
    }

    fn aggregate(&self, community: &[usize], k: usize) -> Self {
        let mut loops = vec![0.0; k];
        let mut maps: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); k];
        for v in 0..self.len() {
            let cv = community[v];
            loops[cv] += self.loops[v];
            for &(w, weight) in &self.adj[v] {
                let cw = community[w];
                if cv == cw {
                    // Seen from both ends.
                    loops[cv] += weight / 2.0;
                } else {
                    *maps[cv].entry(cw).or_insert(0.0) += weight;
                }
            }
        }
        Self { adj: maps.into_iter().map(|m| m.into_iter().collect()).collect(), loops }
    }
}

/// One local-move phase. Returns the community of every node, numbered
/// `0..k`, and whether anything moved.
fn local_moves(level: &Level, m2: f64, rng: &mut impl rand::Rng) -> (Vec<usize>, bool) {
    let n = level.len();
    let strength: Vec<f64> = (0..n).map(|v| level.strength(v)).collect();
    let mut community: Vec<usize> = (0..n).collect();
    let mut total = strength.clone();
    let mut links = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut moved_any = false;
    loop {
        order.shuffle(rng);
        let mut moved = false;
        for &v in &order {
            let own = community[v];
            for &c in &touched {
                links[c] = 0.0;
            }
            touched.clear();
            for &(w, weight) in &level.adj[v] {
                let c = community[w];
                if links[c] == 0.0 {
                    touched.push(c);
                }
                links[c] += weight;
            }
            let kv = strength[v];
            total[own] -= kv;
            let gain = |c: usize, links: &[f64]| links[c] - total[c] * kv / m2;
            let mut best = own;
            let mut best_gain = gain(own, &links);
            for &c in &touched {
                let g = gain(c, &links);
                if g > best_gain + 1e-12 {
                    best = c;
                    best_gain = g;
                }
            }
            total[best] += kv;
            if best != own {
                community[v] = best;
                moved = true;
                moved_any = true;
            }
        }
        if !moved {
            break;
        }
    }
    let labels: Vec<u32> = community.iter().map(|&c| c as u32).collect();
    (compact_labels(&labels).into_iter().map(|c| c as usize).collect(), moved_any)
}

/// Result of [`fast_unfolding_traced`].
#[derive(Debug, Clone)]
pub struct Unfolding {
    pub labels: Vec<u32>,
    /// Modularity of the original graph after each level.
    pub trace: Vec<f64>,
}

pub fn fast_unfolding_traced(graph: &Csr, seed: u64) -> Unfolding {
    let n = graph.vertex_count();
    let mut labels: Vec<u32> = (0..n as u32).collect();
    let m2 = 2.0 * graph.edge_count() as f64;
    let mut trace = vec![modularity(graph, &labels)];
    if m2 == 0.0 {
        return Unfolding { labels, trace };
    }
    let mut rng = stage_rng(seed, "fast-unfolding", 0);
    let mut level = Level::from_csr(graph);
    loop {
        let (community, moved) = local_moves(&level, m2, &mut rng);
        if !moved {
            break;
        }
        let next: Vec<u32> = labels.iter().map(|&l| community[l as usize] as u32).collect();
        let q = modularity(graph, &next);
        let previous = *trace.last().expect("trace starts non-empty");
        if q - previous < MIN_GAIN {
            if q > previous {
                labels = next;
                trace.push(q);
            }
            break;
        }
        labels = next;
        trace.push(q);
        let k = community.iter().max().map_or(0, |&c| c + 1);
        level = level.aggregate(&community, k);
    }
    Unfolding { labels: compact_labels(&labels), trace }
}

/// Greedy modularity optimization; isolated vertices stay singletons.
pub fn fast_unfolding(graph: &Csr, seed: u64) -> Vec<u32> {
    fast_unfolding_traced(graph, seed).labels
}
