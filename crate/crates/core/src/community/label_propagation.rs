// SPDX-License-Identifier: Apache-2.0

use rand::seq::SliceRandom;
use rand::Rng;

use super::compact_labels;
use crate::graph::Csr;
use crate::rng::stage_rng;

const MAX_SWEEPS: usize = 100;

/// Asynchronous label propagation in seeded random order. A vertex adopts
/// a most frequent neighbor label, keeping its own when that is among the
/// maxima and choosing uniformly otherwise.
pub fn label_propagation(graph: &Csr, seed: u64) -> Vec<u32> {
    let n = graph.vertex_count();
    let mut rng = stage_rng(seed, "label-propagation", 0);
    let mut labels: Vec<u32> = (0..n as u32).collect();
    let mut counts = vec![0u32; n];
    let mut seen: Vec<u32> = Vec::new();
    let mut best: Vec<u32> = Vec::new();
    let mut order: Vec<u32> = (0..n as u32).collect();
    for _ in 0..MAX_SWEEPS {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &v in &order {
            let nb = graph.neighbors(v);
            if nb.is_empty() {
                continue;
            }
            for &w in nb {
                let l = labels[w as usize];
                if counts[l as usize] == 0 {
                    seen.push(l);
                }
                counts[l as usize] += 1;
            }
            let top = seen.iter().map(|&l| counts[l as usize]).max().unwrap_or(0);
            best.clear();
            best.extend(seen.iter().copied().filter(|&l| counts[l as usize] == top));
            let own = labels[v as usize];
            if !best.contains(&own) {
                labels[v as usize] = best[rng.random_range(0..best.len())];
                changed = true;
            }
            for &l in &seen {
                counts[l as usize] = 0;
            }
            seen.clear();
        }
        if !changed {
            break;
        }
    }
    compact_labels(&labels)
}
