// SPDX-License-Identifier: Apache-2.0

//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use ctc_core::closed_form::BlockModel;
use ctc_core::degree::DegreeDistribution;
use ctc_core::generator::Involution;
use ctc_core::graph::Csr;
use rand::Rng;

/// A pmf whose blocks are known by construction.
#[derive(Debug, Clone)]
pub struct StrictPmf {
    pub dist: DegreeDistribution,
    /// `(degree, probability, block)` ascending by degree.
    pub entries: Vec<(u32, f64, usize)>,
    pub b: usize,
}

/// Each block gets 1 to 3 consecutive distinct degrees with random weights
/// `w`; `p_k ∝ w_k / k` makes every block carry the same stub mass.
pub fn random_strict_pmf<R: Rng>(rng: &mut R, b: usize, max_gap: u32) -> StrictPmf {
    let mut k = rng.random_range(1..=3u32);
    let mut raw = Vec::new();
    for block in 0..b {
        let count = rng.random_range(1..=3usize);
        let weights: Vec<f64> = (0..count).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for w in weights {
            raw.push((k, w / total, block));
            k += rng.random_range(1..=max_gap);
        }
    }
    let c: f64 = 1.0 / raw.iter().map(|&(k, w, _)| w / f64::from(k)).sum::<f64>();
    let entries: Vec<(u32, f64, usize)> = raw.iter().map(|&(k, w, blk)| (k, c * w / f64::from(k), blk)).collect();
    let dist = DegreeDistribution::new(entries.iter().map(|&(k, p, _)| (k, p))).expect("valid pmf");
    StrictPmf { dist, entries, b }
}

impl StrictPmf {
    pub fn model(&self, h: Involution) -> BlockModel {
        BlockModel::from_distribution(&self.dist, self.b, h, true).expect("strict by construction")
    }
}

/// Direct sums over the joint endpoint pmf
/// `P(x, y) = (x p_x / μ₁)(y p_y / μ₁)(1 − q + q b [block(y) = h(block(x))])`.
pub struct Enumeration {
    pub ex: f64,
    pub ex2: f64,
    pub exy: f64,
    pub ex2y: f64,
    pub exy2: f64,
    pub exg: f64,
    pub eyg: f64,
    pub eg2: f64,
    pub exg2: f64,
    pub ex2g: f64,
    pub ex2g2: f64,
    pub exyg: f64,
    pub egg: f64,
    pub eygg: f64,
    pub exygg: f64,
    /// Sum of the joint pmf.
    pub total: f64,
    /// Largest deviation of `Σ_y P(y | x)` from 1.
    pub conditional_defect: f64,
    pub transitive: [f64; 5],
}

pub fn enumerate(pmf: &StrictPmf, h: &Involution, q: f64, a: f64) -> Enumeration {
    let e = &pmf.entries;
    let b = pmf.b as f64;
    let m1: f64 = e.iter().map(|&(k, p, _)| f64::from(k) * p).sum();
    let size: Vec<f64> = e.iter().map(|&(k, p, _)| f64::from(k) * p / m1).collect();
    let joint = |i: usize, j: usize| {
        let same = e[j].2 == h.apply(e[i].2);
        size[i] * size[j] * (1.0 - q + if same { q * b } else { 0.0 })
    };
    let n = e.len();
    let deg: Vec<f64> = e.iter().map(|&(k, _, _)| f64::from(k)).collect();
    // g(x) = E[Y | X = x] and E[(Y - 1)(Y - 2) | X = x].
    let mut g = vec![0.0; n];
    let mut yy = vec![0.0; n];
    let mut defect: f64 = 0.0;
    for i in 0..n {
        let mut mass = 0.0;
        for (j, &dj) in deg.iter().enumerate() {
            let c = joint(i, j) / size[i];
            mass += c;
            g[i] += dj * c;
            yy[i] += (dj - 1.0) * (dj - 2.0) * c;
        }
        defect = defect.max((mass - 1.0).abs());
    }
    let mut out = Enumeration {
        ex: 0.0,
        ex2: 0.0,
        exy: 0.0,
        ex2y: 0.0,
        exy2: 0.0,
        exg: 0.0,
        eyg: 0.0,
        eg2: 0.0,
        exg2: 0.0,
        ex2g: 0.0,
        ex2g2: 0.0,
        exyg: 0.0,
        egg: 0.0,
        eygg: 0.0,
        exygg: 0.0,
        total: 0.0,
        conditional_defect: defect,
        transitive: [0.0; 5],
    };
    let [mut ex1, mut ex1y, mut ex1y1, mut exx1, mut ex1sq] = [0.0; 5];
    for i in 0..n {
        let (x, gx) = (deg[i], g[i]);
        out.ex += size[i] * x;
        out.ex2 += size[i] * x * x;
        out.exg += size[i] * x * gx;
        out.eg2 += size[i] * gx * gx;
        out.exg2 += size[i] * x * gx * gx;
        out.ex2g += size[i] * x * x * gx;
        out.ex2g2 += size[i] * x * x * gx * gx;
        // Per-wedge closure: each of the x neighbors adds Binomial(Y_i − 1, a).
        let mean_b = a * (gx - 1.0);
        let second_b = a * (gx - 1.0) + a * a * yy[i];
        exx1 += size[i] * x * x * mean_b;
        ex1sq += size[i] * (x * second_b + x * (x - 1.0) * mean_b * mean_b);
        for j in 0..n {
            let p = joint(i, j);
            let (y, gy) = (deg[j], g[j]);
            out.total += p;
            out.exy += p * x * y;
            out.ex2y += p * x * x * y;
            out.exy2 += p * x * y * y;
            out.eyg += p * y * gx;
            out.exyg += p * x * y * gx;
            out.egg += p * gx * gy;
            out.eygg += p * y * gx * gy;
            out.exygg += p * x * y * gx * gy;
            let x1 = a * (y - 1.0) + a * (x - 1.0) * (gx - 1.0);
            let y1 = a * (x - 1.0) + a * (y - 1.0) * (gy - 1.0);
            ex1 += p * x1;
            ex1y += p * x1 * y;
            ex1y1 += p * x1 * y1;
        }
    }
    out.transitive = [ex1, ex1y, ex1y1, exx1, ex1sq];
    out
}

/// Non-adjacent pairs with a common neighbor by scanning all pairs.
pub fn brute_force_candidates(g: &Csr) -> Vec<(u32, u32)> {
    let n = g.vertex_count() as u32;
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) {
                continue;
            }
            if (0..n).any(|w| g.has_edge(u, w) && g.has_edge(v, w)) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Relative agreement with an absolute floor for values near zero.
pub fn close(x: f64, y: f64, rel: f64, floor: f64) -> bool {
    (x - y).abs() <= rel * x.abs().max(y.abs()) + floor
}
