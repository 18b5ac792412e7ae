// SPDX-License-Identifier: Apache-2.0

//! Degree pmfs, degree-sequence sampling and the even block partition.
//!
//! A community's stubs are sorted ascending by the degree of their vertex and
//! cut into `b` contiguous chunks of equal size (±1). When no degree value is
//! cut by a chunk boundary the partition is *strict*: the degree sets
//! `H_1..H_b` are disjoint and every block carries the same stub mass
//! `E[Z]/b`, which is what the closed forms require. Sampled sequences rarely
//! split that cleanly, so the default *relaxed* mode keeps the equal-size
//! chunks, flags the boundaries that cut a degree value and computes the
//! block moments `u_i`, `t_i` from the stub masses actually in each block.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::stage_rng;

const SUM_TOLERANCE: f64 = 1e-9;
const MASS_TOLERANCE: f64 = 1e-9;

/// A degree pmf `{p_k}` with its first three raw moments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeDistribution {
    support: Vec<(u32, f64)>,
    moments: [f64; 3],
}

impl DegreeDistribution {
    /// Builds a pmf from `(k, p_k)` pairs. Duplicate degrees are merged,
    /// zero-probability entries dropped and the result renormalized; the
    /// input must already sum to one within `1e-9`.
    pub fn new(pairs: impl IntoIterator<Item = (u32, f64)>) -> Result<Self> {
        let mut merged: BTreeMap<u32, f64> = BTreeMap::new();
        for (k, p) in pairs {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution(format!("p_{k} = {p} is not a probability")));
            }
            *merged.entry(k).or_insert(0.0) += p;
        }
        let total: f64 = merged.values().sum();
        if merged.is_empty() || (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}, expected 1")));
        }
        let support: Vec<(u32, f64)> = merged
            .into_iter()
            .filter(|&(_, p)| p > 0.0)
            .map(|(k, p)| (k, p / total))
            .collect();
        let moments = raw_moments(&support);
        Ok(Self { support, moments })
    }

    /// Truncated discrete power law `p_k ∝ k^-gamma` on `[kmin, kmax]`.
    pub fn power_law(gamma: f64, kmin: u32, kmax: u32) -> Result<Self> {
        validate_power_law(gamma, kmin, kmax)?;
        let weights: Vec<(u32, f64)> = (kmin..=kmax).map(|k| (k, f64::from(k).powf(-gamma))).collect();
        let norm: f64 = weights.iter().map(|&(_, w)| w).sum();
        Self::new(weights.into_iter().map(|(k, w)| (k, w / norm)))
    }

    /// `(k, p_k)` pairs in ascending degree order, all with `p_k > 0`.
    pub fn support(&self) -> &[(u32, f64)] {
        &self.support
    }

    pub fn probability(&self, k: u32) -> f64 {
        self.support
            .binary_search_by_key(&k, |&(d, _)| d)
            .map(|i| self.support[i].1)
            .unwrap_or(0.0)
    }

    /// E[Z]
    pub fn mean(&self) -> f64 {
        self.moments[0]
    }

    /// E[Z²]
    pub fn second_moment(&self) -> f64 {
        self.moments[1]
    }

    /// E[Z³]
    pub fn third_moment(&self) -> f64 {
        self.moments[2]
    }

    pub fn max_degree(&self) -> u32 {
        self.support.last().map(|&(k, _)| k).unwrap_or(0)
    }
}

fn raw_moments(support: &[(u32, f64)]) -> [f64; 3] {
    let mut m = [0.0; 3];
    for &(k, p) in support {
        let k = f64::from(k);
        m[0] += k * p;
        m[1] += k * k * p;
        m[2] += k * k * k * p;
    }
    m
}

/// `(E[Z], E[Z²], E[Z³])`.
pub fn distribution_moments(dist: &DegreeDistribution) -> (f64, f64, f64) {
    (dist.mean(), dist.second_moment(), dist.third_moment())
}

fn validate_power_law(gamma: f64, kmin: u32, kmax: u32) -> Result<()> {
    if !gamma.is_finite() || gamma <= 1.0 {
        return Err(Error::param("gamma", format!("must be > 1, got {gamma}")));
    }
    if kmin < 1 {
        return Err(Error::param("kmin", "must be at least 1"));
    }
    if kmin > kmax {
        return Err(Error::param("kmin", format!("kmin = {kmin} exceeds kmax = {kmax}")));
    }
    Ok(())
}

/// Per-community degree lists. Vertex ids are global and assigned
/// community by community: community 0 owns `0..n_0`, community 1 owns
/// `n_0..n_0+n_1`, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSequence {
    communities: Vec<Vec<u32>>,
}

impl DegreeSequence {
    pub fn new(communities: Vec<Vec<u32>>) -> Result<Self> {
        if communities.iter().all(|c| c.is_empty()) {
            return Err(Error::EmptySequence);
        }
        Ok(Self { communities })
    }

    pub fn single(degrees: Vec<u32>) -> Result<Self> {
        Self::new(vec![degrees])
    }

    pub fn communities(&self) -> &[Vec<u32>] {
        &self.communities
    }

    pub fn community_count(&self) -> usize {
        self.communities.len()
    }

    pub fn community_sizes(&self) -> Vec<usize> {
        self.communities.iter().map(Vec::len).collect()
    }

    /// First global vertex id of every community.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.communities
            .iter()
            .map(|c| {
                let start = acc;
                acc += c.len();
                start
            })
            .collect()
    }

    /// Total vertex count `n`.
    pub fn vertex_count(&self) -> usize {
        self.communities.iter().map(Vec::len).sum()
    }

    /// `2 m_i`
    pub fn stub_count(&self, community: usize) -> usize {
        self.communities[community].iter().map(|&k| k as usize).sum()
    }

    /// Total edge count `m`.
    pub fn edge_count(&self) -> usize {
        (0..self.communities.len()).map(|i| self.stub_count(i)).sum::<usize>() / 2
    }

    /// Degrees of all vertices in global id order.
    pub fn flat(&self) -> Vec<u32> {
        self.communities.iter().flatten().copied().collect()
    }

    pub fn community_labels(&self) -> Vec<u32> {
        self.communities
            .iter()
            .enumerate()
            .flat_map(|(i, c)| std::iter::repeat_n(i as u32, c.len()))
            .collect()
    }

    pub fn is_even(&self) -> bool {
        (0..self.communities.len()).all(|i| self.stub_count(i).is_multiple_of(2))
    }

    /// Makes every community's stub count even by incrementing the degree of
    /// one uniformly chosen vertex in each odd community. Returns the global
    /// ids of the vertices that were bumped.
    pub fn repair_parity<R: Rng>(&mut self, rng: &mut R) -> Vec<usize> {
        let offsets = self.offsets();
        let mut bumped = Vec::new();
        for (i, degrees) in self.communities.iter_mut().enumerate() {
            let stubs: u64 = degrees.iter().map(|&k| u64::from(k)).sum();
            if stubs % 2 == 1 {
                let v = rng.random_range(0..degrees.len());
                degrees[v] += 1;
                bumped.push(offsets[i] + v);
            }
        }
        bumped
    }
}

/// Empirical pmf of a sequence: `p_k = #{v : deg v = k} / n`.
pub fn pmf_from_sequence(degrees: &DegreeSequence) -> Result<DegreeDistribution> {
    let n = degrees.vertex_count();
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &k in degrees.communities.iter().flatten() {
        *counts.entry(k).or_insert(0) += 1;
    }
    DegreeDistribution::new(counts.into_iter().map(|(k, c)| (k, c as f64 / n as f64)))
}

/// Inverse-CDF sampler for the truncated discrete power law.
#[derive(Debug, Clone)]
pub struct PowerLawSampler {
    kmin: u32,
    cdf: Vec<f64>,
}

impl PowerLawSampler {
    pub fn new(gamma: f64, kmin: u32, kmax: u32) -> Result<Self> {
        validate_power_law(gamma, kmin, kmax)?;
        let mut cdf = Vec::with_capacity((kmax - kmin + 1) as usize);
        let mut acc = 0.0;
        for k in kmin..=kmax {
            acc += f64::from(k).powf(-gamma);
            cdf.push(acc);
        }
        let total = acc;
        for c in &mut cdf {
            *c /= total;
        }
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Ok(Self { kmin, cdf })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.random();
        let idx = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
        self.kmin + idx as u32
    }
}

/// Draws `n` i.i.d. degrees from `p_k ∝ k^-gamma` on `[kmin, kmax]` and
/// repairs the parity of the stub count.
pub fn sample_power_law_sequence(n: usize, gamma: f64, kmin: u32, kmax: u32, seed: u64) -> Result<DegreeSequence> {
    sample_power_law_communities(&[n], gamma, kmin, kmax, seed)
}

/// Multi-community variant: community `i` draws from its own stream derived
/// from `seed`, and each community is parity-repaired separately.
pub fn sample_power_law_communities(
    sizes: &[usize],
    gamma: f64,
    kmin: u32,
    kmax: u32,
    seed: u64,
) -> Result<DegreeSequence> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::param("n", "every community needs at least one vertex"));
    }
    let sampler = PowerLawSampler::new(gamma, kmin, kmax)?;
    let communities = sizes
        .iter()
        .enumerate()
        .map(|(i, &size)| {
            let mut rng = stage_rng(seed, "degrees", i as u64);
            (0..size).map(|_| sampler.sample(&mut rng)).collect()
        })
        .collect();
    let mut seq = DegreeSequence::new(communities)?;
    let mut rng = stage_rng(seed, "parity", 0);
    seq.repair_parity(&mut rng);
    Ok(seq)
}

/// Inverse-CDF sampler over the support of any [`DegreeDistribution`].
#[derive(Debug, Clone)]
pub struct DistributionSampler {
    values: Vec<u32>,
    cdf: Vec<f64>,
}

impl DistributionSampler {
    pub fn new(dist: &DegreeDistribution) -> Self {
        let mut acc = 0.0;
        let (values, mut cdf): (Vec<u32>, Vec<f64>) = dist
            .support()
            .iter()
            .map(|&(k, p)| {
                acc += p;
                (k, acc)
            })
            .unzip();
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Self { values, cdf }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.random();
        self.values[self.cdf.partition_point(|&c| c <= u).min(self.values.len() - 1)]
    }
}

/// Draws community `i` from its own stream derived from `seed`. Parity is
/// left to the caller.
pub fn sample_distribution_communities(dist: &DegreeDistribution, sizes: &[usize], seed: u64) -> Result<DegreeSequence> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::param("n", "every community needs at least one vertex"));
    }
    let sampler = DistributionSampler::new(dist);
    let communities = sizes
        .iter()
        .enumerate()
        .map(|(i, &size)| {
            let mut rng = stage_rng(seed, "degrees", i as u64);
            (0..size).map(|_| sampler.sample(&mut rng)).collect()
        })
        .collect();
    DegreeSequence::new(communities)
}

/// A half-edge: owning vertex (global id) and slot index within the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Stub {
    pub vertex: u32,
    pub slot: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Block {
    /// Stubs in ascending degree order.
    pub stubs: Vec<Stub>,
    /// Stubs per degree value inside this block.
    pub degree_stubs: BTreeMap<u32, usize>,
}

impl Block {
    /// The degree set `H_i`.
    pub fn degree_set(&self) -> impl Iterator<Item = u32> + '_ {
        self.degree_stubs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.stubs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stubs.is_empty()
    }
}

/// Per-block stub mass `Σ k p_k`, second moment `u_i` and third moment `t_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockMoments {
    pub mass: Vec<f64>,
    pub u: Vec<f64>,
    pub t: Vec<f64>,
    /// `straddles[j]` is set when one degree value spans blocks `j` and `j+1`.
    pub straddles: Vec<bool>,
}

impl BlockMoments {
    pub fn b(&self) -> usize {
        self.u.len()
    }

    pub fn is_strict(&self) -> bool {
        !self.straddles.iter().any(|&s| s)
    }

    /// Even split of a pmf in stub-mass space. Degrees are walked in
    /// ascending order and poured into blocks of mass `E[Z]/b`; a degree
    /// whose mass crosses a block boundary is an error in
    /// strict mode and is split proportionally in relaxed mode.
    pub fn from_distribution(dist: &DegreeDistribution, b: usize, strict: bool) -> Result<Self> {
        if b == 0 {
            return Err(Error::param("b", "must be at least 1"));
        }
        let target = dist.mean() / b as f64;
        let tol = MASS_TOLERANCE * dist.mean().max(1.0);
        let mut mass = vec![0.0; b];
        let mut u = vec![0.0; b];
        let mut t = vec![0.0; b];
        let mut straddles = vec![false; b.saturating_sub(1)];
        let mut block = 0usize;
        for &(k, p) in dist.support() {
            let kf = f64::from(k);
            let mut remaining = kf * p;
            if remaining == 0.0 {
                continue;
            }
            loop {
                let room = target - mass[block];
                if block == b - 1 || remaining <= room + tol {
                    mass[block] += remaining;
                    u[block] += kf * remaining;
                    t[block] += kf * kf * remaining;
                    if block < b - 1 && mass[block] >= target - tol {
                        block += 1;
                    }
                    break;
                }
                if room > tol {
                    straddles[block] = true;
                    if strict {
                        return Err(Error::Assumption1Violation { degree: k, left: block + 1, right: block + 2 });
                    }
                    mass[block] += room;
                    u[block] += kf * room;
                    t[block] += kf * kf * room;
                    remaining -= room;
                }
                block += 1;
            }
        }
        if strict {
            if let Some(j) = mass.iter().position(|&m| (m - target).abs() > tol) {
                return Err(Error::Assumption1Violation {
                    degree: dist.max_degree(),
                    left: j + 1,
                    right: (j + 2).min(b),
                });
            }
        }
        Ok(Self { mass, u, t, straddles })
    }

    /// The five sequences that must be non-decreasing on an ascending strict
    /// partition: `u_i`, `t_i`, `t_i - u_i`, `u_i²` and `u_i(u_i - c)` for
    /// the supplied constant `c` (`c <= 2 min u_i`).
    pub fn is_ascending(&self, c: f64, slack: f64) -> bool {
        let seqs: [Vec<f64>; 5] = [
            self.u.clone(),
            self.t.clone(),
            self.t.iter().zip(&self.u).map(|(t, u)| t - u).collect(),
            self.u.iter().map(|u| u * u).collect(),
            self.u.iter().map(|u| u * (u - c)).collect(),
        ];
        seqs.iter().all(|s| s.windows(2).all(|w| w[1] >= w[0] - slack * w[0].abs().max(1.0)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunityBlocks {
    pub community: usize,
    pub vertices: usize,
    pub blocks: Vec<Block>,
    /// Moments from the community's own stub masses (`p_k` = count / n_i).
    pub moments: BlockMoments,
}

impl CommunityBlocks {
    /// Per-block stub mass `z` of the realized split.
    pub fn stub_mass(&self) -> &[f64] {
        &self.moments.mass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockPartition {
    pub b: usize,
    pub strict: bool,
    pub communities: Vec<CommunityBlocks>,
}

impl BlockPartition {
    pub fn has_straddles(&self) -> bool {
        self.communities.iter().any(|c| !c.moments.is_strict())
    }
}

/// Splits each community's degree-sorted stubs into `b` contiguous chunks of
/// equal size (±1). In strict mode a degree value cut by a chunk boundary, or
/// a stub count not divisible by `b`, is an error.
pub fn partition_into_blocks(degrees: &DegreeSequence, b: usize, strict: bool) -> Result<BlockPartition> {
    if b == 0 {
        return Err(Error::param("b", "must be at least 1"));
    }
    let offsets = degrees.offsets();
    let mut communities = Vec::with_capacity(degrees.community_count());
    for (ci, community) in degrees.communities().iter().enumerate() {
        let total: usize = community.iter().map(|&k| k as usize).sum();
        if strict && !total.is_multiple_of(b) {
            return Err(Error::IndivisibleStubs { community: ci, stubs: total, b });
        }
        let mut order: Vec<u32> = (0..community.len() as u32).collect();
        order.sort_by_key(|&v| (community[v as usize], v));
        let mut sorted_stubs = Vec::with_capacity(total);
        for &v in &order {
            for slot in 0..community[v as usize] {
                sorted_stubs.push((community[v as usize], Stub { vertex: (offsets[ci] + v as usize) as u32, slot }));
            }
        }
        let mut blocks = Vec::with_capacity(b);
        for j in 0..b {
            let lo = j * total / b;
            let hi = (j + 1) * total / b;
            let mut degree_stubs = BTreeMap::new();
            let stubs = sorted_stubs[lo..hi]
                .iter()
                .map(|&(k, s)| {
                    *degree_stubs.entry(k).or_insert(0) += 1;
                    s
                })
                .collect();
            blocks.push(Block { stubs, degree_stubs });
        }
        let mut straddles = vec![false; b - 1];
        for j in 0..b - 1 {
            let left_max = blocks[j].degree_stubs.keys().next_back();
            let right_min = blocks[j + 1].degree_stubs.keys().next();
            if let (Some(&l), Some(&r)) = (left_max, right_min) {
                if l == r {
                    straddles[j] = true;
                    if strict {
                        return Err(Error::Assumption1Violation { degree: l, left: j + 1, right: j + 2 });
                    }
                }
            }
        }
        let n_i = community.len().max(1) as f64;
        let mut mass = vec![0.0; b];
        let mut u = vec![0.0; b];
        let mut t = vec![0.0; b];
        for (j, block) in blocks.iter().enumerate() {
            for (&k, &count) in &block.degree_stubs {
                let k = f64::from(k);
                let c = count as f64;
                mass[j] += c / n_i;
                u[j] += k * c / n_i;
                t[j] += k * k * c / n_i;
            }
        }
        let moments = BlockMoments { mass, u, t, straddles };
        if strict {
            let c = 2.0 * moments.u.iter().copied().fold(f64::INFINITY, f64::min);
            debug_assert!(moments.is_ascending(c, 1e-12));
        }
        communities.push(CommunityBlocks { community: ci, vertices: community.len(), blocks, moments });
    }
    Ok(BlockPartition { b, strict, communities })
}

/// `u_i = Σ_{k∈H_i} k² p_k` and `t_i = Σ_{k∈H_i} k³ p_k` against an
/// external pmf. A degree that straddles blocks contributes to each block in
/// proportion to its stubs there.
pub fn block_moments(partition: &CommunityBlocks, dist: &DegreeDistribution) -> (Vec<f64>, Vec<f64>) {
    let b = partition.blocks.len();
    let mut totals: BTreeMap<u32, usize> = BTreeMap::new();
    for block in &partition.blocks {
        for (&k, &c) in &block.degree_stubs {
            *totals.entry(k).or_insert(0) += c;
        }
    }
    let mut u = vec![0.0; b];
    let mut t = vec![0.0; b];
    for (j, block) in partition.blocks.iter().enumerate() {
        for (&k, &c) in &block.degree_stubs {
            let share = c as f64 / totals[&k] as f64;
            let kf = f64::from(k);
            let p = dist.probability(k);
            u[j] += share * kf * kf * p;
            t[j] += share * kf * kf * kf * p;
        }
    }
    (u, t)
}
