// SPDX-License-Identifier: Apache-2.0

//! The CTC construction: stub typing, three-stage wiring and one random
//! triadic-closure pass.
//!
//! Per community, each block receives `⌈2m_i·q·r/b⌉` type-1 stubs,
//! `⌈2m_i·(1-q)·r/b⌉` type-2 stubs and type-3 stubs for the rest.
//! Type-1 stubs in block `j` match type-1 stubs in block `h(j)` of the same
//! community, type-2 stubs match within the community and type-3 stubs match
//! globally. Each pool is wired as a uniform random perfect matching, which
//! is the distribution produced by repeatedly pairing a random unconnected
//! stub with a random admissible partner.
//!
//! The closure pass enumerates wedges of the simple regular projection,
//! deduplicates the non-adjacent endpoint pairs and flips one Bernoulli(a)
//! coin per pair. The coin is a hash of (seed, pair), so the outcome does not
//! depend on the enumeration order or on the execution strategy.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::degree::{
    partition_into_blocks, sample_distribution_communities, BlockPartition, DegreeDistribution, DegreeSequence, Stub,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{Csr, CtcGraph, Edge, EdgeKind};
use crate::rng::{derive_seed, stage_rng};

/// A block pairing `h` with `h(h(i)) = i`. Stored zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Involution(Vec<usize>);

impl Involution {
    pub fn identity(b: usize) -> Self {
        Self((0..b).collect())
    }

    /// `h(i) = b + 1 - i`
    pub fn reversal(b: usize) -> Self {
        Self((0..b).rev().collect())
    }

    /// From a one-based image list, e.g. `[2, 1, 3]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let b = images.len();
        if b == 0 {
            return Err(Error::param("h", "empty permutation"));
        }
        let map: Vec<usize> = images
            .iter()
            .map(|&x| {
                if x == 0 || x > b {
                    Err(Error::param("h", format!("image {x} outside 1..={b}")))
                } else {
                    Ok(x - 1)
                }
            })
            .collect::<Result<_>>()?;
        let h = Self(map);
        h.validate()?;
        Ok(h)
    }

    /// Parses `id`, `rev` or a comma-separated one-based image list.
    pub fn parse(spec: &str, b: usize) -> Result<Self> {
        match spec.trim() {
            "id" | "identity" => Ok(Self::identity(b)),
            "rev" | "reversal" => Ok(Self::reversal(b)),
            list => {
                let images = list
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|e| Error::param("h", format!("`{s}`: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                let h = Self::from_one_based(&images)?;
                if h.len() != b {
                    return Err(Error::param("h", format!("has {} entries, expected b = {b}", h.len())));
                }
                Ok(h)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        for (i, &j) in self.0.iter().enumerate() {
            if j >= self.0.len() || self.0[j] != i {
                return Err(Error::param("h", format!("not an involution: h(h({})) != {}", i + 1, i + 1)));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DegreeSource {
    Explicit(DegreeSequence),
    PowerLaw { gamma: f64, kmin: u32, kmax: u32 },
    /// Degrees drawn i.i.d. from a pmf.
    Distribution(DegreeDistribution),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelConfig {
    /// `n_i`; ignored for explicit sequences, which carry their own sizes.
    pub community_sizes: Vec<usize>,
    pub b: usize,
    pub q: f64,
    pub r: f64,
    pub a: f64,
    pub h: Involution,
    pub seed: u64,
    pub degrees: DegreeSource,
    /// Reject partitions where a degree straddles a block boundary.
    pub strict_blocks: bool,
}

impl ModelConfig {
    /// Single-community power-law config with `h = id`.
    pub fn power_law(n: usize, gamma: f64, kmin: u32, kmax: u32) -> Self {
        Self {
            community_sizes: vec![n],
            b: 1,
            q: 0.0,
            r: 1.0,
            a: 0.0,
            h: Involution::identity(1),
            seed: 0,
            degrees: DegreeSource::PowerLaw { gamma, kmin, kmax },
            strict_blocks: false,
        }
    }

    pub fn explicit(degrees: DegreeSequence) -> Self {
        Self {
            community_sizes: degrees.community_sizes(),
            b: 1,
            q: 0.0,
            r: 1.0,
            a: 0.0,
            h: Involution::identity(1),
            seed: 0,
            degrees: DegreeSource::Explicit(degrees),
            strict_blocks: false,
        }
    }

    pub fn with_blocks(mut self, b: usize, h: Involution) -> Self {
        self.b = b;
        self.h = h;
        self
    }

    pub fn with_mixing(mut self, q: f64, r: f64, a: f64) -> Self {
        self.q = q;
        self.r = r;
        self.a = a;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `c`
    pub fn community_count(&self) -> usize {
        match &self.degrees {
            DegreeSource::Explicit(seq) => seq.community_count(),
            _ => self.community_sizes.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("q", self.q), ("r", self.r), ("a", self.a)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::param(name, format!("{value} outside [0, 1]")));
            }
        }
        if self.b == 0 {
            return Err(Error::param("b", "must be at least 1"));
        }
        if self.h.len() != self.b {
            return Err(Error::param("h", format!("has {} entries, expected b = {}", self.h.len(), self.b)));
        }
        self.h.validate()?;
        if self.community_count() == 0 {
            return Err(Error::param("c", "must be at least 1"));
        }
        if !matches!(self.degrees, DegreeSource::Explicit(_))
            && self.community_sizes.contains(&0) {
                return Err(Error::param("n_i", "every community needs at least one vertex"));
            }
        Ok(())
    }

    /// Copy with one of `a`, `q` or `r` replaced.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        let mut cfg = self.clone();
        match name {
            "a" => cfg.a = value,
            "q" => cfg.q = value,
            "r" => cfg.r = value,
            other => return Err(Error::param("sweep", format!("unknown parameter `{other}`, expected a, q or r"))),
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Same config with a different seed (replica streams).
    pub fn replica(&self, index: u64) -> Self {
        let mut cfg = self.clone();
        cfg.seed = derive_seed(self.seed, "replica", index);
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StubType {
    One,
    Two,
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TypedStub {
    pub stub: Stub,
    pub community: u32,
    pub block: u16,
}

/// What the pool repair had to change. Degrees are never touched; only stub
/// types are demoted to type 3.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RepairReport {
    /// Blocks where the ceiling counts exceeded the block size.
    pub clamped_blocks: usize,
    pub type1_demoted: usize,
    pub type2_demoted: usize,
}

impl RepairReport {
    pub fn is_clean(&self) -> bool {
        self.clamped_blocks == 0 && self.type1_demoted == 0 && self.type2_demoted == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StubLedger {
    pub b: usize,
    /// `type1[community][block]`
    pub type1: Vec<Vec<Vec<TypedStub>>>,
    /// `type2[community]`
    pub type2: Vec<Vec<TypedStub>>,
    pub type3: Vec<TypedStub>,
    pub repair: RepairReport,
}

impl StubLedger {
    pub fn count(&self, kind: StubType) -> usize {
        match kind {
            StubType::One => self.type1.iter().flatten().map(Vec::len).sum(),
            StubType::Two => self.type2.iter().map(Vec::len).sum(),
            StubType::Three => self.type3.len(),
        }
    }
}

fn ceil_count(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

/// Designates stub types block by block, then repairs pool sizes so every
/// pool can be perfectly matched: paired type-1 pools `(j, h(j))` are
/// trimmed to equal size (a self-paired pool to even size) and an odd type-2
/// pool loses one stub; surplus stubs become type 3.
pub fn assign_stub_types(partition: &BlockPartition, q: f64, r: f64, h: &Involution, seed: u64) -> Result<StubLedger> {
    let b = partition.b;
    if h.len() != b {
        return Err(Error::param("h", format!("has {} entries, expected b = {b}", h.len())));
    }
    let mut repair = RepairReport::default();
    let mut type1 = Vec::with_capacity(partition.communities.len());
    let mut type2 = Vec::with_capacity(partition.communities.len());
    let mut type3 = Vec::new();

    for cb in &partition.communities {
        let community = cb.community as u32;
        let total: usize = cb.blocks.iter().map(|blk| blk.len()).sum();
        let n1 = ceil_count(total as f64 * q * r / b as f64);
        let n2 = ceil_count(total as f64 * (1.0 - q) * r / b as f64);
        let mut rng = stage_rng(seed, "types", cb.community as u64);
        let mut c1 = Vec::with_capacity(b);
        let mut c2 = Vec::new();
        let mut c3 = Vec::new();
        for (j, blk) in cb.blocks.iter().enumerate() {
            let mut stubs: Vec<TypedStub> = blk
                .stubs
                .iter()
                .map(|&stub| TypedStub { stub, community, block: j as u16 })
                .collect();
            stubs.shuffle(&mut rng);
            let size = stubs.len();
            let k1 = n1.min(size);
            let k2 = n2.min(size - k1);
            if k1 < n1 || k2 < n2 {
                repair.clamped_blocks += 1;
            }
            let rest = stubs.split_off(k1 + k2);
            let second = stubs.split_off(k1);
            c1.push(stubs);
            c2.extend(second);
            c3.extend(rest);
        }
        for j in 0..b {
            let k = h.apply(j);
            if k < j {
                continue;
            }
            if k == j {
                if c1[j].len() % 2 == 1 {
                    c3.push(c1[j].pop().expect("odd pool is non-empty"));
                    repair.type1_demoted += 1;
                }
            } else {
                let (small, large) = if c1[j].len() <= c1[k].len() { (j, k) } else { (k, j) };
                let keep = c1[small].len();
                let surplus = c1[large].split_off(keep);
                repair.type1_demoted += surplus.len();
                c3.extend(surplus);
            }
        }
        if c2.len() % 2 == 1 {
            c2.shuffle(&mut rng);
            c3.push(c2.pop().expect("odd pool is non-empty"));
            repair.type2_demoted += 1;
        }
        type1.push(c1);
        type2.push(c2);
        type3.extend(c3);
    }
    Ok(StubLedger { b, type1, type2, type3, repair })
}

/// One matched stub pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WiredEdge {
    pub u: u32,
    pub v: u32,
    pub kind: StubType,
    pub blocks: (u16, u16),
    pub communities: (u32, u32),
}

fn pair_consecutive(pool: &[TypedStub], kind: StubType, out: &mut Vec<WiredEdge>) {
    for pair in pool.chunks_exact(2) {
        out.push(wired(pair[0], pair[1], kind));
    }
}

fn wired(s: TypedStub, t: TypedStub, kind: StubType) -> WiredEdge {
    WiredEdge {
        u: s.stub.vertex,
        v: t.stub.vertex,
        kind,
        blocks: (s.block, t.block),
        communities: (s.community, t.community),
    }
}

/// Uniform random perfect matching within every pool of the ledger.
pub fn wire_regular_edges(ledger: &StubLedger, h: &Involution, seed: u64) -> Result<Vec<WiredEdge>> {
    let mut out = Vec::new();
    for (ci, blocks) in ledger.type1.iter().enumerate() {
        let mut rng = stage_rng(seed, "wire-1", ci as u64);
        for j in 0..ledger.b {
            let k = h.apply(j);
            if k < j {
                continue;
            }
            let mut left = blocks[j].clone();
            left.shuffle(&mut rng);
            if k == j {
                if left.len() % 2 == 1 {
                    return Err(Error::Unmatchable(format!("type 1, community {ci}, block {}", j + 1)));
                }
                pair_consecutive(&left, StubType::One, &mut out);
            } else {
                let mut right = blocks[k].clone();
                if left.len() != right.len() {
                    return Err(Error::Unmatchable(format!("type 1, community {ci}, blocks {} and {}", j + 1, k + 1)));
                }
                right.shuffle(&mut rng);
                out.extend(left.iter().zip(&right).map(|(&s, &t)| wired(s, t, StubType::One)));
            }
        }
    }
    for (ci, pool) in ledger.type2.iter().enumerate() {
        if pool.len() % 2 == 1 {
            return Err(Error::Unmatchable(format!("type 2, community {ci}")));
        }
        let mut rng = stage_rng(seed, "wire-2", ci as u64);
        let mut pool = pool.clone();
        pool.shuffle(&mut rng);
        pair_consecutive(&pool, StubType::Two, &mut out);
    }
    if ledger.type3.len() % 2 == 1 {
        return Err(Error::Unmatchable("type 3".into()));
    }
    let mut rng = stage_rng(seed, "wire-3", 0);
    let mut pool = ledger.type3.clone();
    pool.shuffle(&mut rng);
    pair_consecutive(&pool, StubType::Three, &mut out);
    Ok(out)
}

fn pair_key(u: u32, v: u32) -> u64 {
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    (u64::from(lo) << 32) | u64::from(hi)
}

/// Non-adjacent pairs with at least one common neighbor, sorted, as
/// `(u, v)` with `u < v`. Built from wedges, so the cost is `O(Σ d_v²)`.
pub fn closure_candidates(regular: &Csr, exec: Exec) -> Vec<(u32, u32)> {
    let per_vertex = exec.map_range(regular.vertex_count(), |w| {
        let nb = regular.neighbors(w as u32);
        let mut keys = Vec::new();
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                if !regular.has_edge(x, y) {
                    keys.push(pair_key(x, y));
                }
            }
        }
        keys
    });
    let mut keys: Vec<u64> = per_vertex.into_iter().flatten().collect();
    exec.sort_unstable(&mut keys);
    keys.dedup();
    keys.into_iter().map(|k| ((k >> 32) as u32, k as u32)).collect()
}

fn coin(seed: u64, key: u64) -> f64 {
    (derive_seed(seed, "closure", key) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// One Bernoulli(a) trial per candidate pair; returns the accepted pairs.
pub fn apply_triadic_closure(regular: &Csr, a: f64, seed: u64, exec: Exec) -> Vec<(u32, u32)> {
    if a <= 0.0 {
        return Vec::new();
    }
    closure_candidates(regular, exec)
        .into_iter()
        .filter(|&(u, v)| a >= 1.0 || coin(seed, pair_key(u, v)) < a)
        .collect()
}

/// Output of one run of the construction.
#[derive(Debug, Clone)]
pub struct Generation {
    pub graph: CtcGraph,
    /// Degree sequence after parity repair.
    pub degrees: DegreeSequence,
    pub parity_bumped: Vec<usize>,
    pub partition: BlockPartition,
    pub wiring: Vec<WiredEdge>,
    pub repair: RepairReport,
}

/// Full pipeline: degrees, partition, stub types, wiring, closure.
pub fn generate(config: &ModelConfig, exec: Exec) -> Result<Generation> {
    config.validate()?;
    let seed = config.seed;
    let mut degrees = match &config.degrees {
        DegreeSource::Explicit(seq) => seq.clone(),
        DegreeSource::PowerLaw { gamma, kmin, kmax } => {
            let dist = DegreeDistribution::power_law(*gamma, *kmin, *kmax)?;
            sample_distribution_communities(&dist, &config.community_sizes, seed)?
        }
        DegreeSource::Distribution(dist) => sample_distribution_communities(dist, &config.community_sizes, seed)?,
    };
    let parity_bumped = degrees.repair_parity(&mut stage_rng(seed, "parity", 0));
    let partition = partition_into_blocks(&degrees, config.b, config.strict_blocks)?;
    let ledger = assign_stub_types(&partition, config.q, config.r, &config.h, seed)?;
    let wiring = wire_regular_edges(&ledger, &config.h, seed)?;

    let n = degrees.vertex_count();
    let regular = Csr::from_pairs(n, wiring.iter().map(|e| (e.u, e.v)));
    let closed = apply_triadic_closure(&regular, config.a, seed, exec);

    let mut edges: Vec<Edge> = wiring
        .iter()
        .map(|e| Edge { u: e.u, v: e.v, kind: EdgeKind::Regular })
        .collect();
    edges.extend(closed.into_iter().map(|(u, v)| Edge { u, v, kind: EdgeKind::Transitive }));
    let graph = CtcGraph::from_edges(degrees.community_labels(), edges);
    Ok(Generation { graph, degrees, parity_bumped, partition, wiring, repair: ledger.repair })
}
