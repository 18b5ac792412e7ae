// SPDX-License-Identifier: Apache-2.0

//! Measurements on realized graphs: endpoint degree covariance, local
//! clustering, mixing, power-law fit and NMI.
//!
//! All measurements use the simple projections of [`CtcGraph`]. The
//! "total degree" of a vertex is its degree in the simple graph of all
//! edges; its regular degree is its degree in the simple regular graph.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::closed_form::local_clustering_coefficient;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{Csr, CtcGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DegreeKind {
    /// Regular plus transitive degree.
    Total,
    /// Simple regular degree only.
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeCovariance {
    /// Mean endpoint degree.
    pub mean: f64,
    /// Variance of the endpoint degree.
    pub var: f64,
    pub cov: f64,
    /// `None` when an endpoint degree has zero variance.
    pub corr: Option<f64>,
    /// Standard error of `cov` treating orientations as independent.
    pub stderr: f64,
    /// Number of edge orientations.
    pub samples: usize,
}

impl EdgeCovariance {
    pub fn correlation(&self) -> Result<f64> {
        self.corr.ok_or(Error::ZeroVariance("endpoint degrees are constant"))
    }
}

/// Population covariance of endpoint degrees over both orientations of
/// every (simple) regular edge.
pub fn edge_covariance(graph: &CtcGraph, kind: DegreeKind) -> Result<EdgeCovariance> {
    let degree = |v: u32| -> f64 {
        match kind {
            DegreeKind::Total => graph.simple.degree(v) as f64,
            DegreeKind::Regular => graph.regular.degree(v) as f64,
        }
    };
    let pairs: Vec<(f64, f64)> = graph.regular.edges().map(|(u, v)| (degree(u), degree(v))).collect();
    if pairs.is_empty() {
        return Err(Error::NoRegularEdges);
    }
    // Both orientations: x and y share the same marginal.
    let n = 2.0 * pairs.len() as f64;
    let mean = pairs.iter().map(|(x, y)| x + y).sum::<f64>() / n;
    let var = pairs.iter().map(|(x, y)| (x - mean).powi(2) + (y - mean).powi(2)).sum::<f64>() / n;
    let products: Vec<f64> = pairs.iter().map(|(x, y)| (x - mean) * (y - mean)).collect();
    let cov = products.iter().sum::<f64>() / products.len() as f64;
    let spread = products.iter().map(|p| (p - cov).powi(2)).sum::<f64>() / products.len() as f64;
    let corr = (var > 1e-12 * mean.powi(2).max(1.0)).then(|| cov / var);
    Ok(EdgeCovariance { mean, var, cov, corr, stderr: (spread / n).sqrt(), samples: n as usize })
}

/// Total-degree covariance; errors when the graph has no regular edges.
pub fn empirical_edge_covariance(graph: &CtcGraph) -> Result<EdgeCovariance> {
    edge_covariance(graph, DegreeKind::Total)
}

/// Mean transitive degree of a regular-edge endpoint.
pub fn endpoint_transitive_mean(graph: &CtcGraph) -> Result<f64> {
    let (mut sum, mut count) = (0.0, 0usize);
    for (u, v) in graph.regular.edges() {
        sum += f64::from(graph.transitive_degree[u as usize]) + f64::from(graph.transitive_degree[v as usize]);
        count += 2;
    }
    if count == 0 {
        return Err(Error::NoRegularEdges);
    }
    Ok(sum / count as f64)
}

fn sorted_intersection(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Triangles through each vertex.
pub fn triangle_counts(g: &Csr, exec: Exec) -> Vec<usize> {
    exec.map_range(g.vertex_count(), |v| {
        let nb = g.neighbors(v as u32);
        let twice: usize = nb.iter().map(|&w| sorted_intersection(nb, g.neighbors(w))).sum();
        twice / 2
    })
}

/// Local clustering of every vertex; `None` below total degree 2.
pub fn local_clustering(graph: &CtcGraph, exec: Exec) -> Vec<Option<f64>> {
    let triangles = triangle_counts(&graph.simple, exec);
    (0..graph.vertex_count())
        .map(|v| {
            let d = graph.simple.degree(v as u32);
            (d >= 2).then(|| triangles[v] as f64 / (d * (d - 1) / 2) as f64)
        })
        .collect()
}

/// Vertices sharing regular degree `k` and transitive degree `kprime`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusteringCell {
    pub k: u32,
    pub kprime: u32,
    pub count: usize,
    pub sum: f64,
}

impl ClusteringCell {
    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusteringSummary {
    /// Mean over vertices of total degree at least 2.
    pub mean: f64,
    pub counted: usize,
    pub cells: Vec<ClusteringCell>,
}

impl ClusteringSummary {
    /// Pools cells from several replicas.
    pub fn merge(parts: &[ClusteringSummary]) -> ClusteringSummary {
        let mut cells: BTreeMap<(u32, u32), ClusteringCell> = BTreeMap::new();
        let (mut total, mut counted) = (0.0, 0);
        for p in parts {
            total += p.mean * p.counted as f64;
            counted += p.counted;
            for c in &p.cells {
                let e = cells.entry((c.k, c.kprime)).or_insert(ClusteringCell { k: c.k, kprime: c.kprime, count: 0, sum: 0.0 });
                e.count += c.count;
                e.sum += c.sum;
            }
        }
        ClusteringSummary {
            mean: if counted > 0 { total / counted as f64 } else { 0.0 },
            counted,
            cells: cells.into_values().collect(),
        }
    }

    /// CSV `k,kprime,count,mean,predicted` with the predicted column from
    /// the closed form at closure probability `a`.
    pub fn to_csv(&self, a: f64) -> String {
        let mut out = String::from("k,kprime,count,mean,predicted\n");
        for c in &self.cells {
            let pred = local_clustering_coefficient(c.k, c.kprime, a);
            out.push_str(&format!("{},{},{},{},{}\n", c.k, c.kprime, c.count, c.mean(), pred));
        }
        out
    }
}

/// Local clustering grouped by (simple regular degree, transitive degree).
pub fn empirical_local_clustering(graph: &CtcGraph, exec: Exec) -> ClusteringSummary {
    let values = local_clustering(graph, exec);
    let mut cells: BTreeMap<(u32, u32), ClusteringCell> = BTreeMap::new();
    let (mut total, mut counted) = (0.0, 0);
    for (v, value) in values.iter().enumerate() {
        let Some(c) = *value else { continue };
        total += c;
        counted += 1;
        let key = (graph.regular.degree(v as u32) as u32, graph.transitive_degree[v]);
        let e = cells.entry(key).or_insert(ClusteringCell { k: key.0, kprime: key.1, count: 0, sum: 0.0 });
        e.count += 1;
        e.sum += c;
    }
    ClusteringSummary {
        mean: if counted > 0 { total / counted as f64 } else { 0.0 },
        counted,
        cells: cells.into_values().collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mixing {
    /// Fraction of simple edges whose endpoints lie in different communities.
    pub global: f64,
    /// Per community: external edges over edges touching the community.
    pub per_community: Vec<f64>,
}

pub fn mixing_parameter(graph: &Csr, labels: &[u32]) -> Result<Mixing> {
    if labels.len() != graph.vertex_count() {
        return Err(Error::PartitionMismatch { left: graph.vertex_count(), right: labels.len() });
    }
    let c = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut touching = vec![0usize; c];
    let mut external = vec![0usize; c];
    let (mut edges, mut inter) = (0usize, 0usize);
    for (u, v) in graph.edges() {
        let (lu, lv) = (labels[u as usize] as usize, labels[v as usize] as usize);
        edges += 1;
        if lu == lv {
            touching[lu] += 1;
        } else {
            inter += 1;
            for l in [lu, lv] {
                touching[l] += 1;
                external[l] += 1;
            }
        }
    }
    let ratio = |x: usize, y: usize| if y == 0 { 0.0 } else { x as f64 / y as f64 };
    Ok(Mixing {
        global: ratio(inter, edges),
        per_community: external.iter().zip(&touching).map(|(&x, &y)| ratio(x, y)).collect(),
    })
}

/// Regular-degree (stub count) histogram.
pub fn degree_histogram(degrees: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &d in degrees {
        *h.entry(d).or_insert(0) += 1;
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub gamma: f64,
    pub kmin: u32,
    pub kmax: u32,
    pub samples: usize,
    pub log_likelihood: f64,
    /// Fewer than 100 samples.
    pub low_confidence: bool,
}

/// Discrete maximum-likelihood exponent for `p(k) ∝ k^-γ` on
/// `[kmin, kmax]`, with `kmin` the smallest positive degree and `kmax` the
/// largest. Zero degrees are ignored.
pub fn fit_power_law(degrees: &[u32]) -> Result<PowerLawFit> {
    let sample: Vec<u32> = degrees.iter().copied().filter(|&d| d > 0).collect();
    let (Some(&kmin), Some(&kmax)) = (sample.iter().min(), sample.iter().max()) else {
        return Err(Error::DegenerateFit("no positive degrees"));
    };
    if kmin == kmax {
        return Err(Error::DegenerateFit("all degrees are equal"));
    }
    let n = sample.len() as f64;
    let sum_log: f64 = sample.iter().map(|&k| f64::from(k).ln()).sum();
    let logs: Vec<f64> = (kmin..=kmax).map(|k| f64::from(k).ln()).collect();
    let loglik = |g: f64| {
        let z: f64 = logs.iter().map(|l| (-g * l).exp()).sum();
        -g * sum_log - n * z.ln()
    };

    let (lo, hi, step) = (0.0, 8.0, 0.05);
    let mut best = lo;
    let mut best_ll = f64::NEG_INFINITY;
    let mut g = lo;
    while g <= hi + 1e-12 {
        let ll = loglik(g);
        if ll > best_ll {
            best_ll = ll;
            best = g;
        }
        g += step;
    }
    // The log-likelihood is concave in γ, so golden-section refinement of
    // the bracketing grid cell finds the maximum.
    let (mut x0, mut x1) = ((best - step).max(lo), (best + step).min(hi));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let c = x1 - ratio * (x1 - x0);
        let d = x0 + ratio * (x1 - x0);
        if loglik(c) > loglik(d) {
            x1 = d;
        } else {
            x0 = c;
        }
        if x1 - x0 < 1e-10 {
            break;
        }
    }
    let gamma = 0.5 * (x0 + x1);
    Ok(PowerLawFit { gamma, kmin, kmax, samples: sample.len(), log_likelihood: loglik(gamma), low_confidence: sample.len() < 100 })
}

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information `2I / (H₁ + H₂)`. Two trivial partitions
/// score 1; a trivial partition against a non-trivial one scores 0.
pub fn nmi(p1: &[u32], p2: &[u32]) -> Result<f64> {
    if p1.len() != p2.len() {
        return Err(Error::PartitionMismatch { left: p1.len(), right: p2.len() });
    }
    if p1.is_empty() {
        return Err(Error::PartitionMismatch { left: 0, right: 0 });
    }
    let n = p1.len() as f64;
    let mut joint: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    let mut left: BTreeMap<u32, usize> = BTreeMap::new();
    let mut right: BTreeMap<u32, usize> = BTreeMap::new();
    for (&a, &b) in p1.iter().zip(p2) {
        *joint.entry((a, b)).or_insert(0) += 1;
        *left.entry(a).or_insert(0) += 1;
        *right.entry(b).or_insert(0) += 1;
    }
    let h1 = entropy(left.values().copied(), n);
    let h2 = entropy(right.values().copied(), n);
    match (h1 == 0.0, h2 == 0.0) {
        (true, true) => return Ok(1.0),
        (true, false) | (false, true) => return Ok(0.0),
        _ => {}
    }
    let info: f64 = joint
        .iter()
        .map(|(&(a, b), &c)| {
            let pxy = c as f64 / n;
            let px = left[&a] as f64 / n;
            let py = right[&b] as f64 / n;
            pxy * (pxy / (px * py)).ln()
        })
        .sum();
    Ok((2.0 * info / (h1 + h2)).clamp(0.0, 1.0))
}

/// Mean and standard error of replica values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplicaStat {
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

impl ReplicaStat {
    pub fn from_values(values: &[f64]) -> Self {
        let count = values.len();
        if count == 0 {
            return Self { mean: f64::NAN, stderr: f64::NAN, count };
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let stderr = if count > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
            (var / count as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, stderr, count }
    }
}

/// Measurements of one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalReport {
    pub vertices: usize,
    pub regular_edges: usize,
    pub transitive_edges: usize,
    pub self_loops: usize,
    pub multi_edges: usize,
    pub covariance: Option<EdgeCovariance>,
    pub covariance_regular: Option<EdgeCovariance>,
    pub clustering: ClusteringSummary,
    pub histogram: BTreeMap<u32, usize>,
    pub power_law: Option<PowerLawFit>,
    pub mixing: Mixing,
}

impl EmpiricalReport {
    pub fn measure(graph: &CtcGraph, exec: Exec) -> Self {
        Self {
            vertices: graph.vertex_count(),
            regular_edges: graph.edges.len() - graph.transitive_edge_count(),
            transitive_edges: graph.transitive_edge_count(),
            self_loops: graph.self_loops,
            multi_edges: graph.multi_edges,
            covariance: edge_covariance(graph, DegreeKind::Total).ok(),
            covariance_regular: edge_covariance(graph, DegreeKind::Regular).ok(),
            clustering: empirical_local_clustering(graph, exec),
            histogram: degree_histogram(&graph.regular_degree),
            power_law: fit_power_law(&graph.regular_degree).ok(),
            mixing: mixing_parameter(&graph.simple, &graph.community).expect("labels cover the graph"),
        }
    }
}

/// Replica aggregate of [`EmpiricalReport`]s.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicaReport {
    pub replicas: usize,
    pub covariance: ReplicaStat,
    pub correlation: ReplicaStat,
    pub covariance_regular: ReplicaStat,
    pub mixing: ReplicaStat,
    pub clustering: ClusteringSummary,
}

impl ReplicaReport {
    pub fn aggregate(reports: &[EmpiricalReport]) -> Self {
        let pick = |f: &dyn Fn(&EmpiricalReport) -> Option<f64>| -> ReplicaStat {
            ReplicaStat::from_values(&reports.iter().filter_map(f).collect::<Vec<_>>())
        };
        let clustering: Vec<ClusteringSummary> = reports.iter().map(|r| r.clustering.clone()).collect();
        Self {
            replicas: reports.len(),
            covariance: pick(&|r| r.covariance.map(|c| c.cov)),
            correlation: pick(&|r| r.covariance.and_then(|c| c.corr)),
            covariance_regular: pick(&|r| r.covariance_regular.map(|c| c.cov)),
            mixing: pick(&|r| Some(r.mixing.global)),
            clustering: ClusteringSummary::merge(&clustering),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, EdgeKind};
    use approx::assert_relative_eq;

    fn regular(n: usize, pairs: &[(u32, u32)]) -> CtcGraph {
        let edges = pairs.iter().map(|&(u, v)| Edge { u, v, kind: EdgeKind::Regular }).collect();
        CtcGraph::from_edges(vec![0; n], edges)
    }

    #[test]
    fn path_covariance() {
        let g = regular(3, &[(0, 1), (1, 2)]);
        let c = empirical_edge_covariance(&g).unwrap();
        assert_relative_eq!(c.cov, -0.25, epsilon = 1e-15);
        assert_relative_eq!(c.correlation().unwrap(), -1.0, epsilon = 1e-12);
        assert_eq!(c.samples, 4);
    }

    #[test]
    fn regular_graph_has_undefined_correlation() {
        let g = regular(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let c = empirical_edge_covariance(&g).unwrap();
        assert_eq!(c.cov, 0.0);
        assert!(c.correlation().is_err());
        assert!(matches!(empirical_edge_covariance(&regular(2, &[])), Err(Error::NoRegularEdges)));
    }

    #[test]
    fn clustering_on_small_graphs() {
        let k3 = regular(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(local_clustering(&k3, Exec::Sequential), vec![Some(1.0); 3]);
        let p3 = regular(3, &[(0, 1), (1, 2)]);
        assert_eq!(local_clustering(&p3, Exec::Sequential), vec![None, Some(0.0), None]);
        let s = empirical_local_clustering(&k3, Exec::Sequential);
        assert_eq!(s.cells.len(), 1);
        assert_eq!((s.cells[0].k, s.cells[0].kprime, s.cells[0].count), (2, 0, 3));
        assert!(s.to_csv(0.5).contains("2,0,3,1,0.5"));
    }

    #[test]
    fn mixing_counts() {
        let g = Csr::from_pairs(4, [(0, 1), (2, 3), (1, 2)]);
        let m = mixing_parameter(&g, &[0, 0, 1, 1]).unwrap();
        assert_relative_eq!(m.global, 1.0 / 3.0);
        assert_relative_eq!(m.per_community[0], 0.5);
        let all = mixing_parameter(&Csr::from_pairs(2, [(0, 1)]), &[0, 1]).unwrap();
        assert_eq!(all.global, 1.0);
        let mut pairs: Vec<(u32, u32)> = (0..7).map(|i| (2 * i, 2 * i + 1)).collect();
        pairs.extend([(0, 15), (2, 17), (4, 19)]);
        let labels: Vec<u32> = (0..20).map(|v| if v < 14 { 0 } else { 1 }).collect();
        let m = mixing_parameter(&Csr::from_pairs(20, pairs), &labels).unwrap();
        assert_relative_eq!(m.global, 0.3);
        assert!(mixing_parameter(&g, &[0]).is_err());
    }

    #[test]
    fn power_law_fit() {
        let seq = crate::degree::sample_power_law_sequence(10_000, 2.0, 1, 1000, 5).unwrap();
        let fit = fit_power_law(&seq.flat()).unwrap();
        assert!((fit.gamma - 2.0).abs() < 0.1, "{fit:?}");
        assert!(!fit.low_confidence);
        assert!(fit_power_law(&[5; 200]).is_err());
        let two = fit_power_law(&[1, 2]).unwrap();
        assert!(two.gamma.is_finite() && two.low_confidence);
    }

    #[test]
    fn nmi_conventions() {
        assert_relative_eq!(nmi(&[0, 0, 1, 1, 2], &[0, 0, 1, 1, 2]).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(nmi(&[0, 0, 0, 0], &[0, 1, 0, 1]).unwrap(), 0.0);
        assert_eq!(nmi(&[3, 3], &[7, 7]).unwrap(), 1.0);
        assert_relative_eq!(nmi(&[0, 0, 1, 1], &[5, 5, 9, 9]).unwrap(), 1.0, epsilon = 1e-12);
        assert!(nmi(&[0, 1], &[0]).is_err());
        let a = [0, 1, 1, 2, 0, 2, 1];
        let b = [1, 1, 0, 0, 2, 2, 1];
        assert_relative_eq!(nmi(&a, &b).unwrap(), nmi(&b, &a).unwrap(), epsilon = 1e-15);
    }

    #[test]
    fn replica_stats() {
        let s = ReplicaStat::from_values(&[1.0, 2.0, 3.0]);
        assert_relative_eq!(s.mean, 2.0);
        assert_relative_eq!(s.stderr, (1.0f64 / 3.0).sqrt());
    }
}
