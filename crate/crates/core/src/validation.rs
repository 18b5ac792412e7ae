// SPDX-License-Identifier: Apache-2.0

//! Monte Carlo comparison of the closed forms with generated graphs.

use serde::Serialize;

use crate::closed_form::{local_clustering_coefficient, AnalyticReport, BlockModel};
use crate::degree::DegreeDistribution;
use crate::empirical::{
    edge_covariance, empirical_local_clustering, endpoint_transitive_mean, ClusteringSummary, DegreeKind, ReplicaStat,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::generator::{closure_candidates, generate, ModelConfig};
use crate::graph::CtcGraph;

/// One analytic quantity against its replica mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub quantity: &'static str,
    pub analytic: f64,
    pub empirical: ReplicaStat,
    /// `(empirical − analytic) / SE`; `None` when the SE vanishes.
    pub z: Option<f64>,
}

impl Comparison {
    fn new(quantity: &'static str, analytic: f64, values: &[f64]) -> Self {
        let empirical = ReplicaStat::from_values(values);
        let diff = empirical.mean - analytic;
        let z = (empirical.stderr > 0.0).then(|| diff / empirical.stderr);
        Self { quantity, analytic, empirical, z }
    }

    pub fn abs_error(&self) -> f64 {
        (self.empirical.mean - self.analytic).abs()
    }

    /// Within `max(k·SE, rel·|analytic| + abs)`.
    pub fn within(&self, k: f64, rel: f64, abs: f64) -> bool {
        self.abs_error() <= (k * self.empirical.stderr).max(rel * self.analytic.abs() + abs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellComparison {
    pub k: u32,
    pub kprime: u32,
    pub count: usize,
    pub empirical: f64,
    pub predicted: f64,
}

/// Per-replica measurements used by [`verify`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicaMeasure {
    pub covariance: f64,
    pub covariance_regular: f64,
    pub variance: f64,
    pub correlation: Option<f64>,
    pub transitive_mean: f64,
    pub transitive_edges: usize,
    /// Non-adjacent wedges, the count the per-wedge closure analysis uses.
    pub open_wedges: usize,
    /// Distinct non-adjacent pairs with a common neighbor, the count the
    /// generator trials.
    pub candidate_pairs: usize,
    pub clustering: ClusteringSummary,
}

fn open_wedges(regular: &crate::graph::Csr) -> usize {
    let mut count = 0;
    for w in 0..regular.vertex_count() as u32 {
        let nb = regular.neighbors(w);
        for (i, &x) in nb.iter().enumerate() {
            count += nb[i + 1..].iter().filter(|&&y| !regular.has_edge(x, y)).count();
        }
    }
    count
}

pub fn measure_replica(graph: &CtcGraph, exec: Exec) -> Result<ReplicaMeasure> {
    let total = edge_covariance(graph, DegreeKind::Total)?;
    let regular = edge_covariance(graph, DegreeKind::Regular)?;
    Ok(ReplicaMeasure {
        covariance: total.cov,
        covariance_regular: regular.cov,
        variance: total.var,
        correlation: total.corr,
        transitive_mean: endpoint_transitive_mean(graph)?,
        transitive_edges: graph.transitive_edge_count(),
        open_wedges: open_wedges(&graph.regular),
        candidate_pairs: closure_candidates(&graph.regular, exec).len(),
        clustering: empirical_local_clustering(graph, exec),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub replicas: usize,
    pub analytic: AnalyticReport,
    pub comparisons: Vec<Comparison>,
    /// Populated `(k, k')` cells, pooled over replicas.
    pub clustering: Vec<CellComparison>,
    pub transitive_edges: ReplicaStat,
    /// Mean open wedges per candidate pair: how much the per-wedge analysis
    /// overcounts closure trials.
    pub wedge_overcount: ReplicaStat,
    pub measures: Vec<ReplicaMeasure>,
}

impl VerifyReport {
    pub fn comparison(&self, quantity: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.quantity == quantity)
    }

    /// Cells with at least `min_count` pooled vertices.
    pub fn populated_cells(&self, min_count: usize) -> impl Iterator<Item = &CellComparison> {
        self.clustering.iter().filter(move |c| c.count >= min_count)
    }
}

/// Generates `reps` replicas of a single-community config and compares
/// their endpoint statistics with the closed forms evaluated on `pmf`.
pub fn verify(config: &ModelConfig, pmf: &DegreeDistribution, reps: usize, exec: Exec) -> Result<VerifyReport> {
    if reps == 0 {
        return Err(Error::param("reps", "must be at least 1"));
    }
    if config.community_count() != 1 {
        return Err(Error::param("c", "closed forms cover a single community"));
    }
    config.validate()?;
    let model = BlockModel::from_distribution(pmf, config.b, config.h.clone(), config.strict_blocks)?;
    let analytic = AnalyticReport::evaluate(&model, config.a, config.q * config.r)?;

    let measures = exec.map_range(reps, |i| -> Result<ReplicaMeasure> {
        let generation = generate(&config.replica(i as u64), Exec::Sequential)?;
        measure_replica(&generation.graph, Exec::Sequential)
    });
    let measures: Vec<ReplicaMeasure> = measures.into_iter().collect::<Result<_>>()?;
    let col = |f: &dyn Fn(&ReplicaMeasure) -> f64| measures.iter().map(f).collect::<Vec<f64>>();

    let mut comparisons = vec![
        Comparison::new("covariance", analytic.covariance, &col(&|m| m.covariance)),
        Comparison::new("covariance_regular", analytic.covariance_regular, &col(&|m| m.covariance_regular)),
        Comparison::new("variance", analytic.variance, &col(&|m| m.variance)),
        Comparison::new("transitive_mean", analytic.transitive.ex1, &col(&|m| m.transitive_mean)),
    ];
    if let Some(rho) = analytic.correlation {
        let values: Vec<f64> = measures.iter().filter_map(|m| m.correlation).collect();
        comparisons.push(Comparison::new("correlation", rho, &values));
    }

    let pooled = ClusteringSummary::merge(&measures.iter().map(|m| m.clustering.clone()).collect::<Vec<_>>());
    let clustering = pooled
        .cells
        .iter()
        .map(|c| CellComparison {
            k: c.k,
            kprime: c.kprime,
            count: c.count,
            empirical: c.mean(),
            predicted: local_clustering_coefficient(c.k, c.kprime, config.a),
        })
        .collect();
    let overcount: Vec<f64> = measures
        .iter()
        .filter(|m| m.candidate_pairs > 0)
        .map(|m| m.open_wedges as f64 / m.candidate_pairs as f64)
        .collect();
    Ok(VerifyReport {
        replicas: reps,
        analytic,
        comparisons,
        clustering,
        transitive_edges: ReplicaStat::from_values(&col(&|m| m.transitive_edges as f64)),
        wedge_overcount: ReplicaStat::from_values(&overcount),
        measures,
    })
}
