// SPDX-License-Identifier: Apache-2.0

use ctc_core::community::{fast_unfolding_traced, label_propagation, run_benchmark, run_benchmark_with, Detector, Sweep};
use ctc_core::generator::{generate, Involution, ModelConfig};
use ctc_core::Exec;
use proptest::prelude::*;

fn communities_config() -> ModelConfig {
    let mut cfg = ModelConfig::power_law(200, 2.0, 4, 30).with_blocks(2, Involution::identity(2)).with_mixing(0.1, 0.8, 0.1).with_seed(5);
    cfg.community_sizes = vec![200; 4];
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn modularity_never_drops(seed in any::<u64>(), r in 0.0f64..=1.0) {
        let cfg = communities_config().with_mixing(0.1, r, 0.1).with_seed(seed);
        let g = generate(&cfg, Exec::Sequential).unwrap().graph;
        let run = fast_unfolding_traced(&g.simple, seed);
        prop_assert!(run.trace.windows(2).all(|w| w[1] >= w[0]), "{:?}", run.trace);
        prop_assert_eq!(run.labels.len(), g.vertex_count());
        let lp = label_propagation(&g.simple, seed);
        prop_assert_eq!(lp.len(), g.vertex_count());
    }
}

#[test]
fn harness_is_deterministic() {
    let sweep = Sweep::parse("r=0.2:0.8:0.3").unwrap();
    let a = run_benchmark(&communities_config(), &sweep, 3, Detector::FastUnfolding, Exec::Parallel).unwrap();
    let b = run_benchmark(&communities_config(), &sweep, 3, Detector::FastUnfolding, Exec::Sequential).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.cells.len(), 3);
    assert!(a.cells.iter().all(|c| c.nmi.len() == 3 && c.nmi.iter().all(|v| (0.0..=1.0).contains(v))));
    assert_eq!(a.per_rep_csv().lines().count(), 10);
    assert_eq!(a.summary_csv().lines().count(), 4);
}

#[test]
fn single_replica_flags_missing_stderr() {
    let sweep = Sweep::new("r", vec![0.9]).unwrap();
    let report = run_benchmark(&communities_config(), &sweep, 1, Detector::LabelPropagation, Exec::default()).unwrap();
    assert_eq!(report.cells[0].nmi.len(), 1);
    assert!(report.cells[0].stderr.is_none());
    assert!(report.summary_csv().trim_end().ends_with(",NA"));
}

#[test]
fn external_partitions_are_scored() {
    let sweep = Sweep::new("r", vec![1.0]).unwrap();
    let truth = run_benchmark_with(&communities_config(), &sweep, 2, "truth", Exec::default(), |case| Ok(case.generation.graph.community.clone())).unwrap();
    assert!(truth.cells[0].nmi.iter().all(|&v| (v - 1.0).abs() < 1e-12));
    assert!(run_benchmark(&communities_config(), &Sweep::new("b", vec![2.0]).unwrap(), 1, Detector::FastUnfolding, Exec::default()).is_err());
    assert!(run_benchmark(&communities_config(), &sweep, 0, Detector::FastUnfolding, Exec::default()).is_err());
}
