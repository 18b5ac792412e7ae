// SPDX-License-Identifier: Apache-2.0

mod common;

use common::brute_force_candidates;
use ctc_core::degree::DegreeSequence;
use ctc_core::generator::{closure_candidates, generate, Involution, ModelConfig, StubType};
use ctc_core::graph::Csr;
use ctc_core::io::write_edges;
use ctc_core::Exec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sample_config(seed: u64) -> ModelConfig {
    let mut cfg = ModelConfig::power_law(300, 2.3, 1, 25)
        .with_blocks(3, Involution::reversal(3))
        .with_mixing(0.6, 0.7, 0.3)
        .with_seed(seed);
    cfg.community_sizes = vec![300, 200, 250];
    cfg
}

#[test]
fn regular_degrees_are_preserved() {
    for seed in 0..10 {
        let g = generate(&sample_config(seed), Exec::default()).unwrap();
        assert_eq!(g.graph.regular_degree, g.degrees.flat());
        assert!(g.degrees.is_even());
    }
}

#[test]
fn type1_edges_join_paired_blocks_of_one_community() {
    for seed in 0..10 {
        let cfg = sample_config(seed);
        let g = generate(&cfg, Exec::default()).unwrap();
        for e in &g.wiring {
            match e.kind {
                StubType::One => {
                    assert_eq!(usize::from(e.blocks.1), cfg.h.apply(usize::from(e.blocks.0)));
                    assert_eq!(e.communities.0, e.communities.1);
                }
                StubType::Two => assert_eq!(e.communities.0, e.communities.1),
                StubType::Three => {}
            }
        }
    }
}

#[test]
fn without_mixing_only_repaired_stubs_leave_their_community() {
    let mut cfg = sample_config(4).with_mixing(0.3, 1.0, 0.0);
    cfg.h = Involution::identity(3);
    let g = generate(&cfg, Exec::default()).unwrap();
    let crossing: Vec<_> = g.wiring.iter().filter(|e| e.communities.0 != e.communities.1).collect();
    assert!(crossing.iter().all(|e| e.kind == StubType::Three));
    let global_stubs = 2 * g.wiring.iter().filter(|e| e.kind == StubType::Three).count();
    assert!(global_stubs <= g.repair.type1_demoted + g.repair.type2_demoted);
    assert_eq!(g.graph.transitive_edge_count(), 0);
}

#[test]
fn wedge_enumeration_matches_pair_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..50 {
        let n = rng.random_range(2..=200usize);
        let density = rng.random_range(0.005..0.08);
        let mut pairs = Vec::new();
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                if rng.random_bool(density) {
                    pairs.push((u, v));
                }
            }
        }
        let g = Csr::from_pairs(n, pairs);
        let fast = closure_candidates(&g, Exec::default());
        assert_eq!(fast, brute_force_candidates(&g));
        assert_eq!(closure_candidates(&g, Exec::Sequential), fast);
    }
}

#[test]
fn seeds_are_deterministic_across_strategies() {
    let cfg = sample_config(123);
    let a = write_edges(&generate(&cfg, Exec::Parallel).unwrap().graph);
    let b = write_edges(&generate(&cfg, Exec::Sequential).unwrap().graph);
    let c = write_edges(&generate(&cfg, Exec::default()).unwrap().graph);
    assert_eq!(a, b);
    assert_eq!(a, c);
    let other = write_edges(&generate(&cfg.clone().with_seed(124), Exec::default()).unwrap().graph);
    assert_ne!(a, other);
}

#[test]
fn odd_sequences_are_bumped_once_per_community() {
    let seq = DegreeSequence::new(vec![vec![1, 2, 2], vec![3, 3], vec![1, 1, 1]]).unwrap();
    let g = generate(&ModelConfig::explicit(seq), Exec::default()).unwrap();
    assert_eq!(g.parity_bumped.len(), 2);
    assert!(g.degrees.is_even());
}

#[test]
fn strict_mode_rejects_straddling_degrees() {
    let seq = DegreeSequence::single(vec![2, 2, 4, 4]).unwrap();
    let mut cfg = ModelConfig::explicit(seq).with_blocks(2, Involution::identity(2));
    cfg.strict_blocks = true;
    assert!(matches!(generate(&cfg, Exec::default()), Err(ctc_core::Error::Assumption1Violation { .. })));
}

#[test]
fn configuration_model_special_case() {
    // c = 1, r = 1, q = 0, a = 0: a plain configuration model.
    let cfg = ModelConfig::power_law(2000, 2.5, 1, 40).with_seed(5);
    let g = generate(&cfg, Exec::default()).unwrap();
    assert!(g.wiring.iter().all(|e| e.kind == StubType::Two));
    assert_eq!(g.graph.transitive_edge_count(), 0);
    assert!(g.repair.type1_demoted == 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_stub_is_wired_once(seed in any::<u64>(), q in 0.0f64..=1.0, r in 0.0f64..=1.0, b in 1usize..=4) {
        let mut cfg = ModelConfig::power_law(120, 2.2, 1, 15).with_mixing(q, r, 0.0).with_seed(seed);
        cfg.community_sizes = vec![120, 80];
        cfg.b = b;
        cfg.h = Involution::reversal(b);
        let g = generate(&cfg, Exec::Sequential).unwrap();
        let mut count = vec![0u32; g.degrees.vertex_count()];
        for e in &g.wiring {
            count[e.u as usize] += 1;
            count[e.v as usize] += 1;
        }
        prop_assert_eq!(count, g.degrees.flat());
    }

    #[test]
    fn transitive_edges_close_wedges(seed in any::<u64>(), a in 0.0f64..=1.0) {
        let cfg = ModelConfig::power_law(150, 2.4, 1, 12).with_mixing(0.0, 1.0, a).with_seed(seed);
        let g = generate(&cfg, Exec::Sequential).unwrap();
        for e in g.graph.edges.iter().filter(|e| e.kind == ctc_core::graph::EdgeKind::Transitive) {
            prop_assert!(!g.graph.regular.has_edge(e.u, e.v));
            let common = g.graph.regular.neighbors(e.u).iter().any(|&w| g.graph.regular.has_edge(w, e.v));
            prop_assert!(common);
        }
    }
}
