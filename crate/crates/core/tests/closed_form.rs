// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{close, enumerate, random_strict_pmf};
use ctc_core::closed_form::{
    conditional_mean_degree, covariance_assembled, covariance_total, expectation_table, theorem1_decomposition,
    transitive_expectations, variance_total, w_terms, AnalyticReport,
};
use ctc_core::degree::DegreeDistribution;
use ctc_core::generator::Involution;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn involutions(b: usize) -> Vec<Involution> {
    let mut out = vec![Involution::identity(b), Involution::reversal(b)];
    if b >= 3 {
        let mut images: Vec<usize> = (1..=b).collect();
        images.swap(0, 2);
        out.push(Involution::from_one_based(&images).unwrap());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn table_matches_enumeration(seed in any::<u64>(), b in 1usize..=4, q in 0.0f64..=1.0, a in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pmf = random_strict_pmf(&mut rng, b, 3);
        for h in involutions(b) {
            let model = pmf.model(h.clone());
            let t = expectation_table(&model, q);
            let e = enumerate(&pmf, &h, q, a);
            let pairs = [
                (t.ex, e.ex), (t.ex2, e.ex2), (t.exy, e.exy), (t.ex2y, e.ex2y), (t.ex2y, e.exy2), (t.ex2y, e.ex2g),
                (t.exg, e.exg), (t.eyg, e.eyg), (t.eyg, e.eg2), (t.exg2, e.exg2), (t.ex2g2, e.ex2g2),
                (t.exyg, e.exyg), (t.egg, e.egg), (t.eygg, e.eygg), (t.exygg, e.exygg),
            ];
            for (i, (x, y)) in pairs.iter().enumerate() {
                prop_assert!(close(*x, *y, 1e-12, 1e-12), "entry {i}: {x} vs {y}");
            }
            prop_assert!((e.total - 1.0).abs() < 1e-12);
            prop_assert!(e.conditional_defect < 1e-12);
            let tr = transitive_expectations(&t, a);
            let got = [tr.ex1, tr.ex1y, tr.ex1y1, tr.exx1, tr.ex1sq];
            for (i, (x, y)) in got.iter().zip(e.transitive).enumerate() {
                prop_assert!(close(*x, y, 1e-11, 1e-12), "transitive {i}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn three_covariance_paths_agree(seed in any::<u64>(), b in 1usize..=4, q in 0.0f64..=1.0, a in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pmf = random_strict_pmf(&mut rng, b, 3);
        for h in involutions(b) {
            let model = pmf.model(h);
            let cov = covariance_total(&model, a, q).unwrap();
            let t = expectation_table(&model, q);
            let assembled = covariance_assembled(&t, &transitive_expectations(&t, a));
            let d: f64 = theorem1_decomposition(&model, a, q).unwrap().iter().sum();
            let scale = t.exygg + t.ex2g2;
            prop_assert!(close(cov, assembled, 1e-9, 1e-12 * scale), "{cov} vs {assembled}");
            prop_assert!(close(cov, d, 1e-9, 1e-12 * scale), "{cov} vs {d}");
        }
    }

    #[test]
    fn decomposition_is_nonnegative_under_identity(seed in any::<u64>(), b in 2usize..=4, q in 0.0f64..=1.0, a in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pmf = random_strict_pmf(&mut rng, b, 4);
        let model = pmf.model(Involution::identity(b));
        let w = w_terms(&model);
        let slack = 1e-9;
        prop_assert!(w.iter().all(|&x| x >= -slack), "{w:?}");
        prop_assert!(w[1] >= w[0] - slack);
        prop_assert!(model.dispersion() >= w[0] - slack);
        prop_assert!(model.w4_minus(model.z()) >= -slack);
        prop_assert!(model.w5_minus(2.0 * model.z()) >= -slack);
        let d = theorem1_decomposition(&model, a, q).unwrap();
        prop_assert!(d.iter().all(|&x| x >= -slack), "{d:?}");
        let cov = covariance_total(&model, a, q).unwrap();
        let regular = covariance_total(&model, 0.0, q).unwrap();
        prop_assert!(cov >= regular - slack * cov.abs().max(1.0));
        prop_assert!(regular >= -slack);
    }

    #[test]
    fn ascending_block_sums_for_small_shift(seed in any::<u64>(), b in 2usize..=4, frac in 0.0f64..=1.0) {
        // u_i (u_i − c) is non-decreasing in i for c up to 2·min u_i.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = random_strict_pmf(&mut rng, b, 4).model(Involution::identity(b));
        let umin = model.u.iter().cloned().fold(f64::INFINITY, f64::min);
        let c = frac * 2.0 * umin;
        let f: Vec<f64> = model.u.iter().map(|u| u * (u - c)).collect();
        prop_assert!(f.windows(2).all(|w| w[1] >= w[0] - 1e-9 * w[0].abs().max(1.0)));
        prop_assert!(2.0 * model.z() <= 2.0 * umin + 1e-12);
    }

    #[test]
    fn rearrangement_inequality(mut x in prop::collection::vec(-50.0f64..50.0, 1..12), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut y: Vec<f64> = x.iter().map(|_| rand::Rng::random_range(&mut rng, -50.0..50.0)).collect();
        x.sort_by(f64::total_cmp);
        y.sort_by(f64::total_cmp);
        let b = x.len() as f64;
        let lhs = b * x.iter().zip(&y).map(|(a, c)| a * c).sum::<f64>();
        let rhs = x.iter().sum::<f64>() * y.iter().sum::<f64>();
        prop_assert!(lhs >= rhs - 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn marginal_of_g_is_mean_endpoint_degree(seed in any::<u64>(), b in 1usize..=4, q in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pmf = random_strict_pmf(&mut rng, b, 3);
        for h in involutions(b) {
            let model = pmf.model(h);
            let mean: f64 = (0..b).map(|i| conditional_mean_degree(&model, i, q)).sum::<f64>() / b as f64;
            prop_assert!(close(mean, model.mu[1] / model.mu[0], 1e-12, 0.0));
        }
    }

    #[test]
    fn report_invariants(seed in any::<u64>(), b in 1usize..=4, q in 0.0f64..=1.0, a in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pmf = random_strict_pmf(&mut rng, b, 3);
        for h in involutions(b) {
            let r = AnalyticReport::evaluate(&pmf.model(h), a, q).unwrap();
            prop_assert!(r.variance >= 0.0);
            if let Some(rho) = r.correlation {
                prop_assert!(rho.abs() <= 1.0 + 1e-9, "{rho}");
            }
        }
    }
}

#[test]
fn both_index_forms_coincide() {
    // Σ u_i² t_{h(i)} and Σ t_i u_{h(i)}² agree for any involution.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for b in 1..=4 {
        let pmf = random_strict_pmf(&mut rng, b, 3);
        for h in involutions(b) {
            let m = pmf.model(h.clone());
            let left: f64 = (0..b).map(|i| m.u[i].powi(2) * m.t[h.apply(i)]).sum();
            let right: f64 = (0..b).map(|i| m.t[i] * m.u[h.apply(i)].powi(2)).sum();
            assert!(close(left, right, 1e-12, 0.0));
        }
    }
}

#[test]
fn variance_at_zero_closure_is_endpoint_variance() {
    let dist = DegreeDistribution::new([(2, 2.0 / 3.0), (4, 1.0 / 3.0)]).unwrap();
    let model = ctc_core::closed_form::BlockModel::from_distribution(&dist, 2, Involution::identity(2), true).unwrap();
    assert!((variance_total(&model, 0.0, 0.7).unwrap() - 1.0).abs() < 1e-12);
    let strict = ctc_core::closed_form::BlockModel::from_distribution(
        &DegreeDistribution::new([(2, 0.5), (4, 0.5)]).unwrap(),
        2,
        Involution::identity(2),
        true,
    );
    assert!(matches!(strict, Err(ctc_core::Error::Assumption1Violation { degree: 4, .. })));
}
