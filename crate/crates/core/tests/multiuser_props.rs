use fair_noma::multiuser::{
    full_alloc_a, min_alloc_b, noma_capacity_k, oma_capacity_k, verify_fairness, AllocationKind, ChannelSet,
};
use fair_noma::twouser::{allocation_bound, noma_capacity_strong, noma_capacity_weak};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance() -> impl Strategy<Value = (f64, Vec<f64>)> {
    (
        prop::sample::select(vec![10.0, 1e3, 1e5]),
        prop::collection::vec((-4.0f64..2.0).prop_map(|e| 10f64.powf(e)), 2..=10),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn allocation_vectors_are_fair((xi, gains) in instance()) {
        let set = ChannelSet::new(gains).unwrap();
        let a = full_alloc_a(xi, &set).unwrap();
        let b = min_alloc_b(xi, &set).unwrap();
        prop_assert_eq!(a.kind, AllocationKind::AFull);
        prop_assert!(a.coeffs.iter().all(|&c| c > 0.0 && c < 1.0));
        prop_assert!(a.total() <= 1.0 + 1e-12);
        prop_assert!(a.residual >= 0.0);
        for (bk, ak) in b.coeffs.iter().zip(&a.coeffs) {
            prop_assert!(bk < ak, "b {:?} a {:?}", b.coeffs, a.coeffs);
        }
        let ladder = a.ladder();
        prop_assert!(ladder.is_strictly_decreasing());
        prop_assert!(ladder.levels.iter().all(|l| (-1e-15..=1.0).contains(l)));
        // A_1 in (0, 1)
        prop_assert!(ladder.levels[1] > 0.0 && ladder.levels[1] < 1.0);

        let rb = verify_fairness(xi, &set, &b).unwrap();
        prop_assert!(rb.max_abs_slack() <= 1e-9);
        let ra = verify_fairness(xi, &set, &a).unwrap();
        prop_assert!(ra.is_fair(1e-9));
        let given = a.with_residual_to_strongest();
        let rg = verify_fairness(xi, &set, &given).unwrap();
        prop_assert!(rg.is_fair(1e-9));
        if a.residual > 1e-12 {
            prop_assert!(rg.slacks[set.len() - 1] > 0.0);
        }
    }

    #[test]
    fn a_vector_beats_b_vector_per_user((xi, gains) in instance()) {
        let set = ChannelSet::new(gains).unwrap();
        let a = full_alloc_a(xi, &set).unwrap().with_residual_to_strongest();
        let b = min_alloc_b(xi, &set).unwrap();
        let k = set.len();
        let cb = noma_capacity_k(xi, &set, &b.coeffs, k).unwrap();
        let ca = noma_capacity_k(xi, &set, &a.coeffs, k).unwrap();
        prop_assert!(ca > cb);
    }

    #[test]
    fn two_users_match_the_pair_model(xi in 0.1f64..1e5, g1 in 0.01f64..10.0, r in 1.0f64..100.0) {
        let g2 = g1 * r;
        let set = ChannelSet::new(vec![g2, g1]).unwrap();
        let a = full_alloc_a(xi, &set).unwrap();
        prop_assert!((1.0 - a.coeffs[0] - allocation_bound(xi, g1).unwrap()).abs() <= 1e-12);
        let p = 0.3;
        let coeffs = [1.0 - p, p];
        let w = noma_capacity_k(xi, &set, &coeffs, 1).unwrap();
        let s = noma_capacity_k(xi, &set, &coeffs, 2).unwrap();
        prop_assert!((w - noma_capacity_weak(xi, g1, p).unwrap()).abs() <= 1e-12 * w.max(1.0));
        prop_assert!((s - noma_capacity_strong(xi, g2, p).unwrap()).abs() <= 1e-12 * s.max(1.0));
        let oma = oma_capacity_k(xi, &set, 1).unwrap();
        prop_assert!((oma - fair_noma::twouser::oma_capacity(xi, g1).unwrap()).abs() <= 1e-15);
    }
}

#[test]
fn random_k5_instance() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let set = ChannelSet::sample(5, 1.0, &mut rng).unwrap();
        let b = min_alloc_b(1e3, &set).unwrap();
        assert!(b.total() < 1.0);
        let a = full_alloc_a(1e3, &set).unwrap();
        assert!(a.coeffs.iter().all(|&c| c > 0.0 && c < 1.0));
        assert!(a.total() <= 1.0 + 1e-12);
        let r = verify_fairness(1e3, &set, &a).unwrap();
        assert!(r.min_slack() >= -1e-9);
    }
}

#[test]
fn ratio_function_decreases() {
    // ((1+x)^{m/K} - 1)/x on a log grid
    for (m, k) in [(1, 5), (2, 5), (4, 5)] {
        let f = |x: f64| ((m as f64 / k as f64) * x.ln_1p()).exp_m1() / x;
        let v: Vec<f64> = (0..400).map(|i| f(10f64.powf(-6.0 + 0.03 * i as f64))).collect();
        assert!(v.windows(2).all(|w| w[1] < w[0]), "m={m} K={k}");
    }
}

#[test]
fn index_errors() {
    let set = ChannelSet::new(vec![1.0, 2.0]).unwrap();
    assert!(oma_capacity_k(1.0, &set, 3).is_err());
    assert!(noma_capacity_k(1.0, &set, &[0.5, 0.5], 0).is_err());
    assert!(noma_capacity_k(1.0, &set, &[0.5], 1).is_err());
}
