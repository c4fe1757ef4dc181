mod common;

use common::{db, simpson, within_binomial};
use fair_noma::mcsim::{run_outage, Scenario, SimConfig};
use fair_noma::outage::{
    noma_outage_empirical, noma_outage_strong_asup, noma_outage_weak_ainf, oma_outage_strong, oma_outage_weak,
    outage_point,
};
use fair_noma::twouser::{Policy, SystemParams};

fn params(xi: f64, r0: f64) -> SystemParams {
    SystemParams::new(xi, 1.0).unwrap().with_r0(r0).unwrap()
}

/// Probability mass of the stronger user's outage region at `a_sup`,
/// integrated directly over the ordered-pair density: for `x1` up to
/// `(t²-1)/xi`, `x2` runs from `x1` to `(t-1)(√(1+xi·x1)+1)/xi`.
fn strong_region_oracle(xi: f64, r0: f64) -> f64 {
    let t = 2f64.powf(r0);
    let k2 = (t * t - 1.0) / xi;
    let outer = |x1: f64| {
        let upper = (t - 1.0) * ((1.0 + xi * x1).sqrt() + 1.0) / xi;
        let inner = |x2: f64| 2.0 * (-(x1 + x2)).exp();
        simpson(&inner, x1, upper.max(x1), 1e-15)
    };
    simpson(&outer, 0.0, k2, 1e-13)
}

/// Weaker user's outage at `a_inf` from the rate condition itself:
/// `log2((1+y1)/(1+a·y1)) < r0` with `a = a_inf(x2)`.
fn weak_region_oracle(xi: f64, r0: f64) -> f64 {
    let t = 2f64.powf(r0);
    let outer = |x2: f64| {
        let a = ((1.0 + xi * x2).sqrt() - 1.0) / (xi * x2);
        let slope = 1.0 - t * a;
        let cap = if slope <= 0.0 { x2 } else { ((t - 1.0) / (xi * slope)).min(x2) };
        let inner = |x1: f64| 2.0 * (-(x1 + x2)).exp();
        simpson(&inner, 0.0, cap, 1e-16)
    };
    simpson(&outer, 1e-300, 60.0, 1e-13)
}

#[test]
fn strong_closed_form_matches_region_integration() {
    let got = noma_outage_strong_asup(&params(1e3, 2.0));
    let want = strong_region_oracle(1e3, 2.0);
    assert!((got - want).abs() <= 1e-6, "{got} vs {want}");
    for &(xi, r0) in &[(1.0, 0.5), (30.0, 2.0), (1e5, 3.0), (1e6, 2.0)] {
        let got = noma_outage_strong_asup(&params(xi, r0));
        let want = strong_region_oracle(xi, r0);
        assert!((got - want).abs() <= 1e-8 * want.max(1e-3), "xi={xi} r0={r0}: {got} vs {want}");
    }
}

#[test]
fn weak_quadrature_form_matches_region_integration() {
    for &(xi, r0) in &[(1.0, 0.5), (30.0, 2.0), (1e3, 2.0), (1e5, 3.0)] {
        let got = noma_outage_weak_ainf(&params(xi, r0)).unwrap();
        let want = weak_region_oracle(xi, r0);
        assert!((got - want).abs() <= 1e-7 * want.max(1e-3), "xi={xi} r0={r0}: {got} vs {want}");
    }
}

#[test]
fn closed_forms_match_simulation_on_grid() {
    let trials = 1_000_000;
    let cfg = SimConfig {
        trials,
        seed: 3,
        xi_grid: (0..=6).map(|i| db(10.0 * i as f64)).collect(),
        beta: 1.0,
        k_users: 2,
        r0: 2.0,
        policy: Policy::Mid,
        scenario: Scenario::PairIid,
    };
    for pt in run_outage(&cfg).unwrap() {
        let cf = outage_point(&params(pt.xi, 2.0)).unwrap();
        let checks = [
            (pt.p_oma_weak.mean, cf.p_oma_weak),
            (pt.p_oma_strong.mean, cf.p_oma_strong),
            (pt.p_noma_weak_ainf.mean, cf.p_noma_weak_ainf),
            (pt.p_noma_strong_asup.mean, cf.p_noma_strong_asup),
        ];
        for (i, (mc, truth)) in checks.into_iter().enumerate() {
            assert!(within_binomial(mc, trials, truth, 3.0), "xi={} #{i}: {mc} vs {truth}", pt.xi);
        }
        // the midpoint improves both users on OMA
        assert!(pt.p_mid_weak.mean <= pt.p_oma_weak.mean);
        assert!(pt.p_mid_strong.mean <= pt.p_oma_strong.mean);
    }
}

#[test]
fn empirical_policy_monotonicity() {
    let p = params(1e3, 2.0);
    let run = |policy| noma_outage_empirical(&p, policy, 300_000, 8).unwrap();
    let (inf, mid, sup) = (run(Policy::Inf), run(Policy::Mid), run(Policy::Sup));
    assert!(inf.0.mean <= mid.0.mean && mid.0.mean <= sup.0.mean);
    assert!(inf.1.mean >= mid.1.mean && mid.1.mean >= sup.1.mean);
    assert!(within_binomial(sup.0.mean, 300_000, oma_outage_weak(&p), 3.0));
    assert!(within_binomial(inf.1.mean, 300_000, oma_outage_strong(&p), 3.0));
}

#[test]
fn probabilities_stay_in_unit_interval() {
    for i in 0..=12 {
        let r0 = 0.1 + 5.9 * i as f64 / 12.0;
        for j in 0..=12 {
            let xi = 10f64.powf(6.0 * j as f64 / 12.0);
            let pt = outage_point(&params(xi, r0)).unwrap();
            for v in [pt.p_oma_weak, pt.p_oma_strong, pt.p_noma_weak_ainf, pt.p_noma_strong_asup] {
                assert!((0.0..=1.0).contains(&v), "r0={r0} xi={xi}: {v}");
            }
        }
    }
}

#[test]
fn weak_user_improvement_grows_with_snr() {
    let ratios: Vec<f64> = (0..=30)
        .map(|i| {
            let p = params(db(2.0 * i as f64), 2.0);
            oma_outage_weak(&p) / noma_outage_weak_ainf(&p).unwrap()
        })
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)), "{ratios:?}");
}

/// SNR in dB at which `f` crosses `level`, by bisection on a decreasing curve.
fn crossing_db(f: impl Fn(f64) -> f64, level: f64) -> f64 {
    let (mut lo, mut hi) = (-10.0, 80.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(db(mid)) > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn strong_user_gains_about_two_db() {
    let oma = crossing_db(|xi| oma_outage_strong(&params(xi, 2.0)), 1e-2);
    let noma = crossing_db(|xi| noma_outage_strong_asup(&params(xi, 2.0)), 1e-2);
    let gap = oma - noma;
    assert!((1.0..=3.0).contains(&gap), "gap {gap} dB");
}
