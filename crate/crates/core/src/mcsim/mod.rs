//! Monte Carlo estimates of every expectation and probability the closed
//! forms describe.
//!
//! Channel gains are exponential with mean `beta`. All policies within a run
//! are evaluated on the same draws, and the draws of a grid point depend
//! only on `(seed, scenario, grid index, K)`, so separate runs that differ
//! only in policy also share their random numbers.

mod engine;

pub use engine::{simulate, stream_id, unit_exponential, CHUNK_TRIALS};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiuser;
use crate::twouser::{bound, oma_rate, strong_rate, weak_rate, FairRegion, Policy};

const TAG_ERGODIC: u64 = 1;
const TAG_OUTAGE: u64 = 2;
const TAG_PAIRING: u64 = 3;
const TAG_MULTIUSER: u64 = 4;
pub(crate) const TAG_OUTAGE_POLICY: u64 = 5;

/// Fixed stronger-user power fraction of the conventional NOMA baseline in
/// pairing runs, used unless the config's policy is itself `Fixed`.
pub const DEFAULT_FIXED_A: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Two i.i.d. users, ordered.
    PairIid,
    /// The weakest and strongest of `k_users` i.i.d. users.
    PairMinmax,
    /// `k_users` i.i.d. users, ordered.
    Multiuser,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    /// Linear transmit SNRs, strictly increasing.
    pub xi_grid: Vec<f64>,
    pub beta: f64,
    pub k_users: usize,
    pub r0: f64,
    pub policy: Policy,
    pub scenario: Scenario,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.xi_grid.is_empty() {
            return bad("xi_grid is empty".into());
        }
        if let Some(x) = self.xi_grid.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return bad(format!("xi_grid entry {x} is not a positive finite SNR"));
        }
        if self.xi_grid.windows(2).any(|w| w[1] <= w[0]) {
            return bad("xi_grid must be strictly increasing".into());
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return bad(format!("beta = {} must be finite and > 0", self.beta));
        }
        if !(self.r0.is_finite() && self.r0 >= 0.0) {
            return bad(format!("r0 = {} must be finite and >= 0", self.r0));
        }
        self.policy.validate().map_err(|e| Error::Config(e.to_string()))?;
        let min_k = if self.scenario == Scenario::PairMinmax { 2 } else { 1 };
        if self.k_users < min_k {
            return bad(format!("k_users = {} must be at least {min_k}", self.k_users));
        }
        Ok(())
    }

    fn expect(&self, scenario: Scenario) -> Result<()> {
        self.validate()?;
        if self.scenario != scenario {
            return Err(Error::Config(format!(
                "scenario {:?} does not match the requested run ({scenario:?})",
                self.scenario
            )));
        }
        Ok(())
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl SimResult {
    /// Distance from `value` in standard errors. Zero-error estimates
    /// give 0 on exact agreement and infinity otherwise.
    pub fn z_score(&self, value: f64) -> f64 {
        let d = (self.mean - value).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Two-user capacities at one SNR, for the config's policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErgodicPairPoint {
    pub xi: f64,
    pub c1_oma: SimResult,
    pub c2_oma: SimResult,
    pub c1_noma: SimResult,
    pub c2_noma: SimResult,
    pub s_oma: SimResult,
    pub s_noma: SimResult,
    /// `S_N(a) - S_O`, averaged per draw.
    pub gain: SimResult,
}

pub fn run_ergodic_pair(config: &SimConfig) -> Result<Vec<ErgodicPairPoint>> {
    config.expect(Scenario::PairIid)?;
    let beta = config.beta;
    let policy = config.policy;
    Ok(config
        .xi_grid
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let stream = stream_id(TAG_ERGODIC, i as u64, 2);
            let [c1o, c2o, c1n, c2n, so, sn, gain] = simulate(config.trials, config.seed, stream, 2, |d| {
                let (y1, y2) = ordered_snr(xi * beta * d[0], xi * beta * d[1]);
                let a = policy.coefficient(&region(y1, y2));
                let (c1o, c2o) = (oma_rate(y1), oma_rate(y2));
                let (c1n, c2n) = (weak_rate(y1, a), strong_rate(y2, a));
                let (so, sn) = (c1o + c2o, c1n + c2n);
                [c1o, c2o, c1n, c2n, so, sn, sn - so]
            });
            ErgodicPairPoint {
                xi,
                c1_oma: c1o,
                c2_oma: c2o,
                c1_noma: c1n,
                c2_noma: c2n,
                s_oma: so,
                s_noma: sn,
                gain,
            }
        })
        .collect())
}

/// Outage frequencies at one SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageSimPoint {
    pub xi: f64,
    pub r0: f64,
    pub p_oma_weak: SimResult,
    pub p_oma_strong: SimResult,
    pub p_noma_weak_ainf: SimResult,
    pub p_noma_strong_asup: SimResult,
    pub p_mid_weak: SimResult,
    pub p_mid_strong: SimResult,
}

pub fn run_outage(config: &SimConfig) -> Result<Vec<OutageSimPoint>> {
    config.expect(Scenario::PairIid)?;
    let (beta, r0) = (config.beta, config.r0);
    Ok(config
        .xi_grid
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let stream = stream_id(TAG_OUTAGE, i as u64, 2);
            let below = |c: f64| if c < r0 { 1.0 } else { 0.0 };
            let [o1, o2, n1, n2, m1, m2] = simulate(config.trials, config.seed, stream, 2, |d| {
                let (y1, y2) = ordered_snr(xi * beta * d[0], xi * beta * d[1]);
                let reg = region(y1, y2);
                let mid = reg.midpoint();
                [
                    below(oma_rate(y1)),
                    below(oma_rate(y2)),
                    below(weak_rate(y1, reg.a_inf)),
                    below(strong_rate(y2, reg.a_sup)),
                    below(weak_rate(y1, mid)),
                    below(strong_rate(y2, mid)),
                ]
            });
            OutageSimPoint {
                xi,
                r0,
                p_oma_weak: o1,
                p_oma_strong: o2,
                p_noma_weak_ainf: n1,
                p_noma_strong_asup: n2,
                p_mid_weak: m1,
                p_mid_strong: m2,
            }
        })
        .collect())
}

/// Min/max pairing out of `k` users at one SNR.
///
/// `c_min_*` and `c_max_*` are the weaker and stronger paired user's
/// capacities; `gain_*` is the per-draw sum-rate difference to OMA.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingPoint {
    pub xi: f64,
    pub k: usize,
    pub fixed_a: f64,
    pub c_min_oma: SimResult,
    pub c_max_oma: SimResult,
    pub c_min_inf: SimResult,
    pub c_max_inf: SimResult,
    pub c_min_sup: SimResult,
    pub c_max_sup: SimResult,
    pub s_oma: SimResult,
    pub s_inf: SimResult,
    pub s_sup: SimResult,
    pub s_fixed: SimResult,
    pub gain_inf: SimResult,
    pub gain_sup: SimResult,
    pub gain_fixed: SimResult,
    /// Mean of `a_sup` over the paired draws.
    pub a_sup: SimResult,
    /// `½ log2(g_max / g_min)`.
    pub half_log_ratio: SimResult,
}

/// Pairing statistics for `config.k_users` at every SNR of the grid.
pub fn run_pairing(config: &SimConfig) -> Result<Vec<PairingPoint>> {
    config.expect(Scenario::PairMinmax)?;
    Ok(config
        .xi_grid
        .iter()
        .enumerate()
        .map(|(i, &xi)| pairing_point(config, i, xi, config.k_users))
        .collect())
}

/// [`run_pairing`] repeated for each population size in `ks`.
pub fn run_pairing_sweep(config: &SimConfig, ks: &[usize]) -> Result<Vec<PairingPoint>> {
    config.expect(Scenario::PairMinmax)?;
    if let Some(k) = ks.iter().find(|&&k| k < 2) {
        return Err(Error::Config(format!("population size {k} must be at least 2")));
    }
    let mut out = Vec::with_capacity(ks.len() * config.xi_grid.len());
    for &k in ks {
        for (i, &xi) in config.xi_grid.iter().enumerate() {
            out.push(pairing_point(config, i, xi, k));
        }
    }
    Ok(out)
}

fn pairing_point(config: &SimConfig, index: usize, xi: f64, k: usize) -> PairingPoint {
    let beta = config.beta;
    let fixed_a = match config.policy {
        Policy::Fixed(a) => a,
        _ => DEFAULT_FIXED_A,
    };
    let stream = stream_id(TAG_PAIRING, index as u64, k as u64);
    let r = simulate(config.trials, config.seed, stream, k, |d| {
        let (lo, hi) = d.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        let (y1, y2) = (xi * beta * lo, xi * beta * hi);
        let reg = region(y1, y2);
        let (c1o, c2o) = (oma_rate(y1), oma_rate(y2));
        let (c1i, c2i) = (weak_rate(y1, reg.a_inf), strong_rate(y2, reg.a_inf));
        let (c1s, c2s) = (weak_rate(y1, reg.a_sup), strong_rate(y2, reg.a_sup));
        let s_fixed = weak_rate(y1, fixed_a) + strong_rate(y2, fixed_a);
        let (so, si, ss) = (c1o + c2o, c1i + c2i, c1s + c2s);
        [
            c1o,
            c2o,
            c1i,
            c2i,
            c1s,
            c2s,
            so,
            si,
            ss,
            s_fixed,
            si - so,
            ss - so,
            s_fixed - so,
            reg.a_sup,
            0.5 * (hi / lo).log2(),
        ]
    });
    PairingPoint {
        xi,
        k,
        fixed_a,
        c_min_oma: r[0],
        c_max_oma: r[1],
        c_min_inf: r[2],
        c_max_inf: r[3],
        c_min_sup: r[4],
        c_max_sup: r[5],
        s_oma: r[6],
        s_inf: r[7],
        s_sup: r[8],
        s_fixed: r[9],
        gain_inf: r[10],
        gain_sup: r[11],
        gain_fixed: r[12],
        a_sup: r[13],
        half_log_ratio: r[14],
    }
}

/// Total power of the minimum (b) and full (a) K-user allocations at one SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiuserPowerPoint {
    pub xi: f64,
    pub k: usize,
    pub sum_b: SimResult,
    pub sum_a: SimResult,
}

pub fn run_multiuser_power(config: &SimConfig) -> Result<Vec<MultiuserPowerPoint>> {
    config.expect(Scenario::Multiuser)?;
    let (beta, k) = (config.beta, config.k_users);
    Ok(config
        .xi_grid
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let stream = stream_id(TAG_MULTIUSER, i as u64, k as u64);
            let [sum_b, sum_a] = simulate(config.trials, config.seed, stream, k, |d| {
                d.sort_unstable_by(f64::total_cmp);
                d.iter_mut().for_each(|x| *x *= xi * beta);
                [multiuser::min_total_power(d), 1.0 - multiuser::full_residual(d)]
            });
            MultiuserPowerPoint { xi, k, sum_b, sum_a }
        })
        .collect())
}

fn ordered_snr(y_a: f64, y_b: f64) -> (f64, f64) {
    if y_b < y_a {
        (y_b, y_a)
    } else {
        (y_a, y_b)
    }
}

fn region(y1: f64, y2: f64) -> FairRegion {
    FairRegion {
        a_inf: bound(y2),
        a_sup: bound(y1),
    }
}
