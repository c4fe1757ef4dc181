//! Probability that a user's instantaneous capacity falls below the target
//! rate `r0`, for OMA and for Fair-NOMA at the ends of the fair region.
//!
//! Throughout, `t = 2^{r0}` and `m = beta·xi`. Closed forms are rearranged
//! with `expm1` and the scaled complementary error function so that they
//! keep relative accuracy when the probabilities are small.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mcsim::{self, SimResult};
use crate::quad::{integrate, Tolerance};
use crate::specfun::erfcx;
use crate::twouser::{bound, oma_rate, strong_rate, weak_rate, FairRegion, Policy, SystemParams};

/// Closed-form outage probabilities at one SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutagePoint {
    pub xi: f64,
    pub r0: f64,
    pub p_oma_weak: f64,
    pub p_oma_strong: f64,
    pub p_noma_weak_ainf: f64,
    pub p_noma_strong_asup: f64,
}

/// `1 - exp(-2(4^{r0}-1)/m)`: the minimum of two gains below
/// `(4^{r0}-1)/xi`.
pub fn oma_outage_weak(params: &SystemParams) -> f64 {
    let c = threshold_oma(params);
    -(-2.0 * c / params.beta()).exp_m1()
}

/// `(1 - exp(-(4^{r0}-1)/m))²`: both gains below the threshold.
pub fn oma_outage_strong(params: &SystemParams) -> f64 {
    let c = threshold_oma(params);
    let p = (-c / params.beta()).exp_m1();
    p * p
}

/// `(4^{r0}-1)/xi`, the gain below which OMA is in outage.
fn threshold_oma(params: &SystemParams) -> f64 {
    (2.0 * params.r0() * std::f64::consts::LN_2).exp_m1() / params.xi()
}

/// The weaker user's outage boundary at `a_inf`.
///
/// With the stronger gain `x ≥ alpha2`, the weaker user is in outage when
/// its own gain is below `x·alpha1(x)`; for `x < alpha2` it is in outage
/// whatever its gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaPair {
    pub alpha2: f64,
    xi: f64,
    t: f64,
}

impl AlphaPair {
    /// `(2^{r0}-1)/(xi·x + 2^{r0}(1 - √(1+xi·x)))`.
    pub fn alpha1(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::domain("x", x, "alpha1 needs x > 0"));
        }
        Ok(self.threshold(x)? / x)
    }

    /// `x·alpha1(x) = (t-1)(s+1)/(xi(s+1-t))` with `s = √(1+xi·x)`.
    pub fn threshold(&self, x: f64) -> Result<f64> {
        let s = (1.0 + self.xi * x).sqrt();
        let denom = s + 1.0 - self.t;
        if !(denom > 0.0) {
            return Err(Error::domain("x", x, "alpha1 denominator is not positive"));
        }
        Ok((self.t - 1.0) * (s + 1.0) / (self.xi * denom))
    }
}

/// `alpha2 = p + √(q + p²)` with `p = (4^{r0}-2)/(2xi)`, `q = (4^{r0}-1)/xi²`.
pub fn alpha_pair(params: &SystemParams) -> Result<AlphaPair> {
    let (xi, r0) = (params.xi(), params.r0());
    if !(r0 > 0.0) {
        return Err(Error::domain("r0", r0, "alpha pair needs r0 > 0"));
    }
    let four = 4f64.powf(r0);
    let p = (four - 2.0) / (2.0 * xi);
    let q = (four - 1.0) / (xi * xi);
    let root = (q + p * p).sqrt();
    // for p < 0 the sum cancels; use the conjugate form
    let alpha2 = if p >= 0.0 { p + root } else { q / (root - p) };
    Ok(AlphaPair {
        alpha2,
        xi,
        t: 2f64.powf(r0),
    })
}

/// Outage of the weaker user at `a_inf`.
///
/// Equals `1 + e^{-2α2/β} - (2/β)∫_{α2}^∞ e^{-x(α1(x)+1)/β} dx`, evaluated as
/// `(1 - e^{-α2/β})² + (2/β)∫_{α2}^∞ e^{-x/β}(1 - e^{-xα1(x)/β}) dx` so the
/// leading terms do not cancel. The integral runs to `α2 + 40β` by
/// quadrature and the tail beyond is added analytically.
pub fn noma_outage_weak_ainf(params: &SystemParams) -> Result<f64> {
    if params.r0() == 0.0 {
        return Ok(0.0);
    }
    let beta = params.beta();
    let pair = alpha_pair(params)?;
    let head = (-pair.alpha2 / beta).exp_m1().powi(2);
    let integrand = |x: f64| {
        let inner = pair.threshold(x).unwrap_or(f64::INFINITY);
        (-x / beta).exp() * -(-inner / beta).exp_m1()
    };
    let end = pair.alpha2 + 40.0 * beta;
    let scale = 2.0 / beta;
    let tol = Tolerance::relative(1e-10).with_abs(1e-16 / scale);
    let body = integrate(integrand, pair.alpha2, end, tol)?;
    // integrand is e^{-x/β} times a factor that decreases towards its limit
    let tail = beta * (-end / beta).exp() * -(-pair.threshold(end)? / beta).exp_m1();
    Ok((head + scale * (body.value + tail)).clamp(0.0, 1.0))
}

/// Outage of the stronger user at `a_sup`.
///
/// The closed form `1 + e^{-2(t²-1)/m} - 2e^{-2(t-1)/m} +
/// (t-1)e^{(t-3)²/(4m)}√(π/m)[erfc(u1) - erfc(u2)]` with
/// `u1 = (t+1)/(2√m)`, `u2 = (3t-1)/(2√m)`, with `erfc(u) = e^{-u²}erfcx(u)`
/// absorbed into the exponentials.
pub fn noma_outage_strong_asup(params: &SystemParams) -> f64 {
    let r0 = params.r0();
    if r0 == 0.0 {
        return 0.0;
    }
    let m = params.mean_snr();
    let tm1 = (r0 * std::f64::consts::LN_2).exp_m1();
    let t = tm1 + 1.0;
    // 1 - 2e^{-2(t-1)/m} + e^{-2(t²-1)/m}
    //   = (1 - e^{-2(t-1)/m})² + e^{-4(t-1)/m}·expm1(-2(t-1)²/m)
    let e1 = (-2.0 * tm1 / m).exp_m1();
    let closed = e1 * e1 + (-4.0 * tm1 / m).exp() * (-2.0 * tm1 * tm1 / m).exp_m1();
    let sq = m.sqrt();
    let u1 = (t + 1.0) / (2.0 * sq);
    let u2 = (3.0 * t - 1.0) / (2.0 * sq);
    let bracket = (-2.0 * tm1 / m).exp() * erfcx(u1) - (-2.0 * tm1 * (t + 1.0) / m).exp() * erfcx(u2);
    let p = closed + tm1 * (PI / m).sqrt() * bracket;
    p.clamp(0.0, 1.0)
}

pub fn outage_point(params: &SystemParams) -> Result<OutagePoint> {
    Ok(OutagePoint {
        xi: params.xi(),
        r0: params.r0(),
        p_oma_weak: oma_outage_weak(params),
        p_oma_strong: oma_outage_strong(params),
        p_noma_weak_ainf: noma_outage_weak_ainf(params)?,
        p_noma_strong_asup: noma_outage_strong_asup(params),
    })
}

/// Monte Carlo outage frequencies `(weak, strong)` of both users when the
/// power fraction follows `policy`. Deterministic given `seed`.
pub fn noma_outage_empirical(
    params: &SystemParams,
    policy: Policy,
    trials: u64,
    seed: u64,
) -> Result<(SimResult, SimResult)> {
    policy.validate()?;
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let m = params.mean_snr();
    let r0 = params.r0();
    let below = |c: f64| if c < r0 { 1.0 } else { 0.0 };
    let stream = mcsim::stream_id(mcsim::TAG_OUTAGE_POLICY, m.to_bits(), 2);
    let [weak, strong] = mcsim::simulate(trials, seed, stream, 2, |d| {
        let (y1, y2) = if d[1] < d[0] { (m * d[1], m * d[0]) } else { (m * d[0], m * d[1]) };
        let region = FairRegion {
            a_inf: bound(y2),
            a_sup: bound(y1),
        };
        let a = policy.coefficient(&region);
        [below(weak_rate(y1, a)), below(strong_rate(y2, a))]
    });
    Ok((weak, strong))
}

/// Monte Carlo OMA outage frequencies on the same draws as
/// [`noma_outage_empirical`] with the same `params` and `seed`.
pub fn oma_outage_empirical(params: &SystemParams, trials: u64, seed: u64) -> Result<(SimResult, SimResult)> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let m = params.mean_snr();
    let r0 = params.r0();
    let below = |c: f64| if c < r0 { 1.0 } else { 0.0 };
    let stream = mcsim::stream_id(mcsim::TAG_OUTAGE_POLICY, m.to_bits(), 2);
    let [weak, strong] = mcsim::simulate(trials, seed, stream, 2, |d| {
        let (lo, hi) = if d[1] < d[0] { (d[1], d[0]) } else { (d[0], d[1]) };
        [below(oma_rate(m * lo)), below(oma_rate(m * hi))]
    });
    Ok((weak, strong))
}
