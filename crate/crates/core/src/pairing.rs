//! Opportunistic pairing of the weakest and strongest of `K` users with
//! i.i.d. exponential gains of mean `beta`.

use std::f64::consts::LN_2;

use rand_chacha::rand_core::RngCore;

use crate::error::{positive, Error, Result};
use crate::mcsim::unit_exponential;
use crate::quad::{integrate_to_infinity, Tolerance};
use crate::specfun::{digamma, exp_integral_e1_scaled, EULER_GAMMA};
use crate::twouser::SystemParams;

/// Largest population for which the alternating binomial sum is used.
pub const ALTERNATING_SUM_MAX_K: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinMaxPair {
    pub g_min: f64,
    pub g_max: f64,
    pub k: usize,
}

fn check_wedge(x0: f64, x_max: f64, k: usize, beta: f64) -> Result<()> {
    positive("beta", beta)?;
    if k < 2 {
        return Err(Error::domain("k", k as f64, "pairing needs at least two users"));
    }
    if !(x0 >= 0.0) || x0.is_nan() {
        return Err(Error::domain("x0", x0, "must be >= 0"));
    }
    if !(x0 <= x_max) {
        return Err(Error::domain("x0", x0, "minimum exceeds maximum"));
    }
    Ok(())
}

/// `P(min ≤ x0, max ≤ xM) = (1 - e^{-xM/β})^K - (e^{-x0/β} - e^{-xM/β})^K`.
pub fn minmax_joint_cdf(x0: f64, x_max: f64, k: usize, beta: f64) -> Result<f64> {
    check_wedge(x0, x_max, k, beta)?;
    let all_below = -(-x_max / beta).exp_m1();
    let all_between = (-x0 / beta).exp() - (-x_max / beta).exp();
    let k = k as i32;
    Ok((all_below.powi(k) - all_between.powi(k)).clamp(0.0, 1.0))
}

/// `K(K-1)/β² e^{-(x0+xM)/β} (e^{-x0/β} - e^{-xM/β})^{K-2}` on `0 < x0 < xM`.
pub fn minmax_joint_pdf(x0: f64, x_max: f64, k: usize, beta: f64) -> Result<f64> {
    check_wedge(x0, x_max, k, beta)?;
    if !(x0 > 0.0 && x0 < x_max) {
        return Err(Error::domain("x0", x0, "density is defined on 0 < x0 < xM"));
    }
    let kf = k as f64;
    let between = (-x0 / beta).exp() * -((x0 - x_max) / beta).exp_m1();
    Ok(kf * (kf - 1.0) / (beta * beta) * (-(x0 + x_max) / beta).exp() * between.powi(k as i32 - 2))
}

/// Draws `k` exponential gains of mean `beta` and keeps the extremes.
pub fn sample_minmax<R: RngCore>(k: usize, beta: f64, rng: &mut R) -> Result<MinMaxPair> {
    let beta = positive("beta", beta)?;
    if k == 0 {
        return Err(Error::domain("k", 0.0, "needs at least one user"));
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..k {
        let g = beta * unit_exponential(rng.next_u64());
        lo = lo.min(g);
        hi = hi.max(g);
    }
    Ok(MinMaxPair { g_min: lo, g_max: hi, k })
}

/// How [`expected_gain_asup`] evaluated the gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainMethod {
    /// Compensated alternating binomial sum.
    AlternatingSum,
    /// `½(E[log2 g_max] - E[log2 g_min])` by quadrature.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingGain {
    pub value: f64,
    pub method: GainMethod,
}

/// High-SNR sum-rate gain of min/max pairing at `a_sup`,
/// `½log2 K + ½ Σ_{m=2}^{K} C(K,m)(-1)^m log2 m`.
///
/// The sum cancels badly as `K` grows; above
/// [`ALTERNATING_SUM_MAX_K`] the equivalent expectation is integrated.
pub fn expected_gain_asup(k: usize) -> Result<PairingGain> {
    let method = if k <= ALTERNATING_SUM_MAX_K {
        GainMethod::AlternatingSum
    } else {
        GainMethod::Quadrature
    };
    expected_gain_asup_with(k, method)
}

/// [`expected_gain_asup`] with the evaluation path forced.
pub fn expected_gain_asup_with(k: usize, method: GainMethod) -> Result<PairingGain> {
    if k == 0 {
        return Err(Error::domain("k", 0.0, "needs at least one user"));
    }
    let value = match method {
        GainMethod::AlternatingSum => alternating_sum(k),
        GainMethod::Quadrature => {
            // E[ln min] = -ln K - γ for unit mean
            let e_ln_min = -(k as f64).ln() - EULER_GAMMA;
            0.5 * (expected_ln_max(k)? - e_ln_min) / LN_2
        }
    };
    Ok(PairingGain { value, method })
}

fn alternating_sum(k: usize) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    // C(K, m) stays an exact integer in f64 for K well past 30
    let mut binom = k as f64;
    for m in 2..=k {
        binom = binom * (k + 1 - m) as f64 / m as f64;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * binom * (m as f64).log2() - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    0.5 * (k as f64).log2() + 0.5 * sum
}

/// `E[ln max]` of `k` unit exponentials, `∫ ln x · K e^{-x}(1-e^{-x})^{K-1} dx`.
fn expected_ln_max(k: usize) -> Result<f64> {
    let kf = k as f64;
    let density = move |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let log_cdf = (-(-x).exp_m1()).ln();
        x.ln() * kf * (-x + (kf - 1.0) * log_cdf).exp()
    };
    let tol = Tolerance::relative(1e-12).with_abs(1e-14);
    Ok(integrate_to_infinity(density, 0.0, kf.ln() + 1.0, tol)?.value)
}

/// Approximate sum-rate gain at `a_inf` for large `xi` and `K`:
/// `e^{K/m}E1(K/m)/ln4 - log2(1 + (√(1+xi·H_K) - 1)/(K·H_K))` with
/// `H_K = ψ(K+1) + γ`.
pub fn expected_gain_ainf_approx(k: usize, params: &SystemParams) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain("k", k as f64, "pairing needs at least two users"));
    }
    let kf = k as f64;
    let xi = params.xi();
    let h = digamma(kf + 1.0)? + EULER_GAMMA;
    let first = exp_integral_e1_scaled(kf / params.mean_snr())? / (2.0 * LN_2);
    // (√(1+xi·h) - 1)/(K·h) = xi/(K(√(1+xi·h) + 1))
    let ratio = xi / (kf * ((1.0 + xi * h).sqrt() + 1.0));
    Ok(first - ratio.ln_1p() / LN_2)
}

/// `H_K = 1 + 1/2 + ... + 1/K`.
pub fn harmonic_number(k: usize) -> f64 {
    (1..=k).rev().map(|i| 1.0 / i as f64).sum()
}
