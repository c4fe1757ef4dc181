//! Special functions used by the closed forms: the exponential integral
//! `E1`, the complementary error function, and digamma.
//!
//! Every function has a plain entry point returning the value and a
//! `*_with_error` twin returning a [`SpecFunResult`] with a heuristic
//! relative error estimate.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

const EPS: f64 = f64::EPSILON;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 5000;

/// Below this argument `E1` uses its power series, above it the
/// continued fraction.
const E1_SERIES_LIMIT: f64 = 1.0;
/// Below this argument `erfc` is `1 - erf` from the series, above it the
/// continued fraction.
const ERFC_CF_LIMIT: f64 = 2.0;

/// A function value together with an estimate of its relative error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    pub est_rel_error: f64,
}

/// Exponential integral `E1(x) = ∫_x^∞ e^{-u}/u du` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    exp_integral_e1_with_error(x).map(|r| r.value)
}

pub fn exp_integral_e1_with_error(x: f64) -> Result<SpecFunResult> {
    check_e1_domain(x)?;
    if x < E1_SERIES_LIMIT {
        Ok(e1_series(x))
    } else {
        let cf = e1_scaled_cf(x);
        Ok(SpecFunResult {
            value: cf.value * (-x).exp(),
            // exp(-x) adds roughly x ulps of its own
            est_rel_error: cf.est_rel_error + EPS * (1.0 + x),
        })
    }
}

/// `e^x E1(x)`, which stays representable for large `x` where `E1(x)`
/// alone underflows. Behaves like `1/x` as `x → ∞`.
pub fn exp_integral_e1_scaled(x: f64) -> Result<f64> {
    check_e1_domain(x)?;
    if x < E1_SERIES_LIMIT {
        Ok(e1_series(x).value * x.exp())
    } else {
        Ok(e1_scaled_cf(x).value)
    }
}

fn check_e1_domain(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain("x", x, "E1 is defined here only for finite x > 0"))
    }
}

/// `E1(x) = -γ - ln x - Σ_{k≥1} (-x)^k / (k·k!)`.
fn e1_series(x: f64) -> SpecFunResult {
    let mut term = 1.0;
    let mut sum = 0.0;
    let mut largest: f64 = 0.0;
    let mut n = 0;
    for k in 1..=MAX_ITER {
        let kf = k as f64;
        term *= -x / kf;
        let contrib = term / kf;
        sum += contrib;
        largest = largest.max(contrib.abs());
        n = k;
        if contrib.abs() <= EPS * sum.abs() {
            break;
        }
    }
    let value = -EULER_GAMMA - x.ln() - sum;
    let scale = EULER_GAMMA + x.ln().abs() + largest;
    SpecFunResult {
        value,
        est_rel_error: (n as f64 + 2.0) * EPS * scale / value.abs(),
    }
}

/// Modified Lentz evaluation of `e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...)))`.
fn e1_scaled_cf(x: f64) -> SpecFunResult {
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    let mut n = 0;
    for i in 1..MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        h *= delta;
        n = i;
        if (delta - 1.0).abs() <= EPS {
            break;
        }
    }
    SpecFunResult {
        value: h,
        est_rel_error: (n as f64 + 1.0) * EPS,
    }
}

/// Complementary error function `erfc(z) = (2/√π) ∫_z^∞ e^{-u²} du`.
/// Total over finite `z`; NaN propagates.
pub fn erfc(z: f64) -> f64 {
    erfc_with_error(z).value
}

pub fn erfc_with_error(z: f64) -> SpecFunResult {
    if z.is_nan() {
        return SpecFunResult {
            value: f64::NAN,
            est_rel_error: f64::NAN,
        };
    }
    if z < 0.0 {
        let upper = erfc_with_error(-z);
        let value = 2.0 - upper.value;
        return SpecFunResult {
            value,
            est_rel_error: upper.est_rel_error * upper.value / value + EPS,
        };
    }
    if z < ERFC_CF_LIMIT {
        let (erf, n) = erf_series(z);
        let value = 1.0 - erf;
        SpecFunResult {
            value,
            est_rel_error: EPS * (1.0 + n as f64 * erf) / value,
        }
    } else {
        let cf = erfcx_cf(z);
        SpecFunResult {
            value: cf.value * (-z * z).exp(),
            est_rel_error: cf.est_rel_error + EPS * (1.0 + z * z),
        }
    }
}

/// Scaled complementary error function `e^{z²} erfc(z)`. For large `z`
/// it behaves like `1/(z√π)`.
pub fn erfcx(z: f64) -> f64 {
    if z.is_nan() {
        f64::NAN
    } else if z < 0.0 {
        2.0 * (z * z).exp() - erfcx(-z)
    } else if z < ERFC_CF_LIMIT {
        (z * z).exp() * (1.0 - erf_series(z).0)
    } else {
        erfcx_cf(z).value
    }
}

/// `erf(z) = (2/√π) e^{-z²} Σ_{n≥0} 2^n z^{2n+1} / (2n+1)!!` for `z ≥ 0`.
/// All terms are positive, so there is no cancellation.
fn erf_series(z: f64) -> (f64, usize) {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let mut n = 0;
    while n < MAX_ITER {
        n += 1;
        term *= 2.0 * z2 / (2 * n + 1) as f64;
        sum += term;
        if term <= EPS * sum {
            break;
        }
    }
    (2.0 / PI.sqrt() * (-z2).exp() * sum, n)
}

/// Lentz evaluation of `√π e^{z²} erfc(z) = 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))`.
fn erfcx_cf(z: f64) -> SpecFunResult {
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    let mut n = 0;
    for i in 1..MAX_ITER {
        let a = i as f64 / 2.0;
        d = z + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = z + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        n = i;
        if (delta - 1.0).abs() <= EPS {
            break;
        }
    }
    SpecFunResult {
        value: 1.0 / (PI.sqrt() * f),
        est_rel_error: (n as f64).sqrt() * 4.0 * EPS,
    }
}

/// Digamma `ψ(w) = Γ'(w)/Γ(w)` for `w > 0`.
pub fn digamma(w: f64) -> Result<f64> {
    digamma_with_error(w).map(|r| r.value)
}

pub fn digamma_with_error(w: f64) -> Result<SpecFunResult> {
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::domain("w", w, "digamma is defined here only for w > 0"));
    }
    // Shift up with ψ(x) = ψ(x+1) - 1/x until the asymptotic series is
    // accurate to double precision.
    let mut shift = 0.0;
    let mut x = w;
    let mut steps = 0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
        steps += 1;
    }
    let inv2 = 1.0 / (x * x);
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    let value = shift + x.ln() - 0.5 / x - tail;
    let magnitude = shift.abs() + x.ln().abs();
    Ok(SpecFunResult {
        value,
        est_rel_error: (steps as f64 + 4.0) * EPS * magnitude / value.abs().max(TINY),
    })
}
