//! Two-user downlink model.
//!
//! User 1 has the weaker channel gain `g1`, user 2 the stronger `g2`. Under
//! OMA each user gets half the time at full power; under NOMA the stronger
//! user gets power fraction `a`, the weaker `1 - a`, and the stronger user
//! removes the weaker user's signal by successive interference
//! cancellation before decoding its own.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{positive, unit_interval, Error, Result};

/// Transmit SNR `xi`, mean channel gain `beta` and target rate `r0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    xi: f64,
    beta: f64,
    r0: f64,
}

impl SystemParams {
    /// `xi` and `beta` must be positive; `r0` defaults to zero.
    pub fn new(xi: f64, beta: f64) -> Result<Self> {
        Ok(Self {
            xi: positive("xi", xi)?,
            beta: positive("beta", beta)?,
            r0: 0.0,
        })
    }

    pub fn with_r0(mut self, r0: f64) -> Result<Self> {
        if !(r0.is_finite() && r0 >= 0.0) {
            return Err(Error::domain("r0", r0, "must be finite and >= 0"));
        }
        self.r0 = r0;
        Ok(self)
    }

    pub fn with_xi(mut self, xi: f64) -> Result<Self> {
        self.xi = positive("xi", xi)?;
        Ok(self)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// Average received SNR `beta·xi`.
    pub fn mean_snr(&self) -> f64 {
        self.beta * self.xi
    }
}

/// Ordered channel gains `0 < g1 <= g2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPair {
    g1: f64,
    g2: f64,
}

impl ChannelPair {
    /// Orders the two gains; equal gains are allowed and keep input order.
    pub fn new(first: f64, second: f64) -> Result<Self> {
        let first = positive("g1", first)?;
        let second = positive("g2", second)?;
        Ok(if second < first {
            Self { g1: second, g2: first }
        } else {
            Self { g1: first, g2: second }
        })
    }

    pub fn weak(&self) -> f64 {
        self.g1
    }

    pub fn strong(&self) -> f64 {
        self.g2
    }
}

/// The interval of stronger-user power fractions for which both users do at
/// least as well as under OMA.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FairRegion {
    pub a_inf: f64,
    pub a_sup: f64,
}

impl FairRegion {
    pub fn contains(&self, a: f64) -> bool {
        (self.a_inf..=self.a_sup).contains(&a)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a_inf + self.a_sup)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a_inf == self.a_sup
    }

    /// `n` evenly spaced coefficients from `a_inf` to `a_sup` inclusive.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![self.a_inf],
            _ => (0..n)
                .map(|i| {
                    let t = i as f64 / (n - 1) as f64;
                    self.a_inf + t * (self.a_sup - self.a_inf)
                })
                .collect(),
        }
    }
}

/// How the stronger user's power fraction is chosen for a channel pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// `a_inf`: the weaker user gains, the stronger keeps its OMA rate.
    Inf,
    /// `a_sup`: the stronger user gains, the weaker keeps its OMA rate.
    Sup,
    /// Midpoint of the fair region.
    Mid,
    /// A constant fraction regardless of the channel.
    Fixed(f64),
}

impl Policy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Policy::Fixed(a) if !(a > 0.0 && a < 1.0) => {
                Err(Error::domain("fixed", a, "fixed power fraction must lie in (0, 1)"))
            }
            _ => Ok(()),
        }
    }

    /// Coefficient for the given region.
    pub fn coefficient(&self, region: &FairRegion) -> f64 {
        match *self {
            Policy::Inf => region.a_inf,
            Policy::Sup => region.a_sup,
            Policy::Mid => region.midpoint(),
            Policy::Fixed(a) => a,
        }
    }
}

/// `½ log2(1 + xi·g)`: half the time at full power.
pub fn oma_capacity(xi: f64, g: f64) -> Result<f64> {
    Ok(oma_rate(positive("xi", xi)? * positive("g", g)?))
}

/// Signal-to-interference-plus-noise ratio of the weaker user's message at a
/// receiver with gain `g`, treating the stronger user's message as noise.
pub fn weak_message_sinr(xi: f64, g: f64, a: f64) -> f64 {
    let y = xi * g;
    (1.0 - a) * y / (a * y + 1.0)
}

/// `log2(1 + (1-a)·xi·g1 / (a·xi·g1 + 1))`.
pub fn noma_capacity_weak(xi: f64, g1: f64, a: f64) -> Result<f64> {
    let y = positive("xi", xi)? * positive("g1", g1)?;
    Ok(weak_rate(y, unit_interval("a", a)?))
}

/// `log2(1 + a·xi·g2)`.
pub fn noma_capacity_strong(xi: f64, g2: f64, a: f64) -> Result<f64> {
    let y = positive("xi", xi)? * positive("g2", g2)?;
    Ok(strong_rate(y, unit_interval("a", a)?))
}

/// `(√(1+xi·x) - 1)/(xi·x)`, the power fraction at which a user with gain
/// `x` gets exactly its OMA rate from NOMA when it is interference-free.
/// Lies in `(0, ½)` and tends to `½` as `xi·x → 0`.
pub fn allocation_bound(xi: f64, x: f64) -> Result<f64> {
    Ok(bound(positive("xi", xi)? * positive("x", x)?))
}

// Unchecked forms in terms of the received SNR `y = xi·g`, for the
// simulation kernels.

pub(crate) fn oma_rate(y: f64) -> f64 {
    0.5 * y.ln_1p() / LN_2
}

pub(crate) fn weak_rate(y: f64, a: f64) -> f64 {
    // (1 + y) / (1 + a·y) in log form keeps precision for tiny y
    (y.ln_1p() - (a * y).ln_1p()) / LN_2
}

pub(crate) fn strong_rate(y: f64, a: f64) -> f64 {
    (a * y).ln_1p() / LN_2
}

pub(crate) fn bound(y: f64) -> f64 {
    1.0 / ((1.0 + y).sqrt() + 1.0)
}

pub fn fair_region(params: &SystemParams, ch: &ChannelPair) -> Result<FairRegion> {
    Ok(FairRegion {
        a_inf: allocation_bound(params.xi, ch.g2)?,
        a_sup: allocation_bound(params.xi, ch.g1)?,
    })
}

/// NOMA sum rate `C1(a) + C2(a)`.
pub fn sum_rate(xi: f64, ch: &ChannelPair, a: f64) -> Result<f64> {
    Ok(noma_capacity_weak(xi, ch.g1, a)? + noma_capacity_strong(xi, ch.g2, a)?)
}

pub fn sum_rate_oma(xi: f64, ch: &ChannelPair) -> Result<f64> {
    Ok(oma_capacity(xi, ch.g1)? + oma_capacity(xi, ch.g2)?)
}

/// High-SNR approximations of the region-endpoint capacities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighSnrCapacities {
    pub c1_oma: f64,
    pub c2_oma: f64,
    /// weaker user at `a_inf`
    pub c1_ainf: f64,
    /// stronger user at `a_sup`
    pub c2_asup: f64,
}

pub fn high_snr_capacities(xi: f64, ch: &ChannelPair) -> Result<HighSnrCapacities> {
    let xi = positive("xi", xi)?;
    let half_log2 = |v: f64| 0.5 * v.log2();
    Ok(HighSnrCapacities {
        c1_oma: half_log2(xi * ch.g1),
        c2_oma: half_log2(xi * ch.g2),
        c1_ainf: half_log2(xi * ch.g2),
        c2_asup: ((xi / ch.g1).sqrt() * ch.g2).log2(),
    })
}

/// Capacities of both users at one coefficient, with their OMA baselines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCapacities {
    pub c1_oma: f64,
    pub c2_oma: f64,
    pub c1_noma: f64,
    pub c2_noma: f64,
}

impl PairCapacities {
    pub fn evaluate(xi: f64, ch: &ChannelPair, a: f64) -> Result<Self> {
        Ok(Self {
            c1_oma: oma_capacity(xi, ch.g1)?,
            c2_oma: oma_capacity(xi, ch.g2)?,
            c1_noma: noma_capacity_weak(xi, ch.g1, a)?,
            c2_noma: noma_capacity_strong(xi, ch.g2, a)?,
        })
    }

    pub fn sum_oma(&self) -> f64 {
        self.c1_oma + self.c2_oma
    }

    pub fn sum_noma(&self) -> f64 {
        self.c1_noma + self.c2_noma
    }
}
