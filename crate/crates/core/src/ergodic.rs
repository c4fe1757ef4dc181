//! Ergodic (fading-averaged) capacities for two users with i.i.d.
//! exponential channel gains of mean `beta`, ordered so that user 1 is the
//! weaker. The ordered pair has density `2/β² e^{-(x1+x2)/β}` on `x1 < x2`.
//!
//! The region-endpoint NOMA expectations have no closed form; they are a
//! closed term plus a semi-infinite integral evaluated by adaptive
//! quadrature. Every expectation depends on `xi` and `beta` only through
//! the mean SNR `m = beta·xi`.
//!
//! Writing `s = √(1 + m t)` with `t = x/β`, the integrands of the weaker
//! user's `a_inf` expectation and the stronger user's `a_sup` expectation
//! reduce to
//!
//! ```text
//! e^{-t}  S((s+1)/m) - e^{-2t} S(s(s+1)/m)      and      e^{-2t} S(s(s+1)/m)
//! ```
//!
//! with `S(u) = e^u E1(u)`. This form has no `√(1+ξx) - 1` denominators and
//! no overflowing `e^{2/(βξ)}` factors.

use std::f64::consts::LN_2;

use crate::error::Result;
use crate::quad::{integrate_to_infinity, QuadResult, Tolerance};
use crate::specfun::{exp_integral_e1_scaled, EULER_GAMMA};
use crate::twouser::SystemParams;

const LN_4: f64 = 2.0 * LN_2;

/// Default relative tolerance of the endpoint integrals.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Which end of the fair region a NOMA expectation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Inf,
    Sup,
}

/// Expected OMA capacities of the weaker and stronger user and their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmaErgodic {
    pub c1: f64,
    pub c2: f64,
    pub sum: f64,
}

/// One point of the capacity-versus-SNR curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicCurvePoint {
    pub xi: f64,
    pub e_c1_oma: f64,
    pub e_c2_oma: f64,
    pub e_s_oma: f64,
    pub e_c1_noma_ainf: f64,
    pub e_c2_noma_asup: f64,
}

pub fn ergodic_oma(params: &SystemParams) -> Result<OmaErgodic> {
    let m = params.mean_snr();
    let c1 = exp_integral_e1_scaled(2.0 / m)? / LN_4;
    let sum = exp_integral_e1_scaled(1.0 / m)? / LN_2;
    Ok(OmaErgodic {
        c1,
        c2: sum - c1,
        sum,
    })
}

/// `E[C1_N(a_inf)]`.
pub fn ergodic_noma_weak_ainf(params: &SystemParams) -> Result<f64> {
    ergodic_noma_weak_ainf_with_tolerance(params, DEFAULT_REL_TOL).map(|r| r.value)
}

/// `E[C1_N(a_inf)]` with the quadrature diagnostics. `abs_error` is the
/// quadrature error propagated to the expectation.
pub fn ergodic_noma_weak_ainf_with_tolerance(params: &SystemParams, rel_tol: f64) -> Result<QuadResult> {
    let m = params.mean_snr();
    let closed = 3.0 * exp_integral_e1_scaled(2.0 / m)? / LN_4;
    let integrand = |t: f64| {
        let s = (1.0 + m * t).sqrt();
        let near = scaled_e1_or_zero((s + 1.0) / m);
        let far = scaled_e1_or_zero(s * (s + 1.0) / m);
        (-t).exp() * near - (-2.0 * t).exp() * far
    };
    let quad = integrate_to_infinity(integrand, 0.0, 1.0, Tolerance::relative(rel_tol).with_abs(1e-300))?;
    Ok(QuadResult {
        value: closed - 2.0 / LN_2 * quad.value,
        abs_error: 2.0 / LN_2 * quad.abs_error,
        ..quad
    })
}

/// `E[C2_N(a_sup)]`.
pub fn ergodic_noma_strong_asup(params: &SystemParams) -> Result<f64> {
    ergodic_noma_strong_asup_with_tolerance(params, DEFAULT_REL_TOL).map(|r| r.value)
}

pub fn ergodic_noma_strong_asup_with_tolerance(params: &SystemParams, rel_tol: f64) -> Result<QuadResult> {
    let m = params.mean_snr();
    let closed = exp_integral_e1_scaled(2.0 / m)? / LN_4;
    let integrand = |t: f64| {
        let s = (1.0 + m * t).sqrt();
        (-2.0 * t).exp() * scaled_e1_or_zero(s * (s + 1.0) / m)
    };
    let quad = integrate_to_infinity(integrand, 0.0, 1.0, Tolerance::relative(rel_tol).with_abs(1e-300))?;
    Ok(QuadResult {
        value: closed + 2.0 / LN_2 * quad.value,
        abs_error: 2.0 / LN_2 * quad.abs_error,
        ..quad
    })
}

// Arguments reaching the integrand are always positive; an infinite one
// (t → ∞ at the mapped endpoint) contributes nothing.
fn scaled_e1_or_zero(u: f64) -> f64 {
    if u.is_finite() {
        exp_integral_e1_scaled(u).unwrap_or(0.0)
    } else {
        0.0
    }
}

/// Expected sum-rate gain `E[S_N(a)] - E[S_O]` at one end of the region.
///
/// At `a_inf` the stronger user keeps its OMA rate, so the gain is the
/// weaker user's; at `a_sup` it is the stronger user's. Both tend to
/// 1 b/s/Hz as `xi → ∞`.
pub fn expected_gain(params: &SystemParams, endpoint: Endpoint) -> Result<f64> {
    let oma = ergodic_oma(params)?;
    Ok(match endpoint {
        Endpoint::Inf => ergodic_noma_weak_ainf(params)? - oma.c1,
        Endpoint::Sup => ergodic_noma_strong_asup(params)? - oma.c2,
    })
}

pub fn ergodic_curve_point(params: &SystemParams) -> Result<ErgodicCurvePoint> {
    let oma = ergodic_oma(params)?;
    Ok(ErgodicCurvePoint {
        xi: params.xi(),
        e_c1_oma: oma.c1,
        e_c2_oma: oma.c2,
        e_s_oma: oma.sum,
        e_c1_noma_ainf: ergodic_noma_weak_ainf(params)?,
        e_c2_noma_asup: ergodic_noma_strong_asup(params)?,
    })
}

/// Expectations of the high-SNR capacity approximations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighSnrErgodic {
    pub c1_oma: f64,
    pub c2_oma: f64,
    pub c1_ainf: f64,
    pub c2_asup: f64,
}

/// Averages `½log2(ξ g1)`, `½log2(ξ g2)` and `log2(√(ξ/g1)·g2)` over the
/// ordered pair, using `E[ln g1] = ln(β/2) - γ` and
/// `E[ln g2] = ln β + ln 2 - γ`.
pub fn high_snr_ergodic(params: &SystemParams) -> HighSnrErgodic {
    let ln_xi = params.xi().ln();
    let ln_beta = params.beta().ln();
    let e_ln_g1 = ln_beta - LN_2 - EULER_GAMMA;
    let e_ln_g2 = ln_beta + LN_2 - EULER_GAMMA;
    HighSnrErgodic {
        c1_oma: 0.5 * (ln_xi + e_ln_g1) / LN_2,
        c2_oma: 0.5 * (ln_xi + e_ln_g2) / LN_2,
        c1_ainf: 0.5 * (ln_xi + e_ln_g2) / LN_2,
        c2_asup: (0.5 * ln_xi - 0.5 * e_ln_g1 + e_ln_g2) / LN_2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(xi: f64) -> SystemParams {
        SystemParams::new(xi, 1.0).unwrap()
    }

    #[test]
    fn oma_reference_values() {
        let oma = ergodic_oma(&params(1.0)).unwrap();
        // e²·E1(2)/ln4 and e·E1(1)/ln2
        assert!((oma.c1 - 0.260_643_501_857_953_4).abs() < 1e-12);
        assert!((oma.sum - 0.860_347_382_270_886).abs() < 1e-12);
        assert!(((oma.c1 + oma.c2) - oma.sum).abs() <= 1e-15);
    }

    #[test]
    fn oma_vanishes_at_zero_snr() {
        let oma = ergodic_oma(&params(1e-9)).unwrap();
        assert!(oma.c1 < 1e-8 && oma.c2 < 1e-8 && oma.sum < 2e-9);
        assert!(oma.c1 > 0.0 && oma.c2 > 0.0);
    }

    #[test]
    fn depends_only_on_mean_snr() {
        let a = SystemParams::new(10.0, 4.0).unwrap();
        let b = SystemParams::new(40.0, 1.0).unwrap();
        let (ea, eb) = (ergodic_noma_weak_ainf(&a).unwrap(), ergodic_noma_weak_ainf(&b).unwrap());
        assert!((ea - eb).abs() < 1e-12);
    }

    #[test]
    fn endpoint_expectations_dominate_oma() {
        for db in (0..=60).step_by(6) {
            let p = params(10f64.powf(db as f64 / 10.0));
            let oma = ergodic_oma(&p).unwrap();
            assert!(ergodic_noma_weak_ainf(&p).unwrap() >= oma.c1, "{db} dB");
            assert!(ergodic_noma_strong_asup(&p).unwrap() >= oma.c2, "{db} dB");
        }
    }

    #[test]
    fn weak_user_at_ainf_approaches_strong_oma() {
        // the gap closes slowly: about 0.10 at 40 dB, 0.04 at 50 dB
        let gap = |xi: f64| {
            let p = params(xi);
            ergodic_noma_weak_ainf(&p).unwrap() - ergodic_oma(&p).unwrap().c2
        };
        let gaps: Vec<f64> = [1e3, 1e4, 1e5, 1e6].iter().map(|&x| gap(x).abs()).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
        assert!(gaps[2] <= 0.05, "{gaps:?}");
    }

    #[test]
    fn gain_tends_to_one_bit() {
        let p = params(1e5);
        for e in [Endpoint::Inf, Endpoint::Sup] {
            let g = expected_gain(&p, e).unwrap();
            assert!((g - 1.0).abs() <= 0.05, "{e:?}: {g}");
        }
        let p = params(1e-6);
        for e in [Endpoint::Inf, Endpoint::Sup] {
            assert!(expected_gain(&p, e).unwrap().abs() < 1e-5);
        }
    }

    #[test]
    fn halving_tolerance_stays_within_reported_error() {
        for &xi in &[1.0, 1e3, 1e6] {
            let p = params(xi);
            let coarse = ergodic_noma_weak_ainf_with_tolerance(&p, 1e-8).unwrap();
            let fine = ergodic_noma_weak_ainf_with_tolerance(&p, 5e-9).unwrap();
            assert!((coarse.value - fine.value).abs() <= coarse.abs_error.max(1e-14));
            let coarse = ergodic_noma_strong_asup_with_tolerance(&p, 1e-8).unwrap();
            let fine = ergodic_noma_strong_asup_with_tolerance(&p, 5e-9).unwrap();
            assert!((coarse.value - fine.value).abs() <= coarse.abs_error.max(1e-14));
        }
    }

    #[test]
    fn high_snr_means() {
        let p = params(1e6);
        let h = high_snr_ergodic(&p);
        assert!((h.c1_ainf - h.c2_oma).abs() < 1e-15);
        assert!((h.c2_asup - h.c2_oma - 1.0).abs() < 1e-12);
        let pt = ergodic_curve_point(&p).unwrap();
        assert!((pt.e_c2_noma_asup - h.c2_asup).abs() < 0.01);
        assert!((pt.e_c1_noma_ainf - h.c1_ainf).abs() < 0.02);
    }
}
