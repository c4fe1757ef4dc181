//! Adaptive Gauss–Kronrod (7/15) quadrature on finite and semi-infinite
//! intervals.
//!
//! The interval with the largest error estimate is bisected until the
//! summed error meets `max(abs, rel·|I|)` or the subdivision budget runs
//! out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights at the odd Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self {
            abs: 0.0,
            rel,
            max_intervals: 4000,
        }
    }

    pub fn absolute(abs: f64) -> Self {
        Self {
            abs,
            rel: 0.0,
            max_intervals: 4000,
        }
    }

    pub fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let lo = f(center - dx);
        let hi = f(center + dx);
        kronrod += WGK[j] * (lo + hi);
        abs_sum += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
        *slot = (lo, hi);
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (j, (lo, hi)) in fv.iter().enumerate() {
        asc += WGK[j] * ((lo - mean).abs() + (hi - mean).abs());
    }
    let value = kronrod * half;
    let asc = asc * half.abs();
    let abs_sum = abs_sum * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    // QUADPACK's rescaling of the raw Gauss/Kronrod difference
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_sum);
    }
    Segment { a, b, value, error }
}

/// Integrates `f` over the finite interval `[a, b]`.
///
/// Returns [`Error::Quadrature`] with the achieved estimate when the
/// tolerance cannot be met within `tol.max_intervals` subdivisions. A
/// non-finite integrand value is reported the same way.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
            intervals: 0,
        });
    }
    let first = kronrod15(&f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut value = first.value;
    let mut error = first.error;

    loop {
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Quadrature {
                value,
                abs_error: error,
                evaluations,
            });
        }
        if error <= tol.abs.max(tol.rel * value.abs()) {
            break;
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::Quadrature {
                value,
                abs_error: error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid == worst.a || mid == worst.b {
            // interval exhausted at machine resolution
            return Err(Error::Quadrature {
                value,
                abs_error: error,
                evaluations,
            });
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // re-sum to shed the drift of the running updates
    let intervals = heap.len();
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segments.iter().map(|s| s.value).sum();
    let abs_error = segments.iter().map(|s| s.error).sum();
    Ok(QuadResult {
        value,
        abs_error,
        evaluations,
        intervals,
    })
}

/// Integrates `f` over `[a, ∞)` through the substitution
/// `x = a + scale·u/(1-u)`, `u ∈ [0, 1)`.
///
/// `scale` should sit near where the integrand's mass lives.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    scale: f64,
    tol: Tolerance,
) -> Result<QuadResult> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::domain("scale", scale, "must be finite and > 0"));
    }
    let mapped = |u: f64| {
        let one_minus = 1.0 - u;
        let x = a + scale * u / one_minus;
        let jacobian = scale / (one_minus * one_minus);
        let fx = f(x);
        // f decays faster than the jacobian grows near u = 1
        if fx == 0.0 {
            0.0
        } else {
            fx * jacobian
        }
    };
    integrate(mapped, 0.0, 1.0, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, Tolerance::relative(1e-12)).unwrap();
        assert!((r.value - 8.0).abs() < 1e-13);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        let r = integrate(|x| x, 1.0, 0.0, Tolerance::relative(1e-12)).unwrap();
        assert!((r.value + 0.5).abs() < 1e-14);
        let r = integrate(|x| x, 3.0, 3.0, Tolerance::relative(1e-12)).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn peaked_integrand_converges() {
        let r = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, Tolerance::relative(1e-10)).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0 / 1e-2f64).atan();
        assert!(((r.value - exact) / exact).abs() < 1e-10);
        assert!(r.intervals > 1);
    }

    #[test]
    fn semi_infinite_exponential() {
        let r = integrate_to_infinity(|x| (-x).exp(), 0.0, 1.0, Tolerance::relative(1e-12)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate_to_infinity(|x| (-2.0 * x).exp(), 3.0, 0.5, Tolerance::relative(1e-12)).unwrap();
        assert!((r.value - 0.5 * (-6.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn reports_nonconvergence() {
        let tol = Tolerance {
            abs: 0.0,
            rel: 1e-14,
            max_intervals: 3,
        };
        let err = integrate(|x| x.abs().sqrt().sin() / x.abs().max(1e-300).sqrt(), -1.0, 1.0, tol);
        assert!(matches!(err, Err(Error::Quadrature { .. })));
        let err = integrate(|_| f64::NAN, 0.0, 1.0, Tolerance::relative(1e-8));
        assert!(matches!(err, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn rejects_bad_scale() {
        assert!(integrate_to_infinity(|x| x, 0.0, 0.0, Tolerance::relative(1e-8)).is_err());
    }
}
