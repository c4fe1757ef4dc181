//! Test-only numerical oracles, deliberately independent of the library's
//! quadrature.

#![allow(dead_code)]

/// Adaptive Simpson on `[a, b]` to absolute tolerance `eps`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, eps, 60)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // the last clause stops refinement once only rounding noise is left
    if depth == 0 || delta.abs() <= 15.0 * eps || delta.abs() <= 1e-15 * (left + right).abs() {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

/// Composite Gauss–Legendre (5-point) with `n` equal panels.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        0.538_469_310_105_683_1,
        -0.538_469_310_105_683_1,
        0.906_179_845_938_664,
        -0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let c = a + (i as f64 + 0.5) * h;
        let panel: f64 = X.iter().zip(W).map(|(x, w)| w * f(c + 0.5 * h * x)).sum();
        total += 0.5 * h * panel;
    }
    total
}

pub fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

pub fn harmonic(k: usize) -> f64 {
    (1..=k).rev().map(|i| 1.0 / i as f64).sum()
}

/// `|estimate - truth| ≤ n` standard errors, with a binomial model error
/// `√(p(1-p)/N)` when `truth` is a probability.
pub fn within_binomial(mean: f64, trials: u64, truth: f64, n: f64) -> bool {
    let se = (truth * (1.0 - truth) / trials as f64).sqrt();
    (mean - truth).abs() <= n * se
}
