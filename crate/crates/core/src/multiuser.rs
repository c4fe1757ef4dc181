//! K-user downlink NOMA with successive interference cancellation.
//!
//! Users are numbered `1..=K` from weakest to strongest. User `k` decodes
//! and removes the messages of users `1..k` and treats the power of users
//! `k+1..=K` as noise. Under OMA each user gets `1/K` of the time.
//!
//! Two allocations guarantee every user at least its OMA capacity:
//!
//! * the minimum-power b-vector, built from user K downward so that each
//!   user gets exactly its OMA capacity;
//! * the full a-vector, built from user 1 upward assuming the not yet
//!   allocated power `A_{k-1} - a_k` interferes with user `k`.
//!
//! Powers `(1+y)^{1/K}` are evaluated as `exp(ln(1+y)/K)` through
//! `ln_1p`/`expm1`.

use std::f64::consts::LN_2;

use rand_chacha::rand_core::RngCore;

use crate::error::{positive, Error, Result};
use crate::mcsim::unit_exponential;

/// Channel gains sorted ascending. Ties are kept in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    gains: Vec<f64>,
}

impl ChannelSet {
    pub fn new(mut gains: Vec<f64>) -> Result<Self> {
        if gains.is_empty() {
            return Err(Error::Config("a channel set needs at least one user".into()));
        }
        for &g in &gains {
            positive("gain", g)?;
        }
        // stable: equal gains keep their index order
        gains.sort_by(f64::total_cmp);
        Ok(Self { gains })
    }

    /// `k` i.i.d. exponential gains of mean `beta`.
    pub fn sample<R: RngCore>(k: usize, beta: f64, rng: &mut R) -> Result<Self> {
        let beta = positive("beta", beta)?;
        Self::new((0..k).map(|_| beta * unit_exponential(rng.next_u64())).collect())
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    fn gain(&self, user: usize) -> Result<f64> {
        if user == 0 || user > self.gains.len() {
            return Err(Error::Index {
                index: user,
                count: self.gains.len(),
            });
        }
        Ok(self.gains[user - 1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationKind {
    /// Minimum power, OMA capacity exactly.
    BMin,
    /// All power, at least OMA capacity.
    AFull,
}

/// Power fractions of users `1..=K` plus the unallocated remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationVector {
    pub coeffs: Vec<f64>,
    pub residual: f64,
    pub kind: AllocationKind,
}

/// Levels `A_0 = 1`, `A_k = 1 - Σ_{l≤k} a_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceLadder {
    pub levels: Vec<f64>,
}

impl InterferenceLadder {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.levels.windows(2).all(|w| w[1] < w[0])
    }
}

impl AllocationVector {
    pub fn total(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    pub fn ladder(&self) -> InterferenceLadder {
        let mut levels = Vec::with_capacity(self.coeffs.len() + 1);
        let mut level = 1.0;
        levels.push(level);
        for c in &self.coeffs {
            level -= c;
            levels.push(level);
        }
        InterferenceLadder { levels }
    }

    /// Hands the residual to user K. User K interferes with nobody, so this
    /// raises its capacity and leaves everyone else's unchanged.
    pub fn with_residual_to_strongest(&self) -> AllocationVector {
        let mut coeffs = self.coeffs.clone();
        if let Some(last) = coeffs.last_mut() {
            *last += self.residual;
        }
        AllocationVector {
            coeffs,
            residual: 0.0,
            kind: self.kind,
        }
    }
}

/// `(1/K) log2(1 + xi·g_k)` for user `k` (1-based).
pub fn oma_capacity_k(xi: f64, set: &ChannelSet, user: usize) -> Result<f64> {
    let y = positive("xi", xi)? * set.gain(user)?;
    Ok(y.ln_1p() / (set.len() as f64 * LN_2))
}

/// `log2(1 + c_k·y_k / (1 + y_k·Σ_{l>k} c_l))` for user `k` (1-based).
pub fn noma_capacity_k(xi: f64, set: &ChannelSet, coeffs: &[f64], user: usize) -> Result<f64> {
    let y = positive("xi", xi)? * set.gain(user)?;
    if coeffs.len() != set.len() {
        return Err(Error::Index {
            index: coeffs.len(),
            count: set.len(),
        });
    }
    let interference: f64 = coeffs[user..].iter().sum();
    Ok(sic_rate(y, coeffs[user - 1], interference))
}

fn sic_rate(y: f64, own: f64, interference: f64) -> f64 {
    ((y * (interference + own)).ln_1p() - (y * interference).ln_1p()) / LN_2
}

/// `(1+y)^{1/K} - 1`.
fn root_minus_one(y: f64, k: usize) -> f64 {
    (y.ln_1p() / k as f64).exp_m1()
}

/// `1 - (1+y)^{-1/K}`.
fn one_minus_inverse_root(y: f64, k: usize) -> f64 {
    -(-y.ln_1p() / k as f64).exp_m1()
}

/// Minimum-power allocation: every user gets exactly its OMA capacity.
pub fn min_alloc_b(xi: f64, set: &ChannelSet) -> Result<AllocationVector> {
    let xi = positive("xi", xi)?;
    let k = set.len();
    if k == 1 {
        return Ok(single_user(AllocationKind::BMin));
    }
    let mut coeffs = vec![0.0; k];
    let mut above = 0.0;
    for (c, &g) in coeffs.iter_mut().zip(&set.gains).rev() {
        let y = xi * g;
        *c = root_minus_one(y, k) * (1.0 + y * above) / y;
        above += *c;
    }
    Ok(AllocationVector {
        residual: 1.0 - above,
        coeffs,
        kind: AllocationKind::BMin,
    })
}

/// Full allocation: user `k` takes `a_k` with the rest of the unallocated
/// power counted as interference, and the remainder `A_K` is returned as the
/// residual.
pub fn full_alloc_a(xi: f64, set: &ChannelSet) -> Result<AllocationVector> {
    let xi = positive("xi", xi)?;
    let k = set.len();
    if k == 1 {
        return Ok(single_user(AllocationKind::AFull));
    }
    let mut coeffs = Vec::with_capacity(k);
    let mut level = 1.0;
    for &g in &set.gains {
        let y = xi * g;
        let a = (1.0 + level * y) * one_minus_inverse_root(y, k) / y;
        level -= a;
        coeffs.push(a);
    }
    Ok(AllocationVector {
        coeffs,
        // nonnegative in exact arithmetic; rounding can leave -1 ulp
        residual: level.max(0.0),
        kind: AllocationKind::AFull,
    })
}

fn single_user(kind: AllocationKind) -> AllocationVector {
    AllocationVector {
        coeffs: vec![1.0],
        residual: 0.0,
        kind,
    }
}

/// `Σ b_k` for SNRs `y` sorted ascending.
pub(crate) fn min_total_power(y: &[f64]) -> f64 {
    let k = y.len();
    if k == 1 {
        return 1.0;
    }
    y.iter().rev().fold(0.0, |above, &y| above + root_minus_one(y, k) * (1.0 + y * above) / y)
}

/// `A_K` of the a-vector for SNRs `y` sorted ascending.
pub(crate) fn full_residual(y: &[f64]) -> f64 {
    let k = y.len();
    if k == 1 {
        return 0.0;
    }
    y.iter()
        .fold(1.0, |level, &y| level - (1.0 + level * y) * one_minus_inverse_root(y, k) / y)
        .max(0.0)
}

/// Per-user capacities under an allocation and their margin over OMA.
#[derive(Debug, Clone, PartialEq)]
pub struct FairnessReport {
    pub oma: Vec<f64>,
    pub noma: Vec<f64>,
    /// `noma - oma` per user.
    pub slacks: Vec<f64>,
}

impl FairnessReport {
    pub fn min_slack(&self) -> f64 {
        self.slacks.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_slack(&self) -> f64 {
        self.slacks.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    /// Every user within `tol` of OMA or above it.
    pub fn is_fair(&self, tol: f64) -> bool {
        self.min_slack() >= -tol
    }
}

/// Recomputes every user's capacity under the interference the allocation
/// actually produces, `Σ_{l>k} c_l`, and compares it with OMA.
pub fn verify_fairness(xi: f64, set: &ChannelSet, alloc: &AllocationVector) -> Result<FairnessReport> {
    let k = set.len();
    let mut oma = Vec::with_capacity(k);
    let mut noma = Vec::with_capacity(k);
    for user in 1..=k {
        oma.push(oma_capacity_k(xi, set, user)?);
        noma.push(noma_capacity_k(xi, set, &alloc.coeffs, user)?);
    }
    let slacks = noma.iter().zip(&oma).map(|(n, o)| n - o).collect();
    Ok(FairnessReport { oma, noma, slacks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twouser::{allocation_bound, noma_capacity_strong, noma_capacity_weak, oma_capacity};

    fn set(g: &[f64]) -> ChannelSet {
        ChannelSet::new(g.to_vec()).unwrap()
    }

    #[test]
    fn constructor_sorts_and_rejects() {
        assert_eq!(set(&[3.0, 1.0, 2.0]).gains(), &[1.0, 2.0, 3.0]);
        assert!(ChannelSet::new(vec![]).is_err());
        assert!(ChannelSet::new(vec![1.0, 0.0]).is_err());
        assert!(ChannelSet::new(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn oma_examples() {
        let s = set(&[15.0, 15.0, 15.0, 15.0]);
        assert!((oma_capacity_k(1.0, &s, 2).unwrap() - 1.0).abs() < 1e-15);
        let s = set(&[0.7, 2.5]);
        assert!((oma_capacity_k(3.0, &s, 1).unwrap() - oma_capacity(3.0, 0.7).unwrap()).abs() < 1e-15);
        assert!(matches!(oma_capacity_k(1.0, &s, 0), Err(Error::Index { .. })));
        assert!(matches!(oma_capacity_k(1.0, &s, 3), Err(Error::Index { .. })));
        let one = set(&[2.0]);
        assert!((oma_capacity_k(1.5, &one, 1).unwrap() - 4f64.log2()).abs() < 1e-15);
    }

    #[test]
    fn noma_matches_two_user_model() {
        let s = set(&[0.4, 3.0]);
        let (xi, a) = (20.0, 0.3);
        let coeffs = [1.0 - a, a];
        let w = noma_capacity_k(xi, &s, &coeffs, 1).unwrap();
        let st = noma_capacity_k(xi, &s, &coeffs, 2).unwrap();
        assert!((w - noma_capacity_weak(xi, 0.4, a).unwrap()).abs() < 1e-14);
        assert!((st - noma_capacity_strong(xi, 3.0, a).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn lone_coefficient_sees_no_interference() {
        let s = set(&[0.5, 1.0, 2.0]);
        let coeffs = [0.0, 0.6, 0.0];
        let c = noma_capacity_k(10.0, &s, &coeffs, 2).unwrap();
        assert!((c - (1.0 + 0.6 * 10.0f64).log2()).abs() < 1e-14);
    }

    #[test]
    fn single_user_takes_everything() {
        let s = set(&[0.8]);
        assert_eq!(min_alloc_b(5.0, &s).unwrap().coeffs, vec![1.0]);
        assert_eq!(full_alloc_a(5.0, &s).unwrap().coeffs, vec![1.0]);
    }

    #[test]
    fn two_user_a_vector_matches_region_upper_end() {
        for &(g1, g2, xi) in &[(0.3, 1.7, 10.0), (1e-3, 5.0, 1e5), (2.0, 2.0, 1.0)] {
            let a = full_alloc_a(xi, &set(&[g1, g2])).unwrap();
            let a_sup = allocation_bound(xi, g1).unwrap();
            assert!((1.0 - a.coeffs[0] - a_sup).abs() < 1e-12);
        }
    }

    #[test]
    fn b_vector_is_exactly_fair() {
        let s = set(&[0.1, 0.5, 0.9, 2.0, 4.0]);
        let b = min_alloc_b(1e3, &s).unwrap();
        let r = verify_fairness(1e3, &s, &b).unwrap();
        assert!(r.max_abs_slack() <= 1e-9);
        assert!(b.residual > 0.0);
        assert!((min_total_power(&s.gains().iter().map(|g| g * 1e3).collect::<Vec<_>>()) - b.total()).abs() < 1e-15);
    }

    #[test]
    fn a_vector_with_residual_favours_strongest() {
        let xi = 1e3;
        let s = set(&[0.1, 0.5, 0.9, 2.0, 4.0]);
        let a = full_alloc_a(xi, &s).unwrap();
        assert!(a.coeffs.iter().all(|&c| c > 0.0 && c < 1.0));
        assert!(a.total() <= 1.0 + 1e-12);
        assert!(a.ladder().is_strictly_decreasing());
        let y: Vec<f64> = s.gains().iter().map(|g| g * xi).collect();
        assert!((full_residual(&y) - a.residual).abs() < 1e-15);
        let given = a.with_residual_to_strongest();
        let r = verify_fairness(xi, &s, &given).unwrap();
        assert!(r.is_fair(1e-9));
        if a.residual > 0.0 {
            assert!(r.slacks[4] > 0.0);
        }
    }
}
