//! Fair power allocation for downlink non-orthogonal multiple access (NOMA).
//!
//! The crate covers the two-user model where every user is guaranteed at
//! least the capacity it would get from orthogonal time sharing (OMA), and
//! its extensions:
//!
//! * [`twouser`]: instantaneous OMA/NOMA capacities and the fair allocation
//!   region `[a_inf, a_sup]` for the stronger user's power fraction.
//! * [`ergodic`]: expected capacities under i.i.d. Rayleigh fading.
//! * [`outage`]: outage probabilities below a target rate.
//! * [`pairing`]: opportunistic pairing of the weakest and strongest of `K`
//!   users.
//! * [`multiuser`]: `K`-user power vectors that keep every user at or above
//!   its OMA rate.
//! * [`mcsim`]: a deterministic, parallel Monte Carlo engine used both as an
//!   oracle for the closed forms and as the generator for figure data.
//!
//! [`specfun`] and [`quad`] hold the special functions and adaptive
//! quadrature the closed forms rely on.
//!
//! All capacities are in b/s/Hz and every SNR is linear; decibels only
//! appear at the command-line boundary.

// `!(x > 0.0)` is the NaN-rejecting spelling used throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ergodic;
pub mod error;
pub mod mcsim;
pub mod multiuser;
pub mod outage;
pub mod pairing;
pub mod quad;
pub mod specfun;
pub mod twouser;

pub use error::{Error, Result};
pub use twouser::{ChannelPair, FairRegion, Policy, SystemParams};
