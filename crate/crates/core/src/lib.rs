//! Secrecy outage of a NOMA semi-grant-free uplink.
//!
//! One grant-based user and `K` grant-free users share a channel; the base
//! station decodes them with hybrid SIC and admits one grant-free user chosen
//! by a scheduler. A passive eavesdropper with `N` antennas listens in.
//!
//! The crate estimates the grant-free user's secrecy outage probability two
//! ways: by Monte Carlo ([`mc`]) and by closed forms and high-SNR limits
//! ([`analytic`]). [`cli`] drives parameter sweeps that compare them.
//!
//! ```
//! use sgf_secrecy::{analytic, channel::{Geometry, RadioConfig}, mc, sgf::Scheme};
//!
//! let g = Geometry::new(10.0, 10.0, 10.0, 2.2).unwrap();
//! let c = RadioConfig::new(10.0, 10.0, 0.9, 0.1, 2, 1).unwrap();
//! let exact = analytic::sop_single_exact(&g, &c).unwrap().total;
//! let sim = mc::estimate_sop(&g, &c, Scheme::Bus, 200_000, 7).unwrap();
//! assert!((sim.p_hat - exact).abs() < 4.0 * sim.stderr + 2e-3);
//! ```

// `!(x > 0.0)` is used on purpose so NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
pub mod cli;
pub mod error;
pub mod mc;
pub mod sgf;
pub mod specfun;

pub use error::{Error, Result};

/// `10^{dB/10}`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `10 log10(x)`.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
