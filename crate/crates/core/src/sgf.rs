//! Semi-grant-free admission on one fading draw: interference tolerance,
//! grouping, hybrid SIC decoding order, scheduling and secrecy rates.
//!
//! ```
//! use sgf_secrecy::channel::{Geometry, RadioConfig, ChannelRealization};
//! use sgf_secrecy::sgf::{schedule, Scheme, Stage};
//!
//! let config = RadioConfig::new(10.0, 10.0, 0.9, 0.1, 2, 1).unwrap();
//! let th = config.thresholds();
//! // The grant-based user is in outage on its own, so the grant-free user
//! // must be decoded first.
//! let draw = ChannelRealization {
//!     hb2: 0.5 * th.alpha_b,
//!     hk2: vec![0.3],
//!     order: vec![0],
//!     he2: 0.01,
//!     unsorted_gk2: vec![0.3],
//!     scheduler_draw: 0.0,
//! };
//! let out = schedule(&draw, &config, &th, Scheme::Bus);
//! assert_eq!(out.stage, Stage::First);
//! assert_eq!(out.size_sii, 0);
//! ```

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::channel::{ChannelRealization, DerivedThresholds, RadioConfig};
use crate::error::{Error, Result};

/// SIC stage at which the scheduled grant-free signal is decoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    /// Decoded first, with the grant-based signal as interference.
    First,
    /// Decoded after the grant-based signal has been removed.
    Second,
}

/// Grant-free user scheduling rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Best user: the largest achievable rate.
    Bus,
    /// The largest value of the user's own gain CDF.
    Cus,
    /// Uniformly random user.
    Rus,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Bus, Scheme::Cus, Scheme::Rus];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Bus => "BUS",
            Scheme::Cus => "CUS",
            Scheme::Rus => "RUS",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "BUS" => Ok(Scheme::Bus),
            "CUS" => Ok(Scheme::Cus),
            "RUS" => Ok(Scheme::Rus),
            other => Err(Error::config(format!("unknown scheme {other:?}"))),
        }
    }
}

/// Everything decided on one draw.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodingOutcome {
    /// Largest grant-free received power the grant-based user tolerates.
    pub tau: f64,
    /// Number of users whose received power is below `tau`.
    pub size_sii: usize,
    /// Original index of the admitted user.
    pub scheduled: usize,
    /// Sorted position of the admitted user (0 = weakest).
    pub position: usize,
    pub stage: Stage,
    pub rate_gf: f64,
    pub rate_gb: f64,
    pub rate_e: f64,
    pub secrecy_gf: f64,
    pub secrecy_gb: f64,
}

/// `max{0, |h_B|²/α_B − 1}`.
pub fn tolerance_tau(hb2: f64, th: &DerivedThresholds) -> f64 {
    (hb2 / th.alpha_b - 1.0).max(0.0)
}

/// Sorted positions of the two groups. The low-power group is always a
/// prefix of the sorted list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groups {
    /// Users decoded in the second stage when admitted (`ρ_F h² < τ`).
    pub second: Range<usize>,
    /// Users decoded in the first stage when admitted.
    pub first: Range<usize>,
}

impl Groups {
    pub fn size_sii(&self) -> usize {
        self.second.len()
    }
}

/// Splits the sorted users by `ρ_F h² < τ`. A tie goes to the first-stage
/// group.
pub fn group_users(realization: &ChannelRealization, config: &RadioConfig, tau: f64) -> Groups {
    let k = realization.hk2.len();
    let split = realization
        .hk2
        .partition_point(|&h| config.rho_f * h < tau);
    debug_assert!(realization.hk2[split..].iter().all(|&h| config.rho_f * h >= tau));
    Groups {
        second: 0..split,
        first: split..k,
    }
}

/// Rate of a grant-free user decoded first, against the grant-based signal.
pub fn first_stage_rate(h2: f64, hb2: f64, config: &RadioConfig) -> f64 {
    (config.rho_f * h2 / (1.0 + config.rho_b * hb2)).ln_1p() / std::f64::consts::LN_2
}

/// Rate of a grant-free user decoded after the grant-based signal.
pub fn second_stage_rate(h2: f64, config: &RadioConfig) -> f64 {
    (config.rho_f * h2).ln_1p() / std::f64::consts::LN_2
}

/// Rate and stage for the user at sorted `position` under the decoding-order
/// rule: second stage iff the user is in the low-power group.
pub fn candidate_rate(
    position: usize,
    realization: &ChannelRealization,
    config: &RadioConfig,
    groups: &Groups,
) -> (f64, Stage) {
    let h2 = realization.hk2[position];
    if groups.second.contains(&position) {
        (second_stage_rate(h2, config), Stage::Second)
    } else {
        (first_stage_rate(h2, realization.hb2, config), Stage::First)
    }
}

/// Best-user choice: the strongest user at the first stage, or the strongest
/// low-power user at the second stage, whichever has the larger rate. A tie
/// goes to the first stage.
fn best_position(groups: &Groups, realization: &ChannelRealization, config: &RadioConfig) -> usize {
    let k = realization.hk2.len();
    let s = groups.size_sii();
    if s == 0 || s == k {
        return k - 1;
    }
    let r1 = first_stage_rate(realization.hk2[k - 1], realization.hb2, config);
    let r2 = second_stage_rate(realization.hk2[s - 1], config);
    if r2 > r1 {
        s - 1
    } else {
        k - 1
    }
}

/// Admits one grant-free user and evaluates all rates.
pub fn schedule(
    realization: &ChannelRealization,
    config: &RadioConfig,
    th: &DerivedThresholds,
    scheme: Scheme,
) -> DecodingOutcome {
    let k = realization.hk2.len();
    let tau = tolerance_tau(realization.hb2, th);
    let groups = group_users(realization, config, tau);
    let position = match scheme {
        Scheme::Bus => best_position(&groups, realization, config),
        Scheme::Cus => {
            let user = argmax(&realization.unsorted_gk2);
            position_of(realization, user)
        }
        Scheme::Rus => {
            let user = ((realization.scheduler_draw * k as f64) as usize).min(k - 1);
            position_of(realization, user)
        }
    };
    let (rate_gf, stage) = candidate_rate(position, realization, config, &groups);
    let h2 = realization.hk2[position];
    let rate_gb = match stage {
        Stage::First => (config.rho_b * realization.hb2).ln_1p(),
        Stage::Second => (config.rho_b * realization.hb2 / (1.0 + config.rho_f * h2)).ln_1p(),
    } / std::f64::consts::LN_2;
    let rate_e = (config.rho_f * realization.he2).ln_1p() / std::f64::consts::LN_2;
    DecodingOutcome {
        tau,
        size_sii: groups.size_sii(),
        scheduled: realization.order[position],
        position,
        stage,
        rate_gf,
        rate_gb,
        rate_e,
        secrecy_gf: (rate_gf - rate_e).max(0.0),
        secrecy_gb: (rate_gb - rate_e).max(0.0),
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

fn position_of(realization: &ChannelRealization, user: usize) -> usize {
    realization
        .order
        .iter()
        .position(|&u| u == user)
        .expect("order is a permutation")
}

/// 1 iff the grant-free secrecy rate falls strictly below `rate_th`.
pub fn secrecy_outage_indicator(outcome: &DecodingOutcome, rate_th: f64) -> bool {
    outcome.secrecy_gf < rate_th
}

/// 1 iff the grant-based secrecy rate falls strictly below `rate_th`.
pub fn gb_outage_indicator(outcome: &DecodingOutcome, rate_th: f64) -> bool {
    outcome.secrecy_gb < rate_th
}
