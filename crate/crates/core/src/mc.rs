//! Monte Carlo estimators.
//!
//! Trial `t` always uses the random stream [`trial_rng`]`(seed, t)`. Trials are
//! cut into fixed blocks, each block is tallied with integer counters, and the
//! counters are summed. The result is therefore bit-identical for any number
//! of worker threads.
//!
//! ```
//! use sgf_secrecy::channel::{Geometry, RadioConfig};
//! use sgf_secrecy::mc::estimate_sop;
//! use sgf_secrecy::sgf::Scheme;
//!
//! let geometry = Geometry::new(10.0, 10.0, 10.0, 2.2).unwrap();
//! // A 50 bit/s/Hz secrecy target is out of reach.
//! let config = RadioConfig::new(10.0, 10.0, 0.9, 50.0, 2, 1).unwrap();
//! let est = estimate_sop(&geometry, &config, Scheme::Bus, 1000, 7).unwrap();
//! assert_eq!(est.p_hat, 1.0);
//! ```

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::channel::{resample, sample, trial_rng, ChannelRealization, Geometry, RadioConfig};
use crate::error::{Error, Result};
use crate::sgf::{gb_outage_indicator, schedule, secrecy_outage_indicator, Scheme, Stage};

/// Trials per work unit.
const BLOCK: u64 = 4096;

/// Default number of trials per point.
pub const DEFAULT_TRIALS: u64 = 1_000_000;

/// A Monte Carlo probability estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct SopEstimate {
    pub p_hat: f64,
    pub trials: u64,
    /// `√(p̂(1−p̂)/n)`
    pub stderr: f64,
    pub seed: u64,
    /// Probabilities of disjoint sub-events of the outage event, keyed by
    /// `stage1_outage` / `stage2_outage` for one user and `size_SII=k` for
    /// several.
    pub breakdown: BTreeMap<String, f64>,
}

impl SopEstimate {
    fn from_counts(hits: u64, trials: u64, seed: u64, breakdown: BTreeMap<String, f64>) -> Self {
        let p = hits as f64 / trials as f64;
        SopEstimate {
            p_hat: p,
            trials,
            stderr: (p * (1.0 - p) / trials as f64).sqrt(),
            seed,
            breakdown,
        }
    }
}

fn check_inputs(geometry: &Geometry, config: &RadioConfig, trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::domain("trials must be >= 1"));
    }
    geometry.check_users(config.k_users)
}

/// Runs `trials` draws and returns `bins` counters; `classify` names the
/// counter to bump for a draw, if any.
pub fn tally<F>(
    geometry: &Geometry,
    config: &RadioConfig,
    trials: u64,
    seed: u64,
    bins: usize,
    classify: F,
) -> Vec<u64>
where
    F: Fn(&ChannelRealization) -> Option<usize> + Sync,
{
    let blocks = trials.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut counts = vec![0u64; bins];
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(trials);
            let mut rng = trial_rng(seed, lo);
            let mut draw = sample(geometry, config, &mut rng);
            for t in lo..hi {
                if t > lo {
                    rng = trial_rng(seed, t);
                    resample(geometry, config, &mut rng, &mut draw);
                }
                if let Some(i) = classify(&draw) {
                    counts[i] += 1;
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

/// Probability of an arbitrary event on a draw.
pub fn estimate_event<F>(
    geometry: &Geometry,
    config: &RadioConfig,
    trials: u64,
    seed: u64,
    event: F,
) -> Result<SopEstimate>
where
    F: Fn(&ChannelRealization) -> bool + Sync,
{
    check_inputs(geometry, config, trials)?;
    let c = tally(geometry, config, trials, seed, 1, |d| event(d).then_some(0));
    Ok(SopEstimate::from_counts(c[0], trials, seed, BTreeMap::new()))
}

fn outage_estimate<F>(
    geometry: &Geometry,
    config: &RadioConfig,
    scheme: Scheme,
    trials: u64,
    seed: u64,
    outage: F,
) -> Result<SopEstimate>
where
    F: Fn(&crate::sgf::DecodingOutcome) -> bool + Sync,
{
    check_inputs(geometry, config, trials)?;
    let th = config.thresholds();
    let k = config.k_users as usize;
    // Bins 0..=k count outages by |S_II|; bins k+1, k+2 by stage.
    let counts = tally(geometry, config, trials, seed, k + 3, |d| {
        let o = schedule(d, config, &th, scheme);
        if !outage(&o) {
            return None;
        }
        Some(match (k, o.stage) {
            (1, Stage::First) => k + 1,
            (1, Stage::Second) => k + 2,
            _ => o.size_sii,
        })
    });
    let hits: u64 = counts.iter().sum();
    let n = trials as f64;
    let mut breakdown = BTreeMap::new();
    if k == 1 {
        breakdown.insert("stage1_outage".to_string(), counts[2] as f64 / n);
        breakdown.insert("stage2_outage".to_string(), counts[3] as f64 / n);
    } else {
        for (s, c) in counts.iter().take(k + 1).enumerate() {
            breakdown.insert(format!("size_SII={s}"), *c as f64 / n);
        }
    }
    Ok(SopEstimate::from_counts(hits, trials, seed, breakdown))
}

/// Grant-free secrecy outage probability.
pub fn estimate_sop(
    geometry: &Geometry,
    config: &RadioConfig,
    scheme: Scheme,
    trials: u64,
    seed: u64,
) -> Result<SopEstimate> {
    let r_th = config.rate_th;
    outage_estimate(geometry, config, scheme, trials, seed, |o| {
        secrecy_outage_indicator(o, r_th)
    })
}

/// Grant-based secrecy outage probability.
pub fn estimate_gb_sop(
    geometry: &Geometry,
    config: &RadioConfig,
    scheme: Scheme,
    trials: u64,
    seed: u64,
) -> Result<SopEstimate> {
    let r_th = config.rate_th;
    outage_estimate(geometry, config, scheme, trials, seed, |o| {
        gb_outage_indicator(o, r_th)
    })
}

/// Empirical distribution of `|S_II|` over `0..=K`.
pub fn estimate_group_distribution(
    geometry: &Geometry,
    config: &RadioConfig,
    trials: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    check_inputs(geometry, config, trials)?;
    let th = config.thresholds();
    let k = config.k_users as usize;
    let counts = tally(geometry, config, trials, seed, k + 1, |d| {
        let tau = crate::sgf::tolerance_tau(d.hb2, &th);
        Some(crate::sgf::group_users(d, config, tau).size_sii())
    });
    Ok(counts.iter().map(|&c| c as f64 / trials as f64).collect())
}
