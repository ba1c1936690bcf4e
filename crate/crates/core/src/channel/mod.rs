//! Network geometry, radio parameters, Rayleigh fading draws and the
//! distribution functions of sorted channel gains.
//!
//! Every small-scale gain `|g|²` is a unit-mean exponential. A node at
//! distance `r` sees power gain `|g|² / r^α`, i.e. an exponential with rate
//! `r^α`. The eavesdropper combines `N` independent branches, so its gain is
//! Gamma distributed with shape `N` and rate `r_E^α`.

mod order_stats;

pub use order_stats::{
    binomial, max_cdf_terms, min_max_cdf_terms, min_max_cdf_weights, min_max_pdf_terms,
    pair_cdf_terms, pair_interval_terms, pair_pdf_terms, top_pair_cdf_terms, top_pair_pdf_terms,
    top_pair_weight, triple_cdf_terms, triple_pdf_terms, ExpSum, ExpTerm,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::specfun::gamma_int;

/// Node distances (metres) and the path-loss exponent.
///
/// `r_f` is the common grant-free distance used by every closed form.
/// `user_distances`, when present, gives each grant-free user its own
/// distance for simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub r_b: f64,
    pub r_f: f64,
    pub r_e: f64,
    pub alpha: f64,
    pub user_distances: Option<Vec<f64>>,
}

impl Geometry {
    pub fn new(r_b: f64, r_f: f64, r_e: f64, alpha: f64) -> Result<Self> {
        for (name, v) in [("r_B", r_b), ("r_F", r_f), ("r_E", r_e), ("alpha", alpha)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Geometry {
            r_b,
            r_f,
            r_e,
            alpha,
            user_distances: None,
        })
    }

    /// Gives each grant-free user its own distance. The list length must
    /// match the user count of the radio configuration it is used with.
    pub fn with_user_distances(mut self, distances: Vec<f64>) -> Result<Self> {
        if distances.is_empty() {
            return Err(Error::config("per-user distance list is empty"));
        }
        if let Some(d) = distances.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
            return Err(Error::config(format!("user distance must be positive, got {d}")));
        }
        self.user_distances = Some(distances);
        Ok(self)
    }

    /// `r_B^α`, the rate of the grant-based user's exponential gain.
    pub fn rate_b(&self) -> f64 {
        self.r_b.powf(self.alpha)
    }

    /// `r_F^α`.
    pub fn rate_f(&self) -> f64 {
        self.r_f.powf(self.alpha)
    }

    /// `r_E^α`.
    pub fn rate_e(&self) -> f64 {
        self.r_e.powf(self.alpha)
    }

    /// Path-loss rate `r_k^α` of grant-free user `k` (0-based).
    pub fn user_rate(&self, k: usize) -> f64 {
        match &self.user_distances {
            Some(d) => d[k].powf(self.alpha),
            None => self.rate_f(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        match &self.user_distances {
            None => true,
            Some(d) => d.iter().all(|&r| r == d[0]),
        }
    }

    pub(crate) fn check_users(&self, k_users: u32) -> Result<()> {
        match &self.user_distances {
            Some(d) if d.len() != k_users as usize => Err(Error::config(format!(
                "{} user distances given for K = {k_users}",
                d.len()
            ))),
            _ => Ok(()),
        }
    }
}

/// Transmit SNRs (linear), target rates (bits/s/Hz), eavesdropper antenna
/// count and grant-free user count.
#[derive(Debug, Clone, PartialEq)]
pub struct RadioConfig {
    pub rho_b: f64,
    pub rho_f: f64,
    pub rate_b: f64,
    pub rate_th: f64,
    pub n_antennas: u32,
    pub k_users: u32,
}

impl RadioConfig {
    pub fn new(
        rho_b: f64,
        rho_f: f64,
        rate_b: f64,
        rate_th: f64,
        n_antennas: u32,
        k_users: u32,
    ) -> Result<Self> {
        for (name, v) in [("rho_B", rho_b), ("rho_F", rho_f), ("R_B", rate_b), ("R_th", rate_th)]
        {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{name} must be positive, got {v}")));
            }
        }
        if n_antennas == 0 {
            return Err(Error::config("eavesdropper antenna count must be >= 1"));
        }
        if k_users == 0 {
            return Err(Error::config("grant-free user count must be >= 1"));
        }
        Ok(RadioConfig {
            rho_b,
            rho_f,
            rate_b,
            rate_th,
            n_antennas,
            k_users,
        })
    }

    pub fn thresholds(&self) -> DerivedThresholds {
        DerivedThresholds::new(self)
    }
}

/// SINR thresholds implied by the target rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedThresholds {
    /// `2^{R_B}`
    pub theta_b: f64,
    /// `2^{R_B} − 1`
    pub eps_b: f64,
    /// `eps_b / rho_B`: the grant-based user meets its rate alone iff its gain exceeds this.
    pub alpha_b: f64,
    /// `2^{R_th}`
    pub theta_th: f64,
    /// `2^{R_th} − 1`
    pub eps_th: f64,
    /// `eps_th / rho_F`
    pub alpha_th: f64,
}

impl DerivedThresholds {
    pub fn new(config: &RadioConfig) -> Self {
        let theta_b = config.rate_b.exp2();
        let eps_b = theta_b - 1.0;
        let theta_th = config.rate_th.exp2();
        let eps_th = theta_th - 1.0;
        DerivedThresholds {
            theta_b,
            eps_b,
            alpha_b: eps_b / config.rho_b,
            theta_th,
            eps_th,
            alpha_th: eps_th / config.rho_f,
        }
    }

    /// `ε_B · ε_th`, whose position relative to 1 selects the closed-form branch.
    pub fn eps_product(&self) -> f64 {
        self.eps_b * self.eps_th
    }
}

/// One fading draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Grant-based power gain `|g_B|² / r_B^α`.
    pub hb2: f64,
    /// Grant-free power gains sorted ascending.
    pub hk2: Vec<f64>,
    /// `order[i]` is the original index of the user holding `hk2[i]`.
    pub order: Vec<usize>,
    /// Eavesdropper combined gain `Σ_i |g_i|² / r_E^α`.
    pub he2: f64,
    /// Small-scale grant-free gains `|g_k|²` in original user order.
    pub unsorted_gk2: Vec<f64>,
    /// Uniform draw in `[0, 1)` reserved for random scheduling.
    pub scheduler_draw: f64,
}

/// The random stream for trial `trial` under base seed `seed`.
///
/// Each trial gets its own ChaCha stream, so a trial's draws do not depend
/// on which worker runs it or in what order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn unit_exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    -(1.0 - u).ln()
}

/// Draws one realization.
pub fn sample<R: Rng + ?Sized>(
    geometry: &Geometry,
    config: &RadioConfig,
    rng: &mut R,
) -> ChannelRealization {
    let k = config.k_users as usize;
    let mut r = ChannelRealization {
        hb2: 0.0,
        hk2: Vec::with_capacity(k),
        order: Vec::with_capacity(k),
        he2: 0.0,
        unsorted_gk2: Vec::with_capacity(k),
        scheduler_draw: 0.0,
    };
    resample(geometry, config, rng, &mut r);
    r
}

/// Overwrites `out` with a fresh draw, reusing its buffers.
pub fn resample<R: Rng + ?Sized>(
    geometry: &Geometry,
    config: &RadioConfig,
    rng: &mut R,
    out: &mut ChannelRealization,
) {
    let k = config.k_users as usize;
    out.hb2 = unit_exponential(rng) / geometry.rate_b();
    out.unsorted_gk2.clear();
    for _ in 0..k {
        out.unsorted_gk2.push(unit_exponential(rng));
    }
    let mut e = 0.0;
    for _ in 0..config.n_antennas {
        e += unit_exponential(rng);
    }
    out.he2 = e / geometry.rate_e();
    out.scheduler_draw = rng.random();

    out.order.clear();
    out.order.extend(0..k);
    out.hk2.clear();
    for i in 0..k {
        out.hk2.push(out.unsorted_gk2[i] / geometry.user_rate(i));
    }
    let gains = &out.hk2;
    out.order.sort_by(|&a, &b| gains[a].total_cmp(&gains[b]));
    out.hk2.sort_by(f64::total_cmp);
}

/// Density of the eavesdropper gain: Gamma with shape `N`, rate `r_E^α`.
pub fn pdf_he(x: f64, geometry: &Geometry, config: &RadioConfig) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("pdf_he argument {x} must be >= 0")));
    }
    let n = config.n_antennas;
    let a = geometry.rate_e();
    if x == 0.0 {
        return Ok(if n == 1 { a } else { 0.0 });
    }
    let log = n as f64 * a.ln() + (n - 1) as f64 * x.ln() - a * x - gamma_int(n).ln();
    Ok(log.exp())
}

/// CDF of the strongest of `K` grant-free gains, `Σ_i φ_i e^{−i r_F^α x}`.
pub fn cdf_hk(x: f64, geometry: &Geometry, config: &RadioConfig) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("cdf_hk argument {x} must be >= 0")));
    }
    Ok(max_cdf_terms(config.k_users, geometry.rate_f()).eval(&[x]))
}
