//! High-SNR limits.

use crate::channel::{
    binomial, max_cdf_terms, min_max_cdf_weights, top_pair_weight, triple_cdf_terms, Geometry,
    RadioConfig,
};
use crate::error::{Error, Result};
use crate::specfun::tail_ratio;

/// Limit as `ρ_B → ∞`: the grant-free user is always decoded second.
/// `1 − e^{−r_F^α α_th} (1 + (r_F/r_E)^α θ_th)^{−N}`.
pub fn sop_single_asym_rho_b(geometry: &Geometry, config: &RadioConfig) -> f64 {
    let th = config.thresholds();
    let ratio = (geometry.r_f / geometry.r_e).powf(geometry.alpha);
    1.0 - (-geometry.rate_f() * th.alpha_th).exp()
        * (1.0 + ratio * th.theta_th).powi(-(config.n_antennas as i32))
}

/// Limit as `ρ_F → ∞`: the grant-free user is always decoded first and only
/// the eavesdropper-to-interference balance matters.
///
/// `1 − (r_B/r_F)^{Nα} (r_E^α/(ρ_B θ))^N e^z Γ(1−N, z)` with
/// `z = r_B^α (θ + (r_E/r_F)^α)/(ρ_B θ)`, evaluated in the equivalent
/// overflow-free form `1 − (r_E^α/(r_E^α + r_F^α θ))^N · z^N e^z Γ(1−N, z)`.
pub fn sop_single_asym_rho_f(geometry: &Geometry, config: &RadioConfig) -> f64 {
    let th = config.thresholds();
    let (ab, af, ae) = (geometry.rate_b(), geometry.rate_f(), geometry.rate_e());
    let theta = th.theta_th;
    let z = ab * (ae + af * theta) / (af * theta * config.rho_b);
    let n = config.n_antennas;
    1.0 - (ae / (ae + af * theta)).powi(n as i32) * tail_ratio(n, z)
}

/// The two parts of the `ρ_B = ρ_F → ∞` limit: the grant-free user decoded
/// first (always in outage) and decoded second.
pub fn sop_single_asym_both_parts(geometry: &Geometry, config: &RadioConfig) -> (f64, f64) {
    let th = config.thresholds();
    let a = geometry.alpha;
    let kappa = 1.0 - 1.0 / (1.0 + th.eps_b * (geometry.r_b / geometry.r_f).powf(a));
    let chi = 1.0
        + th.theta_th * (geometry.r_f / geometry.r_e).powf(a)
        + th.eps_b * th.theta_th * (geometry.r_b / geometry.r_e).powf(a);
    let second = (1.0 - kappa) * (1.0 - chi.powi(-(config.n_antennas as i32)));
    (kappa, second)
}

/// Limit as `ρ_B = ρ_F → ∞`:
/// `1 − (1 + (r_B/r_F)^α ε_B)^{−1} (1 + θ(r_F/r_E)^α + ε_B θ (r_B/r_E)^α)^{−N}`.
pub fn sop_single_asym_both(geometry: &Geometry, config: &RadioConfig) -> f64 {
    let th = config.thresholds();
    let a = geometry.alpha;
    let chi = 1.0
        + th.theta_th * (geometry.r_f / geometry.r_e).powf(a)
        + th.eps_b * th.theta_th * (geometry.r_b / geometry.r_e).powf(a);
    1.0 - chi.powi(-(config.n_antennas as i32))
        / (1.0 + (geometry.r_b / geometry.r_f).powf(a) * th.eps_b)
}

struct Chi {
    rho: f64,
    chi1: f64,
    chi2: f64,
    eps_b: f64,
    n: i32,
}

impl Chi {
    fn new(geometry: &Geometry, config: &RadioConfig) -> Self {
        let th = config.thresholds();
        let a = geometry.alpha;
        Chi {
            rho: (geometry.r_f / geometry.r_b).powf(a),
            chi1: th.theta_th * (geometry.r_f / geometry.r_e).powf(a),
            chi2: th.eps_b * th.theta_th * (geometry.r_b / geometry.r_e).powf(a) + 1.0,
            eps_b: th.eps_b,
            n: config.n_antennas as i32,
        }
    }

    /// `ε_B / (j ρ + ε_B)`: probability that `j` given users all exceed
    /// the limiting tolerance `|h_B|²/ε_B`.
    fn above(&self, j: f64) -> f64 {
        self.eps_b / (j * self.rho + self.eps_b)
    }

    fn pow(&self, m: f64) -> f64 {
        (m * self.chi1 + self.chi2).powi(-self.n)
    }
}

/// Best-user limit as `ρ_B = ρ_F → ∞` with `K ≥ 1` users.
///
/// In the limit a first-stage user is always in outage (the eavesdropper's
/// SNR grows without bound while the user's SINR stays finite), and the best
/// user is decoded second whenever anyone is below the tolerance
/// `|h_B|²/ε_B`. Averaging over the gains gives
/// `1 + Σ_{(j,l) ≠ (0,0)} C(K,j) C(K−j,l) (−1)^l · ε_B/(jρ + ε_B) · ((j+l)χ₁ + χ₂)^{−N}`
/// with `ρ = (r_F/r_B)^α`, `χ₁ = θ(r_F/r_E)^α`, `χ₂ = ε_B θ (r_B/r_E)^α + 1`.
/// For `K = 1` it is the one-user limit [`sop_single_asym_both`].
pub fn sop_multi_asym(geometry: &Geometry, config: &RadioConfig) -> f64 {
    let c = Chi::new(geometry, config);
    let k = config.k_users;
    let mut p = 1.0;
    for j in 0..=k {
        for l in 0..=k - j {
            if j == 0 && l == 0 {
                continue;
            }
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            p += binomial(k, j) * binomial(k - j, l) * sign
                * c.above(j as f64)
                * c.pow((j + l) as f64);
        }
    }
    p
}

/// A term-by-term arrangement of the multi-user high-SNR limit that keeps
/// raw `r^{−α}` factors next to distance ratios. Its terms do not share
/// units, so it is not a probability in general; kept for comparison with
/// [`sop_multi_asym`]. Requires `K ≥ 2`.
///
/// Returns `(first, second, third)`: the `|S_II| = 0`, `|S_II| = K` and
/// `0 < |S_II| < K` parts.
pub fn sop_multi_asym_literal(
    geometry: &Geometry,
    config: &RadioConfig,
) -> Result<(f64, f64, f64)> {
    let k = config.k_users;
    if k < 2 {
        return Err(Error::domain("multi-user limit needs K >= 2"));
    }
    let c = Chi::new(geometry, config);
    let kf = k as f64;
    let eps_b = c.eps_b;

    let first: f64 = (0..=k - 2)
        .map(|n| eps_b * min_max_cdf_weights(n, k).0 / (kf * c.rho + eps_b))
        .sum();

    let phi = max_cdf_terms(k, 1.0);
    let mut second = 0.0;
    for (i, t) in phi.terms.iter().enumerate() {
        let i = i as f64;
        second += t.coef * eps_b / (i * c.rho + eps_b);
        second += i * t.coef * c.pow(i) / (i + eps_b / c.rho);
    }

    let mut third = 0.0;
    for kk in 1..k.saturating_sub(1) {
        let table = triple_cdf_terms(kk, k, 1.0)?;
        let mut idx = 0;
        for _n in 0..=k - kk - 2 {
            for m in 0..kk {
                let group = &table.terms[idx..idx + 6];
                idx += 6;
                let varpi = [(m + 1) as f64 - kk as f64, -(kk as f64)];
                for (s, w) in [group[4].coef, group[5].coef].into_iter().zip(varpi) {
                    let chi3 = c.pow(kf + w);
                    third += s * eps_b * (1.0 - chi3) / ((kf + w) * c.rho + eps_b);
                    third += s * eps_b * chi3 / ((kf - kk as f64) * c.rho + eps_b);
                }
            }
        }
    }
    let rb = geometry.rate_b().recip();
    let rf = geometry.rate_f().recip();
    for n in 0..=k - 2 {
        let mu4 = top_pair_weight(n, k);
        for (sign, w) in [(1.0, (n + 2) as f64), (-1.0, 1.0)] {
            let chi4 = c.pow(w);
            third += mu4
                * sign
                * eps_b
                * ((1.0 - chi4) / (w * rb + rf * eps_b) + chi4 / (rb + rf * eps_b));
        }
    }
    Ok((first, second, third))
}
