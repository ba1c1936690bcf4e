//! Double integrals `∫∫_R y^{N−1} e^{−axy − bx − cy} dx dy` over the regions
//! of the `(|h_B|², |H_E|²)` plane that the outage events cut out.
//!
//! `x` is the grant-based gain and `y` the eavesdropper gain. The boundaries
//! are:
//!
//! * `x = α_B`: below it the grant-based user is in outage on its own;
//! * `x = ε₁(1 + ρ_F y)`: where the tolerance `τ/ρ_F` crosses `θ y + α_th`;
//! * `x = α₂(y) = α₃/(α₁ − y) − 1/ρ_B` for `y < α₁`: where `τ/ρ_F` crosses
//!   the first-stage outage boundary `(1 + ρ_B x)(θ y + α_th)`. It exists only
//!   when `ε_B ε_th < 1`; beyond it no first-stage user can be in outage
//!   while the tolerance exceeds its power.
//!
//! Every function takes a `shift` that multiplies the result by `e^{shift}`,
//! folded into the exponent so that large prefactors never overflow.

use crate::channel::{DerivedThresholds, Geometry, RadioConfig};
use crate::error::{Error, Result};
use crate::specfun::{gamma_int, gauss_chebyshev_rule, omega5_moment, tail_ratio, QuadratureRule};

/// Default Gauss–Chebyshev node count.
pub const DEFAULT_NODES: usize = 128;

/// The fixed boundary constants of the `(x, y)` plane.
#[derive(Debug, Clone)]
pub struct RegionKernel {
    pub n: u32,
    pub rho_b: f64,
    pub rho_f: f64,
    pub alpha_b: f64,
    pub eps1: f64,
    /// `α₁` when `ε_B ε_th < 1`, else `None`.
    pub alpha1: Option<f64>,
    pub alpha3: f64,
    rule: Option<QuadratureRule>,
    gamma_n: f64,
}

impl RegionKernel {
    pub fn new(config: &RadioConfig, th: &DerivedThresholds, nodes: usize) -> Result<Self> {
        let prod = th.eps_product();
        if (prod - 1.0).abs() < 1e-9 {
            return Err(Error::BranchSingularity { product: prod });
        }
        let alpha1 = (1.0 - prod) / (config.rho_f * th.theta_th * th.eps_b);
        let alpha3 = th.theta_b / (config.rho_f * th.theta_th * config.rho_b * th.eps_b);
        let (alpha1, rule) = if prod < 1.0 {
            (Some(alpha1), Some(gauss_chebyshev_rule(nodes, alpha1)?))
        } else {
            (None, None)
        };
        Ok(RegionKernel {
            n: config.n_antennas,
            rho_b: config.rho_b,
            rho_f: config.rho_f,
            alpha_b: th.alpha_b,
            eps1: th.alpha_b * th.theta_th,
            alpha1,
            alpha3,
            rule,
            gamma_n: gamma_int(config.n_antennas),
        })
    }

    /// `x ∈ [0, ∞)`.
    pub fn full(&self, a: f64, b: f64, c: f64, shift: f64) -> f64 {
        let z = if a == 0.0 { f64::INFINITY } else { b * c / a };
        self.gamma_n * shift.exp() * tail_ratio(self.n, z) / (b * c.powi(self.n as i32))
    }

    /// `x ∈ [α_B, ∞)`.
    pub fn above(&self, a: f64, b: f64, c: f64, shift: f64) -> f64 {
        let cc = c + a * self.alpha_b;
        let z = if a == 0.0 { f64::INFINITY } else { b * cc / a };
        self.gamma_n * (shift - b * self.alpha_b).exp() * tail_ratio(self.n, z)
            / (b * cc.powi(self.n as i32))
    }

    /// `x ∈ [0, α_B)`.
    pub fn below(&self, a: f64, b: f64, c: f64, shift: f64) -> f64 {
        self.full(a, b, c, shift) - self.above(a, b, c, shift)
    }

    /// `x ∈ [ε₁(1 + ρ_F y), ∞)`.
    pub fn high(&self, a: f64, b: f64, c: f64, shift: f64) -> Result<f64> {
        let e = (shift - b * self.eps1).exp();
        if e == 0.0 {
            return Ok(0.0);
        }
        let f = c + a * self.eps1 + b * self.rho_f * self.eps1;
        if a == 0.0 {
            return Ok(e * self.gamma_n / (b * f.powi(self.n as i32)));
        }
        Ok(e * omega5_moment(self.n, a, b, a * self.rho_f * self.eps1, f)?)
    }

    /// `x ∈ [α_B, ε₁(1 + ρ_F y))`.
    pub fn low(&self, a: f64, b: f64, c: f64, shift: f64) -> Result<f64> {
        Ok(self.above(a, b, c, shift) - self.high(a, b, c, shift)?)
    }

    /// `y < α₁, x > α₂(y)`: the part of the plane where the tolerance exceeds
    /// the first-stage outage boundary. Zero when `ε_B ε_th > 1`.
    pub fn beyond_cap(&self, a: f64, b: f64, c: f64, shift: f64) -> f64 {
        let (Some(a1), Some(rule)) = (self.alpha1, &self.rule) else {
            return 0.0;
        };
        let p = (self.n - 1) as i32;
        rule.apply(|y| {
            let x2 = self.alpha3 / (a1 - y) - 1.0 / self.rho_b;
            let ay_b = a * y + b;
            let e = (shift - c * y - ay_b * x2).exp();
            if e == 0.0 {
                0.0
            } else {
                y.powi(p) * e / ay_b
            }
        })
    }

    /// `x ≥ α_B` minus the part beyond the cap.
    pub fn above_feasible(&self, a: f64, b: f64, c: f64, shift: f64) -> f64 {
        self.above(a, b, c, shift) - self.beyond_cap(a, b, c, shift)
    }

    /// `x ≥ ε₁(1 + ρ_F y)` minus the part beyond the cap.
    pub fn high_feasible(&self, a: f64, b: f64, c: f64, shift: f64) -> Result<f64> {
        Ok(self.high(a, b, c, shift)? - self.beyond_cap(a, b, c, shift))
    }

    /// `∫₀^{α₁} y^{N−1} e^{−(aα_B + c)y} / (ay + b) dy` by Gauss–Chebyshev,
    /// times `e^{shift}`. Zero when `ε_B ε_th > 1`.
    pub fn strip(&self, a: f64, b: f64, c: f64, shift: f64) -> f64 {
        let Some(rule) = &self.rule else {
            return 0.0;
        };
        let p = (self.n - 1) as i32;
        let k = a * self.alpha_b + c;
        rule.apply(|y| y.powi(p) * (shift - k * y).exp() / (a * y + b))
    }
}

/// Exponent rates of one exponential term of an outage probability, against
/// the three random thresholds `τ/ρ_F`, the first-stage boundary
/// `ω₀ = (1 + ρ_B x)(θ y + α_th)` and the second-stage boundary `θ y + α_th`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdTerm {
    pub coef: f64,
    pub on_tolerance: f64,
    pub on_first: f64,
    pub on_second: f64,
}

/// `(shift, a, b, c)` such that `e^{−(d·τ/ρ_F + w·ω₀ + e·(θy + α_th))}`
/// times the grant-based and eavesdropper densities is
/// `(r_B^α r_E^{Nα} / Γ(N)) · e^{shift} · y^{N−1} e^{−axy − bx − cy}`.
pub(crate) fn term_params(
    t: &ThresholdTerm,
    geometry: &Geometry,
    config: &RadioConfig,
    th: &DerivedThresholds,
) -> (f64, f64, f64, f64) {
    let (d, w, e) = (t.on_tolerance, t.on_first, t.on_second);
    let shift = d / config.rho_f - (w + e) * th.alpha_th;
    let a = w * config.rho_b * th.theta_th;
    let b = w * config.rho_b * th.alpha_th + d / (config.rho_f * th.alpha_b) + geometry.rate_b();
    let c = (w + e) * th.theta_th + geometry.rate_e();
    (shift, a, b, c)
}

/// `r_B^α r_E^{Nα} / Γ(N)`.
pub(crate) fn density_prefactor(geometry: &Geometry, config: &RadioConfig) -> f64 {
    geometry.rate_b() * geometry.rate_e().powi(config.n_antennas as i32)
        / gamma_int(config.n_antennas)
}
