//! One grant-free user.

use std::collections::BTreeMap;

use super::region::{density_prefactor, RegionKernel};
use super::{require_equal_distances, AnalyticOptions, Branch, SopBreakdown};
use crate::channel::{Geometry, RadioConfig};
use crate::error::Result;
use crate::specfun::{lower_gamma_int, upper_gamma_int};

/// Constants of the one-user expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleUserCoeffs {
    /// `r_F^α ρ_B θ_th`
    pub lambda1: f64,
    /// `r_F^α ρ_B α_th + r_B^α`
    pub lambda2: f64,
    /// `r_F^α θ_th + r_E^α`
    pub lambda3: f64,
    /// `(1 − ε_B ε_th)/(ρ_F θ_th ε_B)`; negative on the `ε_B ε_th > 1` branch.
    pub alpha1: f64,
    /// `θ_B/(ρ_F θ_th ρ_B ε_B)`
    pub alpha3: f64,
    /// `α_B θ_th`
    pub eps1: f64,
    /// `r_F^α/(ρ_F α_B) + r_B^α`
    pub eps2: f64,
}

impl SingleUserCoeffs {
    pub fn new(geometry: &Geometry, config: &RadioConfig) -> Self {
        let th = config.thresholds();
        let af = geometry.rate_f();
        SingleUserCoeffs {
            lambda1: af * config.rho_b * th.theta_th,
            lambda2: af * config.rho_b * th.alpha_th + geometry.rate_b(),
            lambda3: af * th.theta_th + geometry.rate_e(),
            alpha1: (1.0 - th.eps_product()) / (config.rho_f * th.theta_th * th.eps_b),
            alpha3: th.theta_b / (config.rho_f * th.theta_th * config.rho_b * th.eps_b),
            eps1: th.alpha_b * th.theta_th,
            eps2: af / (config.rho_f * th.alpha_b) + geometry.rate_b(),
        }
    }
}

/// `∫₀^∞ ∫₀^{α_B} y^{N−1} e^{−axy − bx − cy} dx dy`.
pub fn omega1(kernel: &RegionKernel, a: f64, b: f64, c: f64) -> f64 {
    kernel.below(a, b, c, 0.0)
}

/// `∫_{α₁}^∞ ∫_{α_B}^∞ y^{N−1} e^{−axy − bx − cy} dx dy` (`ε_B ε_th < 1`).
pub fn omega2(kernel: &RegionKernel, a: f64, b: f64, c: f64) -> Result<f64> {
    omega2_shifted(kernel, a, b, c, 0.0)
}

/// `∫₀^{α₁} ∫_{α_B}^{α₂(y)} y^{N−1} e^{−axy − bx − cy} dx dy` (`ε_B ε_th < 1`).
pub fn omega3(kernel: &RegionKernel, a: f64, b: f64, c: f64) -> Result<f64> {
    omega3_shifted(kernel, a, b, c, 0.0)
}

/// `∫₀^∞ ∫_{α_B}^∞ y^{N−1} e^{−axy − bx − cy} dx dy`.
pub fn omega4(kernel: &RegionKernel, a: f64, b: f64, c: f64) -> f64 {
    kernel.above(a, b, c, 0.0)
}

/// `e^{−bα_B} ∫₀^{α₁} y^{N−1} e^{−(aα_B + c)y}/(ay + b) dy`, exact when `a = 0`.
fn strip_shifted(kernel: &RegionKernel, a: f64, b: f64, c: f64, shift: f64) -> Result<f64> {
    let Some(a1) = kernel.alpha1 else {
        return Ok(0.0);
    };
    let s = shift - b * kernel.alpha_b;
    if a == 0.0 {
        let n = kernel.n;
        return Ok(s.exp() * lower_gamma_int(n, c * a1)? / (b * c.powi(n as i32)));
    }
    Ok(kernel.strip(a, b, c, s))
}

fn omega2_shifted(kernel: &RegionKernel, a: f64, b: f64, c: f64, shift: f64) -> Result<f64> {
    let Some(a1) = kernel.alpha1 else {
        return Ok(kernel.above(a, b, c, shift));
    };
    if a == 0.0 {
        let n = kernel.n;
        return Ok((shift - b * kernel.alpha_b).exp() * upper_gamma_int(n, c * a1)?
            / (b * c.powi(n as i32)));
    }
    Ok(kernel.above(a, b, c, shift) - strip_shifted(kernel, a, b, c, shift)?)
}

fn omega3_shifted(kernel: &RegionKernel, a: f64, b: f64, c: f64, shift: f64) -> Result<f64> {
    Ok(strip_shifted(kernel, a, b, c, shift)? - kernel.beyond_cap(a, b, c, shift))
}

/// Exact SOP for `K = 1` with the default quadrature.
pub fn sop_single_exact(geometry: &Geometry, config: &RadioConfig) -> Result<SopBreakdown> {
    sop_single_exact_with(geometry, config, &AnalyticOptions::default())
}

/// Exact SOP for one grant-free user (the user count in `config` is
/// ignored).
pub fn sop_single_exact_with(
    geometry: &Geometry,
    config: &RadioConfig,
    options: &AnalyticOptions,
) -> Result<SopBreakdown> {
    require_equal_distances(geometry)?;
    let branch = Branch::of(config)?;
    let th = config.thresholds();
    let kernel = RegionKernel::new(config, &th, options.nodes)?;
    let co = SingleUserCoeffs::new(geometry, config);
    let pref = density_prefactor(geometry, config);
    let (ab, af, ae) = (geometry.rate_b(), geometry.rate_f(), geometry.rate_e());
    let (l1, l2, l3) = (co.lambda1, co.lambda2, co.lambda3);
    let n = config.n_antennas as i32;

    let mut terms = BTreeMap::new();
    let p_i1 = 1.0 - (-ab * th.alpha_b).exp() - pref * kernel.below(l1, l2, l3, -af * th.alpha_th);
    terms.insert("P_I_1".to_string(), p_i1);

    // Tolerance part first: e^{r_F^α/ρ_F} ω(0, ε₂, r_E^α); then the
    // first-stage boundary part e^{−r_F^α α_th} ω(λ₁, λ₂, λ₃).
    let tol_shift = af / config.rho_f;
    let bnd_shift = -af * th.alpha_th;
    match branch {
        Branch::EpsProductLt1 => {
            let p = pref
                * (omega2_shifted(&kernel, 0.0, co.eps2, ae, tol_shift)?
                    + omega3_shifted(&kernel, 0.0, co.eps2, ae, tol_shift)?
                    - omega2_shifted(&kernel, l1, l2, l3, bnd_shift)?
                    - omega3_shifted(&kernel, l1, l2, l3, bnd_shift)?);
            terms.insert("P_I_21".to_string(), p);
        }
        Branch::EpsProductGt1 => {
            let p = ab * (-ab * th.alpha_b).exp() / co.eps2
                - pref * kernel.above(l1, l2, l3, bnd_shift);
            terms.insert("P_I_22".to_string(), p);
        }
    }

    let p_ii = af / (af + ab * config.rho_f * th.alpha_b)
        * ((-ab * th.alpha_b).exp()
            - (ae / (l3 + ab * config.rho_f * co.eps1)).powi(n)
                * (-(af * th.alpha_th + ab * co.eps1)).exp());
    terms.insert("P_II".to_string(), p_ii);
    Ok(SopBreakdown::from_terms(terms, branch))
}
