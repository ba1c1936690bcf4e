//! Several grant-free users.
//!
//! The outage event splits by the number `k = |S_II|` of users below the
//! tolerance:
//!
//! * `k = 0` with the grant-based user in outage (`P_out_1_1`) or not
//!   (`P_out_1_21` / `P_out_1_22`): the strongest user is decoded first;
//! * `k = K` (`P_out_2`): the strongest user is decoded second;
//! * `0 < k < K` (`P_out_3`): the better of the strongest user at the first
//!   stage and user `k` at the second stage.
//!
//! Each piece is an order-statistics probability, written as a sum of
//! exponentials in the random thresholds and then integrated term by term
//! over the relevant region of the (grant-based gain, eavesdropper gain)
//! plane.

use std::collections::BTreeMap;

use super::region::{density_prefactor, term_params, RegionKernel, ThresholdTerm};
use super::{require_equal_distances, AnalyticOptions, Branch, SopBreakdown};
use crate::channel::{
    max_cdf_terms, min_max_cdf_terms, top_pair_cdf_terms, triple_cdf_terms, DerivedThresholds,
    ExpSum, Geometry, RadioConfig,
};
use crate::error::{Error, Result};

/// Coefficients that depend only on `n` in the `k = 0` piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiUserCoeffs {
    /// `K r_F^α/(ρ_F α_B) + r_B^α`
    pub alpha4: f64,
    pub eta: [f64; 6],
}

impl MultiUserCoeffs {
    /// Coefficients for summation index `n` (`C₀ = r_F^α (n+1)`).
    pub fn new(geometry: &Geometry, config: &RadioConfig, n: u32) -> Self {
        let th = config.thresholds();
        let af = geometry.rate_f();
        let k = config.k_users as f64;
        let c0 = af * (n + 1) as f64;
        let (ab, ae) = (geometry.rate_b(), geometry.rate_e());
        MultiUserCoeffs {
            alpha4: k * af / (config.rho_f * th.alpha_b) + ab,
            eta: [
                k * af * config.rho_b * th.theta_th,
                k * af * config.rho_b * th.alpha_th + ab,
                k * af * th.theta_th + ae,
                c0 * config.rho_b * th.theta_th,
                c0 * config.rho_b * th.alpha_th + (k * af - c0) / (config.rho_f * th.alpha_b) + ab,
                c0 * th.theta_th + ae,
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Region {
    Below,
    AboveFeasible,
    Low,
    High,
    HighFeasible,
}

struct Ctx<'a> {
    geometry: &'a Geometry,
    config: &'a RadioConfig,
    th: DerivedThresholds,
    kernel: RegionKernel,
    pref: f64,
}

impl Ctx<'_> {
    fn integrate(&self, terms: &[ThresholdTerm], region: Region) -> Result<f64> {
        let mut sum = 0.0;
        for t in terms {
            let (shift, a, b, c) = term_params(t, self.geometry, self.config, &self.th);
            let k = &self.kernel;
            let j = match region {
                Region::Below => k.below(a, b, c, shift),
                Region::AboveFeasible => k.above_feasible(a, b, c, shift),
                Region::Low => k.low(a, b, c, shift)?,
                Region::High => k.high(a, b, c, shift)?,
                Region::HighFeasible => k.high_feasible(a, b, c, shift)?,
            };
            sum += t.coef * j;
        }
        Ok(self.pref * sum)
    }
}

fn map_terms(sum: &ExpSum, f: impl Fn(f64, &[f64; 4]) -> ThresholdTerm) -> Vec<ThresholdTerm> {
    sum.terms.iter().map(|t| f(t.coef, &t.rates)).collect()
}

fn on(coef: f64, tol: f64, first: f64, second: f64) -> ThresholdTerm {
    ThresholdTerm {
        coef,
        on_tolerance: tol,
        on_first: first,
        on_second: second,
    }
}

/// `Pr{x < h_1, h_K < y}`, including the one-user case `e^{−ax} − e^{−ay}`.
fn min_max_interval(k_users: u32, rate: f64) -> Result<ExpSum> {
    if k_users >= 2 {
        return min_max_cdf_terms(k_users, rate);
    }
    let mut s = max_cdf_terms(1, rate);
    // max_cdf_terms(1) = 1 − e^{−ay}; rebuild as e^{−ax} − e^{−ay}.
    s.terms[0].rates = [rate, 0.0, 0.0, 0.0];
    s.terms[1].rates = [0.0, rate, 0.0, 0.0];
    Ok(s)
}

fn context<'a>(
    geometry: &'a Geometry,
    config: &'a RadioConfig,
    options: &AnalyticOptions,
) -> Result<(Ctx<'a>, Branch)> {
    require_equal_distances(geometry)?;
    let branch = Branch::of(config)?;
    let th = config.thresholds();
    let kernel = RegionKernel::new(config, &th, options.nodes)?;
    let pref = density_prefactor(geometry, config);
    Ok((
        Ctx {
            geometry,
            config,
            th,
            kernel,
            pref,
        },
        branch,
    ))
}

/// The pieces shared by best-user and CDF-based scheduling.
fn common_pieces(ctx: &Ctx, terms: &mut BTreeMap<String, f64>) -> Result<()> {
    let k = ctx.config.k_users;
    let af = ctx.geometry.rate_f();
    let max_cdf = max_cdf_terms(k, af);

    let p11 = ctx.integrate(&map_terms(&max_cdf, |c, r| on(c, 0.0, r[0], 0.0)), Region::Below)?;
    terms.insert("P_out_1_1".into(), p11);

    // The second-stage boundary stays below the first-stage one, so the
    // high region needs no cap here.
    let low = ctx.integrate(&map_terms(&max_cdf, |c, r| on(c, r[0], 0.0, 0.0)), Region::Low)?;
    let high = ctx.integrate(&map_terms(&max_cdf, |c, r| on(c, 0.0, 0.0, r[0])), Region::High)?;
    terms.insert("P_out_2".into(), low + high);
    Ok(())
}

/// Exact best-user SOP for `K ≥ 2` with the default quadrature.
pub fn sop_multi_exact(geometry: &Geometry, config: &RadioConfig) -> Result<SopBreakdown> {
    sop_multi_exact_with(geometry, config, &AnalyticOptions::default())
}

/// Exact best-user SOP. `K = 1` is accepted and agrees with the one-user
/// expression.
pub fn sop_multi_exact_with(
    geometry: &Geometry,
    config: &RadioConfig,
    options: &AnalyticOptions,
) -> Result<SopBreakdown> {
    let (ctx, branch) = context(geometry, config, options)?;
    let k = config.k_users;
    let af = geometry.rate_f();
    let mut terms = BTreeMap::new();
    common_pieces(&ctx, &mut terms)?;

    let interval = min_max_interval(k, af)?;
    let p12 = ctx.integrate(
        &map_terms(&interval, |c, r| on(c, r[0], r[1], 0.0)),
        Region::AboveFeasible,
    )?;
    let name = match branch {
        Branch::EpsProductLt1 => "P_out_1_21",
        Branch::EpsProductGt1 => "P_out_1_22",
    };
    terms.insert(name.into(), p12);

    let mut detail = BTreeMap::new();
    let mut p3 = 0.0;
    for kk in 1..k {
        let table = if kk + 2 <= k {
            triple_cdf_terms(kk, k, af)?
        } else {
            top_pair_cdf_terms(k, af)?
        };
        // Arguments (0, y, z, w): y, z are the bounds around the k-th and
        // (k+1)-th gains, w bounds the strongest gain.
        let low = ctx.integrate(
            &map_terms(&table, |c, r| on(c, r[1] + r[2], r[3], 0.0)),
            Region::Low,
        )?;
        let high = ctx.integrate(
            &map_terms(&table, |c, r| on(c, r[2], r[3], r[1])),
            Region::HighFeasible,
        )?;
        detail.insert(format!("P_out_3[k={kk}]"), low + high);
        p3 += low + high;
    }
    if k >= 2 {
        terms.insert("P_out_3".into(), p3);
    }
    let mut out = SopBreakdown::from_terms(terms, branch);
    out.detail = detail;
    Ok(out)
}

/// Exact SOP under CDF-based scheduling with equal distances, `K ≥ 2`.
///
/// With equal distances the largest CDF value belongs to the strongest user,
/// which is decoded second only when every user is below the tolerance.
pub fn sop_cus_exact(
    geometry: &Geometry,
    config: &RadioConfig,
    options: &AnalyticOptions,
) -> Result<SopBreakdown> {
    if config.k_users < 2 {
        return Err(Error::domain("sop_cus_exact needs K >= 2"));
    }
    let (ctx, branch) = context(geometry, config, options)?;
    let af = geometry.rate_f();
    let mut terms = BTreeMap::new();
    common_pieces(&ctx, &mut terms)?;
    // Pr{τ/ρ_F < h_K < ω₀} = F_K(ω₀) − F_K(τ/ρ_F) on the feasible region.
    let max_cdf = max_cdf_terms(config.k_users, af);
    let mut t = map_terms(&max_cdf, |c, r| on(c, 0.0, r[0], 0.0));
    t.extend(map_terms(&max_cdf, |c, r| on(-c, r[0], 0.0, 0.0)));
    let p = ctx.integrate(&t, Region::AboveFeasible)?;
    let name = match branch {
        Branch::EpsProductLt1 => "P_out_1_21",
        Branch::EpsProductGt1 => "P_out_1_22",
    };
    terms.insert(name.into(), p);
    Ok(SopBreakdown::from_terms(terms, branch))
}
