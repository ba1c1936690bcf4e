//! Closed-form and high-SNR secrecy outage probabilities.
//!
//! All formulas assume every grant-free user sits at the common distance
//! `r_F`. Each exact SOP is a signed sum of double integrals over regions of
//! the (grant-based gain, eavesdropper gain) plane; see [`RegionKernel`].
//!
//! ```
//! use sgf_secrecy::channel::{Geometry, RadioConfig};
//! use sgf_secrecy::analytic::{sop_single_exact, Branch};
//!
//! let g = Geometry::new(10.0, 10.0, 10.0, 2.2).unwrap();
//! let c = RadioConfig::new(10.0, 10.0, 0.9, 0.1, 2, 1).unwrap();
//! let sop = sop_single_exact(&g, &c).unwrap();
//! assert_eq!(sop.branch, Branch::EpsProductLt1);
//! let parts: f64 = sop.terms.values().sum();
//! assert!((sop.total - parts).abs() < 1e-12);
//! ```

mod asymptotic;
mod multi;
mod region;
mod single;

use std::collections::BTreeMap;
use std::fmt;

pub use asymptotic::{
    sop_multi_asym, sop_multi_asym_literal, sop_single_asym_both, sop_single_asym_both_parts,
    sop_single_asym_rho_b, sop_single_asym_rho_f,
};
pub use multi::{sop_cus_exact, sop_multi_exact, sop_multi_exact_with, MultiUserCoeffs};
pub use region::{RegionKernel, ThresholdTerm, DEFAULT_NODES};
pub use single::{
    omega1, omega2, omega3, omega4, sop_single_exact, sop_single_exact_with, SingleUserCoeffs,
};

use crate::channel::{Geometry, RadioConfig};
use crate::error::{Error, Result};
use crate::sgf::Scheme;

/// Which side of `ε_B ε_th = 1` the configuration is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    EpsProductLt1,
    EpsProductGt1,
}

impl Branch {
    pub fn of(config: &RadioConfig) -> Result<Branch> {
        let p = config.thresholds().eps_product();
        if (p - 1.0).abs() < 1e-9 {
            Err(Error::BranchSingularity { product: p })
        } else if p < 1.0 {
            Ok(Branch::EpsProductLt1)
        } else {
            Ok(Branch::EpsProductGt1)
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::EpsProductLt1 => "EPS_PRODUCT_LT_1",
            Branch::EpsProductGt1 => "EPS_PRODUCT_GT_1",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An exact SOP with its named parts.
#[derive(Debug, Clone, PartialEq)]
pub struct SopBreakdown {
    /// Sum of the parts, clamped to `[0, 1]`.
    pub total: f64,
    pub terms: BTreeMap<String, f64>,
    pub branch: Branch,
    /// Finer detail not part of the sum (e.g. each `|S_II| = k` piece).
    pub detail: BTreeMap<String, f64>,
    /// Set when roundoff pushed the raw sum more than `1e-6` outside `[0, 1]`.
    pub warning: Option<String>,
}

impl SopBreakdown {
    fn from_terms(terms: BTreeMap<String, f64>, branch: Branch) -> Self {
        let raw: f64 = terms.values().sum();
        let warning = (!(-1e-6..=1.0 + 1e-6).contains(&raw))
            .then(|| format!("raw SOP sum {raw:e} outside [0, 1]; clamped"));
        SopBreakdown {
            total: raw.clamp(0.0, 1.0),
            terms,
            branch,
            detail: BTreeMap::new(),
            warning,
        }
    }
}

/// Options shared by the exact evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyticOptions {
    /// Gauss–Chebyshev nodes for integrals over `[0, α₁]`.
    pub nodes: usize,
}

impl Default for AnalyticOptions {
    fn default() -> Self {
        AnalyticOptions {
            nodes: DEFAULT_NODES,
        }
    }
}

pub(crate) fn require_equal_distances(geometry: &Geometry) -> Result<()> {
    match &geometry.user_distances {
        Some(d) if d.iter().any(|&r| r != geometry.r_f) => Err(Error::config(
            "closed forms assume every grant-free user at distance r_F",
        )),
        _ => Ok(()),
    }
}

/// Exact SOP of the scheduled grant-free user under `scheme`.
///
/// One user: every scheme coincides. Several users: random scheduling
/// reduces to the one-user expression (the chosen user's decoding stage
/// depends only on its own gain); best-user and CDF-based scheduling have
/// their own expressions.
pub fn sop_exact(
    geometry: &Geometry,
    config: &RadioConfig,
    scheme: Scheme,
    options: &AnalyticOptions,
) -> Result<SopBreakdown> {
    require_equal_distances(geometry)?;
    if config.k_users == 1 || scheme == Scheme::Rus {
        return sop_single_exact_with(geometry, config, options);
    }
    match scheme {
        Scheme::Bus => sop_multi_exact_with(geometry, config, options),
        Scheme::Cus => sop_cus_exact(geometry, config, options),
        Scheme::Rus => unreachable!(),
    }
}
