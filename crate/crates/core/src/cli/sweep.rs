//! Running a sweep.

use rayon::prelude::*;

use super::config::{SweepParam, SweepSpec};
use super::table::{ResultTable, Row, TERM_COLUMNS};
use crate::analytic::{
    sop_exact, sop_multi_asym, sop_single_asym_both, sop_single_asym_rho_b,
    sop_single_asym_rho_f, AnalyticOptions,
};
use crate::channel::{Geometry, RadioConfig};
use crate::error::{Error, Result};
use crate::mc::estimate_sop;
use crate::sgf::Scheme;

/// The high-SNR limit that matches the sweep axis, or why there is none.
///
/// One user, or random scheduling with any number of users, has the
/// one-user limits; best-user scheduling has a limit only along the
/// `ρ_B = ρ_F` axis.
pub fn asymptote_for(
    param: SweepParam,
    scheme: Scheme,
    geometry: &Geometry,
    config: &RadioConfig,
) -> std::result::Result<f64, &'static str> {
    let single = config.k_users == 1 || scheme == Scheme::Rus;
    match (param, single, scheme) {
        (SweepParam::RhoBDb, true, _) => Ok(sop_single_asym_rho_b(geometry, config)),
        (SweepParam::RhoFDb, true, _) => Ok(sop_single_asym_rho_f(geometry, config)),
        (SweepParam::RhoBothDb, true, _) => Ok(sop_single_asym_both(geometry, config)),
        (SweepParam::RhoBothDb, false, Scheme::Bus) => Ok(sop_multi_asym(geometry, config)),
        (SweepParam::RhoBDb | SweepParam::RhoFDb | SweepParam::RhoBothDb, false, _) => {
            Err("no high-SNR limit for this scheme and user count")
        }
        _ => Err("no high-SNR limit along this axis"),
    }
}

fn run_point(spec: &SweepSpec, value: f64, scheme: Scheme) -> Result<Row> {
    let p = spec.base.with(spec.param, value);
    let geometry = p.geometry()?;
    let config = p.radio()?;
    let mut row = Row::empty(value, scheme);

    if spec.outputs.mc {
        let est = estimate_sop(&geometry, &config, scheme, spec.trials, spec.seed)?;
        row.sop_mc = est.p_hat;
        row.stderr = est.stderr;
    }
    if spec.outputs.exact {
        let options = AnalyticOptions { nodes: spec.nodes };
        match sop_exact(&geometry, &config, scheme, &options) {
            Ok(b) => {
                row.sop_exact = b.total;
                for (name, v) in &b.terms {
                    if let Some(j) = TERM_COLUMNS.iter().position(|c| c == name) {
                        row.terms[j] = *v;
                    }
                }
                if let Some(w) = &b.warning {
                    row.add_reason(w);
                }
            }
            Err(e @ (Error::BranchSingularity { .. } | Error::Domain(_) | Error::Config(_))) => {
                row.add_reason(&format!("exact: {e}"));
            }
            Err(e) => return Err(e),
        }
    }
    if spec.outputs.asym {
        match asymptote_for(spec.param, scheme, &geometry, &config) {
            Ok(v) => row.sop_asym = v,
            Err(why) => row.add_reason(&format!("asym: {why}")),
        }
    }
    Ok(row)
}

/// Evaluates every `(sweep value, scheme)` pair. Points run in parallel;
/// rows come back in sweep order, schemes in the order given.
///
/// Every point uses the same seed, so Monte Carlo curves share their
/// random draws and differences along a curve are not masked by noise.
pub fn run_sweep(spec: &SweepSpec) -> Result<ResultTable> {
    spec.validate()?;
    let jobs: Vec<(f64, Scheme)> = spec
        .values()
        .into_iter()
        .flat_map(|v| spec.schemes.iter().map(move |&s| (v, s)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(v, s)| run_point(spec, v, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResultTable {
        param: spec.param,
        rows,
    })
}
