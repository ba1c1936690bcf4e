//! Sweep configuration files.
//!
//! Plain `key = value` lines grouped under `[geometry]`, `[radio]` and
//! `[sweep]`. `#` and `;` start comments. Every key is optional except the
//! swept parameter and its range; SNRs are in dB.
//!
//! ```text
//! [geometry]
//! r_b_m = 10
//! r_f_m = 10
//! r_e_m = 10
//! alpha = 2.2
//!
//! [radio]
//! rho_b_db = 10
//! rho_f_db = 10
//! r_b_rate = 0.9
//! r_th_rate = 0.1
//! n_eve_antennas = 2
//! k_users = 1
//!
//! [sweep]
//! sweep_param = rho_B_dB
//! sweep_start = 0
//! sweep_stop = 40
//! sweep_step = 2
//! scheme = BUS, CUS, RUS
//! outputs = mc, exact, asym
//! trials = 1000000
//! seed = 1
//! ```

use std::fmt;
use std::str::FromStr;

use crate::channel::{Geometry, RadioConfig};
use crate::db_to_linear;
use crate::error::{Error, Result};
use crate::mc::DEFAULT_TRIALS;
use crate::sgf::Scheme;

/// The quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    RhoBDb,
    RhoFDb,
    /// `ρ_B = ρ_F`, both set to the sweep value.
    RhoBothDb,
    RB,
    RF,
    RE,
    K,
    N,
    RateB,
    RateTh,
}

impl SweepParam {
    pub const ALL: [SweepParam; 10] = [
        SweepParam::RhoBDb,
        SweepParam::RhoFDb,
        SweepParam::RhoBothDb,
        SweepParam::RB,
        SweepParam::RF,
        SweepParam::RE,
        SweepParam::K,
        SweepParam::N,
        SweepParam::RateB,
        SweepParam::RateTh,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::RhoBDb => "rho_B_dB",
            SweepParam::RhoFDb => "rho_F_dB",
            SweepParam::RhoBothDb => "rho_both_dB",
            SweepParam::RB => "r_B",
            SweepParam::RF => "r_F",
            SweepParam::RE => "r_E",
            SweepParam::K => "K",
            SweepParam::N => "N",
            SweepParam::RateB => "R_B",
            SweepParam::RateTh => "R_th",
        }
    }

    fn is_integer(self) -> bool {
        matches!(self, SweepParam::K | SweepParam::N)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.as_str() == s.trim())
            .ok_or_else(|| {
                let names: Vec<_> = SweepParam::ALL.iter().map(|p| p.as_str()).collect();
                Error::config(format!(
                    "unknown sweep_param {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Which columns a sweep fills in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outputs {
    pub mc: bool,
    pub exact: bool,
    pub asym: bool,
}

impl Outputs {
    pub const ALL: Outputs = Outputs {
        mc: true,
        exact: true,
        asym: true,
    };
}

impl FromStr for Outputs {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Outputs {
            mc: false,
            exact: false,
            asym: false,
        };
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match item.to_ascii_lowercase().as_str() {
                "mc" => out.mc = true,
                "exact" => out.exact = true,
                "asym" => out.asym = true,
                other => {
                    return Err(Error::config(format!(
                        "unknown output {other:?}; expected mc, exact or asym"
                    )))
                }
            }
        }
        if !(out.mc || out.exact || out.asym) {
            return Err(Error::config("outputs is empty"));
        }
        Ok(out)
    }
}

/// The fixed parameters of a sweep, SNRs in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseParams {
    pub r_b: f64,
    pub r_f: f64,
    pub r_e: f64,
    pub alpha: f64,
    pub rho_b_db: f64,
    pub rho_f_db: f64,
    pub rate_b: f64,
    pub rate_th: f64,
    pub n_antennas: u32,
    pub k_users: u32,
}

impl Default for BaseParams {
    fn default() -> Self {
        BaseParams {
            r_b: 10.0,
            r_f: 10.0,
            r_e: 10.0,
            alpha: 2.2,
            rho_b_db: 10.0,
            rho_f_db: 10.0,
            rate_b: 0.9,
            rate_th: 0.1,
            n_antennas: 2,
            k_users: 1,
        }
    }
}

impl BaseParams {
    /// Copy with `param` set to `value`.
    pub fn with(&self, param: SweepParam, value: f64) -> BaseParams {
        let mut p = self.clone();
        match param {
            SweepParam::RhoBDb => p.rho_b_db = value,
            SweepParam::RhoFDb => p.rho_f_db = value,
            SweepParam::RhoBothDb => {
                p.rho_b_db = value;
                p.rho_f_db = value;
            }
            SweepParam::RB => p.r_b = value,
            SweepParam::RF => p.r_f = value,
            SweepParam::RE => p.r_e = value,
            SweepParam::K => p.k_users = value.round() as u32,
            SweepParam::N => p.n_antennas = value.round() as u32,
            SweepParam::RateB => p.rate_b = value,
            SweepParam::RateTh => p.rate_th = value,
        }
        p
    }

    pub fn geometry(&self) -> Result<Geometry> {
        Geometry::new(self.r_b, self.r_f, self.r_e, self.alpha)
    }

    /// Radio configuration with the SNRs converted to linear scale.
    pub fn radio(&self) -> Result<RadioConfig> {
        RadioConfig::new(
            db_to_linear(self.rho_b_db),
            db_to_linear(self.rho_f_db),
            self.rate_b,
            self.rate_th,
            self.n_antennas,
            self.k_users,
        )
    }
}

/// A one-parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub base: BaseParams,
    pub schemes: Vec<Scheme>,
    pub outputs: Outputs,
    pub trials: u64,
    pub seed: u64,
    /// Gauss–Chebyshev nodes for the exact expressions.
    pub nodes: usize,
}

impl SweepSpec {
    pub fn new(param: SweepParam, start: f64, stop: f64, step: f64) -> Self {
        SweepSpec {
            param,
            start,
            stop,
            step,
            base: BaseParams::default(),
            schemes: vec![Scheme::Bus],
            outputs: Outputs::ALL,
            trials: DEFAULT_TRIALS,
            seed: 1,
            nodes: crate::analytic::DEFAULT_NODES,
        }
    }

    /// Sweep values `start + i·step` up to `stop` inclusive.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::config("scheme list is empty"));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::config(format!("sweep_step must be positive, got {}", self.step)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.stop < self.start {
            return Err(Error::config(format!(
                "empty sweep range [{}, {}]",
                self.start, self.stop
            )));
        }
        if self.trials == 0 {
            return Err(Error::config("trials must be >= 1"));
        }
        if self.nodes == 0 {
            return Err(Error::config("quadrature node count must be >= 1"));
        }
        for v in self.values() {
            if self.param.is_integer() && (v.fract() != 0.0 || v < 1.0) {
                return Err(Error::config(format!(
                    "{} takes positive integer values, got {v}",
                    self.param
                )));
            }
            let p = self.base.with(self.param, v);
            p.geometry()?;
            p.radio()?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Geometry,
    Radio,
    Sweep,
}

fn section_of(key: &str) -> Option<Section> {
    Some(match key {
        "r_b_m" | "r_f_m" | "r_e_m" | "alpha" => Section::Geometry,
        "rho_b_db" | "rho_f_db" | "r_b_rate" | "r_th_rate" | "n_eve_antennas" | "k_users" => {
            Section::Radio
        }
        "trials" | "seed" | "scheme" | "sweep_param" | "sweep_start" | "sweep_stop"
        | "sweep_step" | "outputs" => Section::Sweep,
        _ => return None,
    })
}

fn parse_num<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Parse {
        line,
        message: format!("{key}: cannot parse {value:?}"),
    })
}

/// Parses a configuration file.
pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let mut section = Section::None;
    let mut base = BaseParams::default();
    let mut seen = std::collections::HashSet::new();
    let mut param = None;
    let (mut start, mut stop, mut step) = (None, None, None);
    let mut spec = SweepSpec::new(SweepParam::RhoBDb, 0.0, 0.0, 1.0);

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split(['#', ';']).next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = match name.trim() {
                "geometry" => Section::Geometry,
                "radio" => Section::Radio,
                "sweep" => Section::Sweep,
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown section [{other}]"),
                    })
                }
            };
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(Error::Parse {
                line,
                message: format!("expected key = value, got {body:?}"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(home) = section_of(key) else {
            return Err(Error::Parse {
                line,
                message: format!("unknown key {key:?}"),
            });
        };
        if home != section {
            return Err(Error::Parse {
                line,
                message: format!("key {key:?} is outside its section"),
            });
        }
        if !seen.insert(key.to_string()) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate key {key:?}"),
            });
        }
        match key {
            "r_b_m" => base.r_b = parse_num(line, key, value)?,
            "r_f_m" => base.r_f = parse_num(line, key, value)?,
            "r_e_m" => base.r_e = parse_num(line, key, value)?,
            "alpha" => base.alpha = parse_num(line, key, value)?,
            "rho_b_db" => base.rho_b_db = parse_num(line, key, value)?,
            "rho_f_db" => base.rho_f_db = parse_num(line, key, value)?,
            "r_b_rate" => base.rate_b = parse_num(line, key, value)?,
            "r_th_rate" => base.rate_th = parse_num(line, key, value)?,
            "n_eve_antennas" => base.n_antennas = parse_num(line, key, value)?,
            "k_users" => base.k_users = parse_num(line, key, value)?,
            "trials" => spec.trials = parse_num(line, key, value)?,
            "seed" => spec.seed = parse_num(line, key, value)?,
            "sweep_start" => start = Some(parse_num(line, key, value)?),
            "sweep_stop" => stop = Some(parse_num(line, key, value)?),
            "sweep_step" => step = Some(parse_num(line, key, value)?),
            "sweep_param" => param = Some(value.parse::<SweepParam>()?),
            "outputs" => spec.outputs = value.parse()?,
            "scheme" => {
                spec.schemes = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?;
            }
            _ => unreachable!("section_of covers every key"),
        }
    }

    let missing = |name: &str| Error::config(format!("missing required key {name}"));
    spec.param = param.ok_or_else(|| missing("sweep_param"))?;
    spec.start = start.ok_or_else(|| missing("sweep_start"))?;
    spec.stop = stop.ok_or_else(|| missing("sweep_stop"))?;
    spec.step = step.ok_or_else(|| missing("sweep_step"))?;
    spec.base = base;
    spec.validate()?;
    Ok(spec)
}
