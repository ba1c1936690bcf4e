//! Monte Carlo against closed form, point by point.

use std::fmt;

use super::table::ResultTable;
use crate::sgf::Scheme;

/// A point passes when `|mc − exact| ≤ max(sigmas·stderr, floor)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    pub sigmas: f64,
    pub floor: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            sigmas: 3.0,
            floor: 2e-3,
        }
    }
}

impl TolerancePolicy {
    pub fn allowed(&self, stderr: f64) -> f64 {
        (self.sigmas * stderr).max(self.floor)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub sweep_value: f64,
    pub scheme: Scheme,
    pub mc: f64,
    pub exact: f64,
    pub allowed: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub verdicts: Vec<Verdict>,
    /// Rows without both an MC and an exact value.
    pub skipped: usize,
}

impl CompareReport {
    pub fn failures(&self) -> usize {
        self.verdicts.iter().filter(|v| !v.passed).count()
    }

    /// True when at least one point was compared and none failed.
    pub fn passed(&self) -> bool {
        !self.verdicts.is_empty() && self.failures() == 0
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.verdicts {
            writeln!(
                f,
                "{} {:>10} {} mc={:.6} exact={:.6} |diff|={:.2e} allowed={:.2e}",
                if v.passed { "PASS" } else { "FAIL" },
                v.sweep_value,
                v.scheme,
                v.mc,
                v.exact,
                (v.mc - v.exact).abs(),
                v.allowed
            )?;
        }
        write!(
            f,
            "{} compared, {} failed, {} skipped",
            self.verdicts.len(),
            self.failures(),
            self.skipped
        )
    }
}

pub fn compare_report(table: &ResultTable, policy: &TolerancePolicy) -> CompareReport {
    let mut verdicts = Vec::new();
    let mut skipped = 0;
    for r in &table.rows {
        if !(r.sop_mc.is_finite() && r.sop_exact.is_finite() && r.stderr.is_finite()) {
            skipped += 1;
            continue;
        }
        let allowed = policy.allowed(r.stderr);
        verdicts.push(Verdict {
            sweep_value: r.sweep_value,
            scheme: r.scheme,
            mc: r.sop_mc,
            exact: r.sop_exact,
            allowed,
            passed: (r.sop_mc - r.sop_exact).abs() <= allowed,
        });
    }
    CompareReport { verdicts, skipped }
}
