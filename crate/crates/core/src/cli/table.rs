//! Sweep result tables and their CSV form.
//!
//! The first line of a file is the schema tag, which also records the swept
//! parameter; the second is the column header. Missing values are `NaN` and
//! the `reason` column says why.

use std::io::{BufRead, BufReader, Read, Write};

use super::config::SweepParam;
use crate::error::{Error, Result};
use crate::sgf::Scheme;

/// Schema tag written as the first line of every result CSV.
pub const SCHEMA_TAG: &str = "# sgf-secrecy sweep v1";

/// Named parts of the exact SOP, one column each.
pub const TERM_COLUMNS: [&str; 9] = [
    "P_I_1",
    "P_I_21",
    "P_I_22",
    "P_II",
    "P_out_1_1",
    "P_out_1_21",
    "P_out_1_22",
    "P_out_2",
    "P_out_3",
];

const LEAD_COLUMNS: [&str; 6] = [
    "sweep_value",
    "scheme",
    "sop_mc",
    "stderr",
    "sop_exact",
    "sop_asym",
];

/// One `(sweep value, scheme)` result.
#[derive(Debug, Clone)]
pub struct Row {
    pub sweep_value: f64,
    pub scheme: Scheme,
    pub sop_mc: f64,
    pub stderr: f64,
    pub sop_exact: f64,
    pub sop_asym: f64,
    /// Values in [`TERM_COLUMNS`] order.
    pub terms: [f64; 9],
    /// Why some values are missing; empty when none are.
    pub reason: String,
}

impl Row {
    pub fn empty(sweep_value: f64, scheme: Scheme) -> Self {
        Row {
            sweep_value,
            scheme,
            sop_mc: f64::NAN,
            stderr: f64::NAN,
            sop_exact: f64::NAN,
            sop_asym: f64::NAN,
            terms: [f64::NAN; 9],
            reason: String::new(),
        }
    }

    pub fn add_reason(&mut self, reason: &str) {
        if !self.reason.is_empty() {
            self.reason.push_str("; ");
        }
        self.reason.push_str(reason);
    }

    fn numbers(&self) -> impl Iterator<Item = f64> + '_ {
        [self.sweep_value, self.sop_mc, self.stderr, self.sop_exact, self.sop_asym]
            .into_iter()
            .chain(self.terms)
    }
}

fn same(a: f64, b: f64) -> bool {
    a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan())
}

impl PartialEq for Row {
    /// Bitwise on numbers, with every NaN equal to every other.
    fn eq(&self, other: &Self) -> bool {
        self.scheme == other.scheme
            && self.reason == other.reason
            && self.numbers().zip(other.numbers()).all(|(a, b)| same(a, b))
    }
}

/// The rows of a sweep, in sweep order.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub param: SweepParam,
    pub rows: Vec<Row>,
}

impl ResultTable {
    /// Schemes present, in first-appearance order.
    pub fn schemes(&self) -> Vec<Scheme> {
        let mut out = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.scheme) {
                out.push(r.scheme);
            }
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{SCHEMA_TAG}; sweep_param={}", self.param)?;
        let mut w = csv::Writer::from_writer(out);
        let header = LEAD_COLUMNS
            .iter()
            .chain(TERM_COLUMNS.iter())
            .copied()
            .chain(["reason"]);
        w.write_record(header).map_err(csv_err)?;
        for r in &self.rows {
            let mut rec: Vec<String> = vec![
                r.sweep_value.to_string(),
                r.scheme.to_string(),
                r.sop_mc.to_string(),
                r.stderr.to_string(),
                r.sop_exact.to_string(),
                r.sop_asym.to_string(),
            ];
            rec.extend(r.terms.iter().map(f64::to_string));
            rec.push(r.reason.clone());
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut input = BufReader::new(input);
        let mut tag = String::new();
        input.read_line(&mut tag)?;
        let param = tag
            .trim_end()
            .strip_prefix(SCHEMA_TAG)
            .and_then(|rest| rest.strip_prefix("; sweep_param="))
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("missing schema tag {SCHEMA_TAG:?}"),
            })?
            .parse()?;

        let mut rd = csv::Reader::from_reader(input);
        let expected: Vec<&str> = LEAD_COLUMNS
            .iter()
            .chain(TERM_COLUMNS.iter())
            .copied()
            .chain(["reason"])
            .collect();
        let header = rd.headers().map_err(csv_err)?;
        if header.iter().ne(expected.iter().copied()) {
            return Err(Error::Parse {
                line: 2,
                message: "column header does not match schema v1".into(),
            });
        }
        let mut rows = Vec::new();
        for (i, rec) in rd.records().enumerate() {
            let line = i + 3;
            let rec = rec.map_err(csv_err)?;
            let num = |j: usize| -> Result<f64> {
                rec[j].parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("column {}: cannot parse {:?}", expected[j], &rec[j]),
                })
            };
            let mut terms = [0.0; 9];
            for (t, slot) in terms.iter_mut().enumerate() {
                *slot = num(6 + t)?;
            }
            rows.push(Row {
                sweep_value: num(0)?,
                scheme: rec[1].parse()?,
                sop_mc: num(2)?,
                stderr: num(3)?,
                sop_exact: num(4)?,
                sop_asym: num(5)?,
                terms,
                reason: rec[15].to_string(),
            });
        }
        Ok(ResultTable { param, rows })
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        Self::read_csv(s.as_bytes())
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.position() {
        Some(p) => Error::Parse {
            line: p.line() as usize + 1,
            message: e.to_string(),
        },
        None => Error::Io(e.to_string()),
    }
}
