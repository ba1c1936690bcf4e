//! gnuplot scripts for result CSVs.

use super::table::ResultTable;
use crate::error::{Error, Result};

/// Output columns that can be plotted, with their 1-based CSV column.
const SERIES: [(&str, usize); 3] = [("mc", 3), ("exact", 5), ("asym", 6)];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlotStyle {
    pub title: Option<String>,
    /// `(terminal, output file)`; without it gnuplot uses its default
    /// interactive terminal.
    pub terminal: Option<(String, String)>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A script plotting one series per (scheme, output) present in `table`,
/// reading the data from `csv_path`. The y axis is logarithmic.
pub fn emit_plot_script(table: &ResultTable, csv_path: &str, style: &PlotStyle) -> Result<String> {
    if table.rows.is_empty() {
        return Err(Error::config("cannot plot an empty table"));
    }
    let mut plots = Vec::new();
    for scheme in table.schemes() {
        for (name, col) in SERIES {
            let present = table.rows.iter().any(|r| {
                let v = match name {
                    "mc" => r.sop_mc,
                    "exact" => r.sop_exact,
                    _ => r.sop_asym,
                };
                r.scheme == scheme && v.is_finite()
            });
            if !present {
                continue;
            }
            let points = if name == "mc" { "points" } else { "lines" };
            plots.push(format!(
                "data skip 2 using 1:(strcol(2) eq \"{scheme}\" ? column({col}) : NaN) \
                 with {points} title \"{scheme} {name}\""
            ));
        }
    }
    if plots.is_empty() {
        return Err(Error::config("table has no finite values to plot"));
    }

    let mut s = String::new();
    if let Some((term, out)) = &style.terminal {
        s.push_str(&format!("set terminal {term}\nset output {}\n", quote(out)));
    }
    s.push_str("set datafile separator \",\"\n");
    s.push_str("set datafile missing \"NaN\"\n");
    s.push_str("set logscale y\n");
    s.push_str(&format!("set xlabel {}\n", quote(table.param.as_str())));
    s.push_str("set ylabel \"SOP\"\n");
    s.push_str("set key outside right\n");
    if let Some(t) = &style.title {
        s.push_str(&format!("set title {}\n", quote(t)));
    }
    s.push_str(&format!("data = {}\n", quote(csv_path)));
    s.push_str("plot ");
    s.push_str(&plots.join(", \\\n     "));
    s.push('\n');
    Ok(s)
}
