//! Command-line front end: sweeps, comparison reports, plot scripts and the
//! self-test.
//!
//! ```text
//! sgf-secrecy sweep <config> [-o results.csv] [--nodes L] [--plot]
//! sgf-secrecy compare <csv> [--sigmas 3] [--floor 2e-3]
//! sgf-secrecy plot <csv> [-o script.gp] [--title T] [--png out.png]
//! sgf-secrecy selftest [--trials 100000]
//! ```
//!
//! `SGF_SECRECY_WORKERS` sets the worker thread count.

mod compare;
mod config;
mod plot;
pub mod selftest;
mod sweep;
mod table;

pub use compare::{compare_report, CompareReport, TolerancePolicy, Verdict};
pub use config::{parse_config, BaseParams, Outputs, SweepParam, SweepSpec};
pub use plot::{emit_plot_script, PlotStyle};
pub use sweep::{asymptote_for, run_sweep};
pub use table::{ResultTable, Row, SCHEMA_TAG, TERM_COLUMNS};

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::Error;

/// Environment variable overriding the worker thread count.
pub const WORKERS_ENV: &str = "SGF_SECRECY_WORKERS";

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_COMPARE_FAILED: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "sgf-secrecy", version, about = "Secrecy outage of semi-grant-free NOMA uplinks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the sweep described by a config file and write a CSV.
    Sweep {
        config: PathBuf,
        /// Output CSV; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Gauss–Chebyshev nodes for the exact expressions.
        #[arg(long)]
        nodes: Option<usize>,
        /// Also write a gnuplot script next to the CSV (needs --output).
        #[arg(long, requires = "output")]
        plot: bool,
    },
    /// Check Monte Carlo against exact values in a result CSV.
    Compare {
        csv: PathBuf,
        #[arg(long, default_value_t = 3.0)]
        sigmas: f64,
        #[arg(long, default_value_t = 2e-3)]
        floor: f64,
    },
    /// Write a gnuplot script for a result CSV.
    Plot {
        csv: PathBuf,
        /// Script path; defaults to the CSV path with a `.gp` extension.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        title: Option<String>,
        /// Render to this PNG instead of an interactive window.
        #[arg(long)]
        png: Option<String>,
    },
    /// Run the oracle and cross-validation suites.
    Selftest {
        /// Monte Carlo trials per point in the cross-validation suites.
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NoConvergence { .. } => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code_for(e))
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn configure_workers() -> Result<(), Error> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?;
    // Fails only if a global pool already exists, in which case it is kept.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    if let Err(e) = configure_workers() {
        return fail(&e);
    }
    match cli.command {
        Command::Sweep {
            config,
            output,
            nodes,
            plot,
        } => cmd_sweep(&config, output.as_deref(), nodes, plot),
        Command::Compare { csv, sigmas, floor } => cmd_compare(&csv, sigmas, floor),
        Command::Plot {
            csv,
            output,
            title,
            png,
        } => cmd_plot(&csv, output, title, png),
        Command::Selftest { trials } => cmd_selftest(trials),
    }
}

fn script_path(csv: &Path) -> PathBuf {
    csv.with_extension("gp")
}

fn write_script(table: &ResultTable, csv: &Path, out: &Path, style: &PlotStyle) -> Result<(), Error> {
    // The script refers to the CSV by file name when they share a directory.
    let csv_ref = if csv.parent() == out.parent() {
        csv.file_name().map(|n| n.to_string_lossy().into_owned())
    } else {
        None
    }
    .unwrap_or_else(|| csv.display().to_string());
    let script = emit_plot_script(table, &csv_ref, style)?;
    fs::write(out, script)?;
    Ok(())
}

fn cmd_sweep(config: &Path, output: Option<&Path>, nodes: Option<usize>, plot: bool) -> ExitCode {
    let result = (|| {
        let mut spec = parse_config(&read(config)?)?;
        if let Some(n) = nodes {
            spec.nodes = n;
        }
        let table = run_sweep(&spec)?;
        match output {
            Some(path) => {
                table.write_csv(fs::File::create(path)?)?;
                if plot {
                    write_script(&table, path, &script_path(path), &PlotStyle::default())?;
                }
            }
            None => table.write_csv(std::io::stdout().lock())?,
        }
        Ok(table)
    })();
    match result {
        Ok(table) => {
            let missing = table
                .rows
                .iter()
                .filter(|r| !r.reason.is_empty())
                .count();
            if missing > 0 {
                eprintln!("{missing} rows have missing values; see the reason column");
            }
            ExitCode::from(EXIT_OK)
        }
        Err(e) => fail(&e),
    }
}

fn cmd_compare(csv: &Path, sigmas: f64, floor: f64) -> ExitCode {
    let table = match read(csv).and_then(|s| ResultTable::from_csv_str(&s)) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let report = compare_report(&table, &TolerancePolicy { sigmas, floor });
    println!("{report}");
    if report.passed() {
        ExitCode::from(EXIT_OK)
    } else {
        if report.verdicts.is_empty() {
            eprintln!("no row has both an MC and an exact value");
        }
        ExitCode::from(EXIT_COMPARE_FAILED)
    }
}

fn cmd_plot(csv: &Path, output: Option<PathBuf>, title: Option<String>, png: Option<String>) -> ExitCode {
    let result = (|| {
        let table = ResultTable::from_csv_str(&read(csv)?)?;
        let out = output.unwrap_or_else(|| script_path(csv));
        let style = PlotStyle {
            title,
            terminal: png.map(|p| ("pngcairo size 900,600".to_string(), p)),
        };
        write_script(&table, csv, &out, &style)?;
        Ok::<_, Error>(out)
    })();
    match result {
        Ok(out) => {
            println!("{}", out.display());
            ExitCode::from(EXIT_OK)
        }
        Err(e) => fail(&e),
    }
}

fn cmd_selftest(trials: u64) -> ExitCode {
    if trials == 0 {
        return fail(&Error::Config("trials must be >= 1".into()));
    }
    let mut all = true;
    for report in selftest::selftest(trials) {
        for d in &report.details[..report.details.len().saturating_sub(1)] {
            println!("    {d}");
        }
        println!("{}", report.line());
        all &= report.passed;
    }
    if all {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_NUMERICAL)
    }
}
