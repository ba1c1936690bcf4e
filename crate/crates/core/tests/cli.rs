//! Config parsing, result tables, comparison, plot scripts and the binary.

use std::fs;
use std::process::Command;

use proptest::prelude::*;
use sgf_secrecy::cli::*;
use sgf_secrecy::sgf::Scheme;

const SMALL: &str = "\
# two SNR points, all schemes
[geometry]
r_b_m = 10
r_f_m = 10
r_e_m = 10
alpha = 2.2

[radio]
rho_f_db = 20
r_b_rate = 0.9   ; bits/s/Hz
r_th_rate = 0.1
n_eve_antennas = 2
k_users = 2

[sweep]
sweep_param = rho_B_dB
sweep_start = 10
sweep_stop = 20
sweep_step = 10
scheme = BUS, CUS, RUS
trials = 20000
seed = 9
";

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sgf-secrecy"));
    c.env_remove(WORKERS_ENV);
    c
}

#[test]
fn config_is_parsed() {
    let spec = parse_config(SMALL).unwrap();
    assert_eq!(spec.param, SweepParam::RhoBDb);
    assert_eq!(spec.values(), vec![10.0, 20.0]);
    assert_eq!(spec.schemes, Scheme::ALL.to_vec());
    assert_eq!((spec.trials, spec.seed), (20000, 9));
    assert_eq!(spec.base.rho_f_db, 20.0);
    assert_eq!(spec.base.k_users, 2);
    assert_eq!(spec.outputs, Outputs::ALL);
}

#[test]
fn config_defaults_fill_missing_keys() {
    let spec = parse_config(
        "[sweep]\nsweep_param = N\nsweep_start = 1\nsweep_stop = 3\nsweep_step = 1\n",
    )
    .unwrap();
    assert_eq!(spec.base, BaseParams::default());
    assert_eq!(spec.schemes, vec![Scheme::Bus]);
    assert_eq!(spec.base.with(SweepParam::N, 3.0).n_antennas, 3);
}

#[test]
fn config_errors_are_reported() {
    let bad = [
        ("unknown key", SMALL.replace("alpha = 2.2", "beta = 2.2")),
        ("wrong section", SMALL.replace("seed = 9", "seed = 9\n[radio]\ntrials = 5")),
        ("key outside section", format!("k_users = 2\n{SMALL}")),
        ("duplicate", SMALL.replace("seed = 9", "seed = 9\nseed = 10")),
        ("missing start", SMALL.replace("sweep_start = 10\n", "")),
        ("empty scheme list", SMALL.replace("BUS, CUS, RUS", " , ")),
        ("unknown scheme", SMALL.replace("BUS, CUS, RUS", "BUS, XUS")),
        ("zero step", SMALL.replace("sweep_step = 10", "sweep_step = 0")),
        ("reversed range", SMALL.replace("sweep_stop = 20", "sweep_stop = 5")),
        ("bad number", SMALL.replace("r_e_m = 10", "r_e_m = ten")),
        ("unknown param", SMALL.replace("rho_B_dB", "rho_X")),
        ("empty outputs", SMALL.replace("seed = 9", "seed = 9\noutputs =")),
        ("zero trials", SMALL.replace("trials = 20000", "trials = 0")),
        ("unknown section", SMALL.replace("[radio]", "[antenna]")),
        ("not key = value", SMALL.replace("alpha = 2.2", "alpha 2.2")),
    ];
    for (what, text) in bad {
        assert!(parse_config(&text).is_err(), "{what} accepted");
    }
    let frac = "[sweep]\nsweep_param = K\nsweep_start = 1\nsweep_stop = 2\nsweep_step = 0.5\n";
    assert!(parse_config(frac).is_err());
}

#[test]
fn sweep_parameter_names_round_trip() {
    for p in SweepParam::ALL {
        assert_eq!(p.as_str().parse::<SweepParam>().unwrap(), p);
    }
    let o: Outputs = "mc, asym".parse().unwrap();
    assert!(o.mc && !o.exact && o.asym);
}

fn finite_or_nan() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(f64::NAN),
        Just(0.0),
        Just(1.0),
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        (0.0f64..1.0),
    ]
}

fn row() -> impl Strategy<Value = Row> {
    (
        finite_or_nan(),
        prop::sample::select(Scheme::ALL.to_vec()),
        prop::collection::vec(finite_or_nan(), 13),
        "[ -~]{0,30}",
    )
        .prop_map(|(v, scheme, xs, reason)| Row {
            sweep_value: v,
            scheme,
            sop_mc: xs[0],
            stderr: xs[1],
            sop_exact: xs[2],
            sop_asym: xs[3],
            terms: xs[4..13].try_into().unwrap(),
            reason,
        })
}

proptest! {
    #[test]
    fn csv_round_trip(
        rows in prop::collection::vec(row(), 0..6),
        param in prop::sample::select(SweepParam::ALL.to_vec()),
    ) {
        let table = ResultTable { param, rows };
        let text = table.to_csv_string();
        prop_assert!(text.starts_with(SCHEMA_TAG));
        let back = ResultTable::from_csv_str(&text).unwrap();
        prop_assert_eq!(back, table);
    }
}

#[test]
fn csv_layout() {
    let mut r = Row::empty(5.0, Scheme::Cus);
    r.sop_mc = 0.25;
    r.add_reason("a");
    r.add_reason("b, c");
    let t = ResultTable {
        param: SweepParam::RhoBothDb,
        rows: vec![r],
    };
    let text = t.to_csv_string();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), format!("{SCHEMA_TAG}; sweep_param=rho_both_dB"));
    let header: Vec<_> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[..6], ["sweep_value", "scheme", "sop_mc", "stderr", "sop_exact", "sop_asym"]);
    assert_eq!(header[6..15], TERM_COLUMNS);
    assert_eq!(header[15], "reason");
    assert!(lines.next().unwrap().starts_with("5,CUS,0.25,NaN,"));
    assert!(ResultTable::from_csv_str(&text.replacen("v1", "v2", 1)).is_err());
    assert!(ResultTable::from_csv_str(&text.replacen("sop_mc", "sop", 1)).is_err());
}

#[test]
fn sweep_rows_follow_value_then_scheme_order() {
    let spec = parse_config(SMALL).unwrap();
    let t = run_sweep(&spec).unwrap();
    let keys: Vec<_> = t.rows.iter().map(|r| (r.sweep_value, r.scheme)).collect();
    let mut want = Vec::new();
    for v in [10.0, 20.0] {
        for s in Scheme::ALL {
            want.push((v, s));
        }
    }
    assert_eq!(keys, want);
    // RUS shares the one-user closed form; BUS and CUS have their own.
    for r in &t.rows {
        assert!(r.sop_exact > 0.0 && r.sop_exact < 1.0);
        assert!(r.sop_mc.is_finite() && r.stderr > 0.0);
    }
    // High-SNR limits along one SNR axis exist for one user only.
    assert!(t.rows.iter().all(|r| r.sop_asym.is_nan() || r.scheme == Scheme::Rus));
    let report = compare_report(&t, &TolerancePolicy::default());
    assert!(report.passed(), "{report}");
}

#[test]
fn unavailable_exact_values_carry_a_reason() {
    // ε_B ε_th = 1 exactly: the closed forms are singular there.
    let text = SMALL
        .replace("r_b_rate = 0.9", "r_b_rate = 1")
        .replace("r_th_rate = 0.1", "r_th_rate = 1")
        .replace("trials = 20000", "trials = 1000");
    let t = run_sweep(&parse_config(&text).unwrap()).unwrap();
    for r in &t.rows {
        assert!(r.sop_exact.is_nan());
        assert!(!r.reason.is_empty());
        assert!(r.sop_mc.is_finite());
    }
    let report = compare_report(&t, &TolerancePolicy::default());
    assert!(!report.passed());
    assert_eq!(report.skipped, t.rows.len());
}

#[test]
fn compare_flags_disagreement() {
    let mut good = Row::empty(0.0, Scheme::Bus);
    (good.sop_mc, good.stderr, good.sop_exact) = (0.5, 1e-3, 0.5029);
    let mut bad = good.clone();
    bad.sop_exact = 0.51;
    let policy = TolerancePolicy::default();
    assert_eq!(policy.allowed(1e-3), 3e-3);
    assert_eq!(policy.allowed(1e-4), 2e-3);
    let t = ResultTable {
        param: SweepParam::RhoBDb,
        rows: vec![good.clone(), bad, Row::empty(1.0, Scheme::Rus)],
    };
    let r = compare_report(&t, &policy);
    assert_eq!((r.verdicts.len(), r.failures(), r.skipped), (2, 1, 1));
    assert!(!r.passed());
    assert!(r.to_string().contains("2 compared, 1 failed, 1 skipped"));
}

#[test]
fn plot_script_has_one_series_per_scheme_and_output() {
    let mut rows = Vec::new();
    for v in [0.0, 10.0] {
        for s in Scheme::ALL {
            let mut r = Row::empty(v, s);
            (r.sop_mc, r.stderr, r.sop_exact) = (0.5, 0.01, 0.5);
            rows.push(r);
        }
    }
    let t = ResultTable {
        param: SweepParam::RhoBDb,
        rows,
    };
    let style = PlotStyle {
        title: Some("demo".into()),
        terminal: Some(("pngcairo".into(), "out.png".into())),
    };
    let script = emit_plot_script(&t, "res.csv", &style).unwrap();
    assert!(script.contains("data = \"res.csv\""));
    assert_eq!(script.matches("data skip 2").count(), 6, "{script}");
    assert!(script.contains("set output \"out.png\""));
    assert!(script.contains("set logscale y"));
    assert!(script.contains("strcol(2) eq \"RUS\""));
    let empty = ResultTable {
        param: SweepParam::RhoBDb,
        rows: vec![],
    };
    assert!(emit_plot_script(&empty, "x.csv", &PlotStyle::default()).is_err());
    let nothing = ResultTable {
        param: SweepParam::RhoBDb,
        rows: vec![Row::empty(0.0, Scheme::Bus)],
    };
    assert!(emit_plot_script(&nothing, "x.csv", &PlotStyle::default()).is_err());
}

#[test]
fn binary_sweep_compare_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    fs::write(&cfg, SMALL).unwrap();
    let csv = dir.path().join("out.csv");

    let st = bin()
        .args(["sweep", cfg.to_str().unwrap(), "-o", csv.to_str().unwrap(), "--plot"])
        .env(WORKERS_ENV, "2")
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(EXIT_OK as i32));
    let text = fs::read_to_string(&csv).unwrap();
    let table = ResultTable::from_csv_str(&text).unwrap();
    assert_eq!(table.rows.len(), 6);
    let gp = fs::read_to_string(dir.path().join("out.gp")).unwrap();
    assert!(gp.contains("data = \"out.csv\""));

    // The same sweep on one worker writes the same file.
    let csv1 = dir.path().join("one.csv");
    let st = bin()
        .args(["sweep", cfg.to_str().unwrap(), "-o", csv1.to_str().unwrap()])
        .env(WORKERS_ENV, "1")
        .status()
        .unwrap();
    assert!(st.success());
    assert_eq!(fs::read_to_string(&csv1).unwrap(), text);

    let out = bin().args(["compare", csv.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK as i32));
    assert!(String::from_utf8_lossy(&out.stdout).contains("6 compared, 0 failed"));

    // Corrupt one exact value.
    let mut bad = table.clone();
    bad.rows[2].sop_exact += 0.2;
    let bad_csv = dir.path().join("bad.csv");
    fs::write(&bad_csv, bad.to_csv_string()).unwrap();
    let st = bin().args(["compare", bad_csv.to_str().unwrap()]).status().unwrap();
    assert_eq!(st.code(), Some(EXIT_COMPARE_FAILED as i32));

    let script = dir.path().join("fig.gp");
    let st = bin()
        .args(["plot", csv.to_str().unwrap(), "-o", script.to_str().unwrap(), "--png", "fig.png"])
        .status()
        .unwrap();
    assert!(st.success());
    assert!(fs::read_to_string(&script).unwrap().contains("fig.png"));
}

#[test]
fn binary_exit_codes_for_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let st = bin().arg("frobnicate").status().unwrap();
    assert_eq!(st.code(), Some(EXIT_USAGE as i32));
    let st = bin().arg("--help").output().unwrap().status;
    assert_eq!(st.code(), Some(EXIT_OK as i32));
    let missing = dir.path().join("nope.toml");
    let st = bin().args(["sweep", missing.to_str().unwrap()]).status().unwrap();
    assert_eq!(st.code(), Some(EXIT_USAGE as i32));
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, SMALL.replace("alpha", "alfa")).unwrap();
    let out = bin().args(["sweep", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE as i32));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alfa"));
    let st = bin()
        .args(["sweep", cfg.to_str().unwrap()])
        .env(WORKERS_ENV, "zero")
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(EXIT_USAGE as i32));
    // --plot needs an output path.
    let st = bin().args(["sweep", cfg.to_str().unwrap(), "--plot"]).status().unwrap();
    assert_eq!(st.code(), Some(EXIT_USAGE as i32));
    let st = bin().args(["selftest", "--trials", "0"]).status().unwrap();
    assert_eq!(st.code(), Some(EXIT_USAGE as i32));
}

#[test]
fn sweep_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    fs::write(
        &cfg,
        SMALL
            .replace("sweep_stop = 20", "sweep_stop = 10")
            .replace("BUS, CUS, RUS", "BUS")
            .replace("seed = 9", "seed = 9\noutputs = exact"),
    )
    .unwrap();
    let out = bin().args(["sweep", cfg.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    let t = ResultTable::from_csv_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert!(t.rows[0].sop_mc.is_nan() && t.rows[0].sop_exact.is_finite());
}
