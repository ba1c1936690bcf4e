//! Oracle and cross-validation suites.
//!
//! `sgf-secrecy selftest` runs suites 1 to 5 with reduced trial counts; the
//! acceptance test target runs all six at full size.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::{
    sop_exact, sop_multi_asym, sop_single_asym_both, sop_single_asym_rho_b,
    sop_single_asym_rho_f, AnalyticOptions,
};
use crate::channel::{
    max_cdf_terms, min_max_cdf_terms, min_max_pdf_terms, pair_interval_terms, pair_pdf_terms,
    top_pair_cdf_terms, top_pair_pdf_terms, trial_rng, triple_cdf_terms, triple_pdf_terms,
    Geometry, RadioConfig,
};
use crate::db_to_linear;
use crate::mc::estimate_sop;
use crate::sgf::Scheme;
use crate::specfun::{omega5, upper_incomplete_gamma};

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    fn run(name: &str, body: impl FnOnce(&mut Vec<String>) -> bool) -> Self {
        let t = Instant::now();
        let mut details = Vec::new();
        let passed = body(&mut details);
        SuiteReport {
            name: name.to_string(),
            passed,
            details,
            elapsed: t.elapsed(),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} ({:.1} s){}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed.as_secs_f64(),
            self.details
                .last()
                .map(|d| format!(": {d}"))
                .unwrap_or_default()
        )
    }
}

fn defaults() -> Geometry {
    Geometry::new(10.0, 10.0, 10.0, 2.2).expect("default geometry is valid")
}

fn radio(rho_b_db: f64, rho_f_db: f64, n: u32, k: u32) -> RadioConfig {
    RadioConfig::new(db_to_linear(rho_b_db), db_to_linear(rho_f_db), 0.9, 0.1, n, k)
        .expect("suite radio parameters are valid")
}

// ---------------------------------------------------------------- suite 1

fn midpoint_omega5(a: f64, b: f64, c: f64, f: f64, panels: usize) -> f64 {
    // Integrate far enough that the exponent reaches 45.
    let x_max = if c > 0.0 {
        (-f + (f * f + 4.0 * c * 45.0).sqrt()) / (2.0 * c)
    } else {
        45.0 / f
    };
    let h = x_max / panels as f64;
    let chunk = 1 << 16;
    (0..panels.div_ceil(chunk))
        .into_par_iter()
        .map(|j| {
            let mut s = 0.0;
            for i in j * chunk..((j + 1) * chunk).min(panels) {
                let x = (i as f64 + 0.5) * h;
                s += (-(c * x * x + f * x)).exp() / (a * x + b);
            }
            s
        })
        .sum::<f64>()
        * h
}

/// Incomplete-Γ recurrence over `a ∈ {1, 0, …, −8}` and `ω₅` against a
/// midpoint panel sum on random parameter draws.
pub fn special_functions_suite(panels: usize, draws: usize) -> SuiteReport {
    SuiteReport::run("special functions", |details| {
        let mut worst_rec: f64 = 0.0;
        for a in (-8..=1).rev() {
            let a = a as f64;
            for i in 0..=64 {
                let x = 10f64.powf(-6.0 + 8.0 * i as f64 / 64.0);
                let lhs = a * upper_incomplete_gamma(a, x).unwrap_or(f64::NAN)
                    + x.powf(a) * (-x).exp();
                let rhs = if a == 1.0 {
                    (1.0 + x) * (-x).exp()
                } else {
                    upper_incomplete_gamma(a + 1.0, x).unwrap_or(f64::NAN)
                };
                let rel = ((lhs - rhs) / rhs).abs();
                worst_rec = if rel.is_nan() { f64::INFINITY } else { worst_rec.max(rel) };
            }
        }
        details.push(format!("recurrence worst relative error {worst_rec:.2e} (limit 1e-9)"));

        let mut rng = ChaCha8Rng::seed_from_u64(20_241_017);
        let mut log_u = |lo: f64, hi: f64| 10f64.powf(rng.random_range(lo..hi));
        let params: Vec<[f64; 4]> = (0..draws)
            .map(|_| [log_u(-2.0, 1.0), log_u(-1.0, 1.0), log_u(-3.0, 1.0), log_u(-2.0, 1.0)])
            .collect();
        let mut worst_w: f64 = 0.0;
        for [a, b, c, f] in params {
            let v = omega5(a, b, c, f).unwrap_or(f64::NAN);
            let oracle = midpoint_omega5(a, b, c, f, panels);
            let rel = ((v - oracle) / oracle).abs();
            worst_w = if rel.is_nan() { f64::INFINITY } else { worst_w.max(rel) };
        }
        details.push(format!(
            "omega5 worst relative error {worst_w:.2e} over {draws} draws, {panels} panels (limit 1e-6)"
        ));
        worst_rec <= 1e-9 && worst_w <= 1e-6
    })
}

// ---------------------------------------------------------------- suite 2

/// An event `lo_i < h_(idx_i) < hi_i` for all constraints, on sorted gains.
struct Event {
    label: String,
    constraints: Vec<(usize, f64, f64)>,
    exact: f64,
}

impl Event {
    fn holds(&self, h: &[f64]) -> bool {
        self.constraints.iter().all(|&(i, lo, hi)| lo < h[i] && h[i] < hi)
    }
}

fn sorted_draw(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let mut h: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    h.sort_by(f64::total_cmp);
    h
}

/// Boxes around ordered centres that do not overlap.
fn ordered_boxes(centres: &[f64], width: f64) -> (Vec<f64>, Vec<f64>) {
    let n = centres.len();
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        let left = if i == 0 { 0.0 } else { 0.5 * (centres[i - 1] + centres[i]) };
        let right = if i + 1 == n {
            f64::INFINITY
        } else {
            0.5 * (centres[i] + centres[i + 1])
        };
        lo.push((centres[i] - width).max(left));
        hi.push((centres[i] + width).min(right));
    }
    (lo, hi)
}

fn order_stat_events(k: usize, points: usize, seed: u64) -> Vec<Event> {
    let kk = k as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut events = Vec::new();
    let add = |events: &mut Vec<Event>, label: String, constraints, exact: f64| {
        events.push(Event {
            label,
            constraints,
            exact,
        })
    };
    let w = 0.2;
    for p in 0..points {
        let s = sorted_draw(&mut rng, k);
        let top = s[k - 1];

        let y = top;
        add(&mut events, format!("max cdf y={y:.3}"), vec![(k - 1, f64::NEG_INFINITY, y)],
            max_cdf_terms(kk, 1.0).eval(&[y]));

        let pairs: Vec<(usize, usize)> =
            (1..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect();
        let (i, j) = pairs[p % pairs.len()];
        let (x, y) = (s[i - 1], s[j - 1] + 0.1);
        let exact = pair_interval_terms(i as u32, j as u32, kk, 1.0).unwrap().eval(&[x, y]);
        add(&mut events, format!("pair ({i},{j}) interval x={x:.3} y={y:.3}"),
            vec![(i - 1, x, f64::INFINITY), (j - 1, f64::NEG_INFINITY, y)], exact);

        let (lo, hi) = ordered_boxes(&[s[i - 1], s[j - 1]], w);
        let exact = pair_pdf_terms(i as u32, j as u32, kk, 1.0).unwrap().integrate_box(&lo, &hi);
        add(&mut events, format!("pair ({i},{j}) density box"),
            vec![(i - 1, lo[0], hi[0]), (j - 1, lo[1], hi[1])], exact);

        let (lo, hi) = ordered_boxes(&[s[0], top], w);
        let exact = min_max_pdf_terms(kk, 1.0).unwrap().integrate_box(&lo, &hi);
        add(&mut events, "min-max density box".into(),
            vec![(0, lo[0], hi[0]), (k - 1, lo[1], hi[1])], exact);

        let (x, y) = (0.5 * s[0], top + 0.1);
        let exact = min_max_cdf_terms(kk, 1.0).unwrap().eval(&[x, y]);
        add(&mut events, format!("min-max interval x={x:.3} y={y:.3}"),
            vec![(0, x, f64::INFINITY), (k - 1, f64::NEG_INFINITY, y)], exact);

        if k >= 3 {
            let m = 1 + p % (k - 2);
            let (lo, hi) = ordered_boxes(&[s[m - 1], s[m], top], w);
            let exact = triple_pdf_terms(m as u32, kk, 1.0).unwrap().integrate_box(&lo, &hi);
            add(&mut events, format!("triple k={m} density box"),
                vec![(m - 1, lo[0], hi[0]), (m, lo[1], hi[1]), (k - 1, lo[2], hi[2])], exact);

            let x = 0.5 * s[m - 1];
            let y = 0.5 * (s[m - 1] + s[m]);
            let z = 0.5 * (y + s[m]);
            let wv = top + 0.1;
            let exact = triple_cdf_terms(m as u32, kk, 1.0).unwrap().eval(&[x, y, z, wv]);
            add(&mut events, format!("triple k={m} interval"),
                vec![(m - 1, x, y), (m, z, f64::INFINITY), (k - 1, f64::NEG_INFINITY, wv)],
                exact);
        }

        let (lo, hi) = ordered_boxes(&[s[k - 2], top], w);
        let exact = top_pair_pdf_terms(kk, 1.0).unwrap().integrate_box(&lo, &hi);
        add(&mut events, "top pair density box".into(),
            vec![(k - 2, lo[0], hi[0]), (k - 1, lo[1], hi[1])], exact);

        let x = 0.5 * s[k - 2];
        let y = 0.5 * (s[k - 2] + top);
        let z = 0.5 * (y + top);
        let wv = top + 0.1;
        let exact = top_pair_cdf_terms(kk, 1.0).unwrap().eval(&[x, y, z, wv]);
        add(&mut events, "top pair interval".into(),
            vec![(k - 2, x, y), (k - 1, z, wv)], exact);
    }
    events
}

fn count_events(events: &[Event], k: usize, draws: u64, seed: u64) -> Vec<u64> {
    const BLOCK: u64 = 1 << 15;
    let blocks = draws.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = trial_rng(seed, b);
            let mut counts = vec![0u64; events.len()];
            for _ in b * BLOCK..((b + 1) * BLOCK).min(draws) {
                let h = sorted_draw(&mut rng, k);
                for (c, e) in counts.iter_mut().zip(events) {
                    *c += e.holds(&h) as u64;
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; events.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Every order-statistics table against sorted exponential draws for
/// `K ∈ {2, 3, 4}`, `points` grid points per table, within 3 standard errors.
pub fn order_statistics_suite(draws: u64, points: usize) -> SuiteReport {
    SuiteReport::run("order statistics", |details| {
        let mut total = 0;
        let mut failed = 0;
        let mut worst: f64 = 0.0;
        for k in [2usize, 3, 4] {
            let events = order_stat_events(k, points, 100 + k as u64);
            let counts = count_events(&events, k, draws, 7 + k as u64);
            for (e, c) in events.iter().zip(counts) {
                let p_hat = c as f64 / draws as f64;
                let se = (e.exact * (1.0 - e.exact) / draws as f64).sqrt();
                let z = (p_hat - e.exact).abs() / se;
                total += 1;
                worst = worst.max(z);
                if !(z <= 3.0) {
                    failed += 1;
                    details.push(format!(
                        "K={k} {}: exact {:.6} mc {:.6} ({z:.2} se)",
                        e.label, e.exact, p_hat
                    ));
                }
            }
        }
        details.push(format!(
            "{total} checks, {failed} beyond 3 se, worst {worst:.2} se, {draws} draws per K"
        ));
        failed == 0
    })
}

// ------------------------------------------------------------ suites 3, 4

const GRID_DB: [f64; 5] = [0.0, 5.0, 10.0, 20.0, 30.0];

fn grid_vs_mc(k: u32, trials: u64, details: &mut Vec<String>) -> bool {
    let g = defaults();
    let options = AnalyticOptions::default();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for &b in &GRID_DB {
        for &f in &GRID_DB {
            let c = radio(b, f, 2, k);
            let exact = match sop_exact(&g, &c, Scheme::Bus, &options) {
                Ok(e) => e.total,
                Err(crate::Error::BranchSingularity { .. }) => continue,
                Err(e) => {
                    details.push(format!("K={k} {b}/{f} dB: {e}"));
                    ok = false;
                    continue;
                }
            };
            let seed = 1000 + n;
            n += 1;
            let m = estimate_sop(&g, &c, Scheme::Bus, trials, seed).expect("valid inputs");
            let allowed = (3.0 * m.stderr).max(2e-3);
            let ratio = (m.p_hat - exact).abs() / allowed;
            worst = worst.max(ratio);
            if ratio > 1.0 {
                ok = false;
                details.push(format!(
                    "K={k} rho_B={b} rho_F={f} dB: exact {exact:.6} mc {:.6} allowed {allowed:.1e}",
                    m.p_hat
                ));
            }
        }
    }
    details.push(format!(
        "K={k}: {n} points, worst |mc-exact|/allowed = {worst:.2}, {trials} trials"
    ));
    ok
}

/// One user: the exact SOP against Monte Carlo over the SNR grid.
pub fn single_user_suite(trials: u64) -> SuiteReport {
    SuiteReport::run("single-user exact vs MC", |d| grid_vs_mc(1, trials, d))
}

/// Best-user scheduling, `K ∈ {2, 3}`: the exact SOP against Monte Carlo.
pub fn multi_user_suite(trials: u64) -> SuiteReport {
    SuiteReport::run("multi-user exact vs MC", |d| {
        let a = grid_vs_mc(2, trials, d);
        let b = grid_vs_mc(3, trials, d);
        a && b
    })
}

// ---------------------------------------------------------------- suite 5

struct Limit {
    name: &'static str,
    k: u32,
    /// SNR pair (ρ_B, ρ_F) in dB at sweep value `s`.
    snr: fn(f64) -> (f64, f64),
    limit: fn(&Geometry, &RadioConfig) -> f64,
    tol: f64,
}

const LIMITS: [Limit; 5] = [
    Limit { name: "rho_B limit", k: 1, snr: |s| (s, 10.0), limit: sop_single_asym_rho_b, tol: 5e-3 },
    Limit { name: "rho_F limit", k: 1, snr: |s| (10.0, s), limit: sop_single_asym_rho_f, tol: 5e-3 },
    Limit { name: "joint limit K=1", k: 1, snr: |s| (s, s), limit: sop_single_asym_both, tol: 1e-2 },
    Limit { name: "joint limit K=2", k: 2, snr: |s| (s, s), limit: sop_multi_asym, tol: 1e-2 },
    Limit { name: "joint limit K=3", k: 3, snr: |s| (s, s), limit: sop_multi_asym, tol: 1e-2 },
];

/// High-SNR limits: agreement with Monte Carlo at 50 dB and a gap to the
/// exact SOP that shrinks over 20, 30, 40, 50 dB.
pub fn asymptote_suite(trials: u64) -> SuiteReport {
    SuiteReport::run("high-SNR limits", |details| {
        let g = defaults();
        let options = AnalyticOptions::default();
        let mut ok = true;
        for (i, l) in LIMITS.iter().enumerate() {
            let (b, f) = (l.snr)(50.0);
            let c = radio(b, f, 2, l.k);
            let asym = (l.limit)(&g, &c);
            let m = estimate_sop(&g, &c, Scheme::Bus, trials, 500 + i as u64).expect("valid");
            let diff = (m.p_hat - asym).abs();
            let gaps: Vec<f64> = [20.0, 30.0, 40.0, 50.0]
                .iter()
                .map(|&s| {
                    let (b, f) = (l.snr)(s);
                    let c = radio(b, f, 2, l.k);
                    let e = sop_exact(&g, &c, Scheme::Bus, &options).map(|e| e.total);
                    (e.unwrap_or(f64::NAN) - (l.limit)(&g, &c)).abs()
                })
                .collect();
            let shrinking = gaps.windows(2).all(|w| w[1] < w[0]);
            let pass = diff <= l.tol && shrinking;
            ok &= pass;
            details.push(format!(
                "{} {}: |mc-limit| at 50 dB = {diff:.1e} (limit {:.0e}); |exact-limit| at 20..50 dB = {}",
                if pass { "ok" } else { "FAILED" },
                l.name,
                l.tol,
                gaps.iter().map(|g| format!("{g:.1e}")).collect::<Vec<_>>().join(", ")
            ));
        }
        details.push(format!("{} limits checked, {trials} trials", LIMITS.len()));
        ok
    })
}

// ---------------------------------------------------------------- suite 6

/// Monte Carlo curve with standard errors.
fn mc_curve(points: &[(Geometry, RadioConfig)], scheme: Scheme, trials: u64) -> Vec<(f64, f64)> {
    points
        .iter()
        .map(|(g, c)| {
            let m = estimate_sop(g, c, scheme, trials, 42).expect("valid inputs");
            (m.p_hat, m.stderr)
        })
        .collect()
}

/// `b − a` is not significantly negative.
fn not_below(a: (f64, f64), b: (f64, f64)) -> bool {
    b.0 - a.0 >= -3.0 * (a.1 * a.1 + b.1 * b.1).sqrt()
}

/// `b − a` is significantly positive.
fn clearly_above(a: (f64, f64), b: (f64, f64)) -> bool {
    b.0 - a.0 > 3.0 * (a.1 * a.1 + b.1 * b.1).sqrt()
}

fn fmt_curve(xs: &[f64], ys: &[(f64, f64)]) -> String {
    xs.iter()
        .zip(ys)
        .map(|(x, y)| format!("{x}:{:.4}", y.0))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Qualitative shape of the published curves, on Monte Carlo output.
///
/// A step counts as going the wrong way only when it is more than three
/// standard errors of the difference.
pub fn figure_shape_suite(trials: u64) -> SuiteReport {
    SuiteReport::run("figure shapes", |details| {
        let g = defaults();
        let mut ok = true;
        let mut record = |name: &str, pass: bool, curve: String| {
            ok &= pass;
            details.push(format!("{} {name}: {curve}", if pass { "ok" } else { "FAILED" }));
        };

        // (a) rises then falls with rho_B.
        let xs: Vec<f64> = (0..=20).map(|i| 2.0 * i as f64).collect();
        let pts: Vec<_> = xs.iter().map(|&x| (g.clone(), radio(x, 10.0, 2, 1))).collect();
        let ys = mc_curve(&pts, Scheme::Bus, trials);
        let peak = (0..ys.len()).max_by(|&a, &b| ys[a].0.total_cmp(&ys[b].0)).unwrap();
        let pass = peak > 0
            && peak + 1 < ys.len()
            && clearly_above(ys[0], ys[peak])
            && clearly_above(ys[ys.len() - 1], ys[peak])
            && ys[..=peak].windows(2).all(|w| not_below(w[0], w[1]))
            && ys[peak..].windows(2).all(|w| not_below(w[1], w[0]));
        record("(a) unimodal in rho_B", pass, fmt_curve(&xs, &ys));

        // (b) interior minimum then a plateau with rho_B = rho_F.
        let xs: Vec<f64> = (0..=12).map(|i| 5.0 * i as f64).collect();
        let pts: Vec<_> = xs.iter().map(|&x| (g.clone(), radio(x, x, 2, 1))).collect();
        let ys = mc_curve(&pts, Scheme::Bus, trials);
        let low = (0..ys.len()).min_by(|&a, &b| ys[a].0.total_cmp(&ys[b].0)).unwrap();
        let n = ys.len();
        let rise = ys[n - 1].0 - ys[low].0;
        let pass = low > 0
            && low + 1 < n
            && clearly_above(ys[low], ys[0])
            && clearly_above(ys[low], ys[n - 1])
            && ys[..=low].windows(2).all(|w| not_below(w[1], w[0]))
            && ys[low..].windows(2).all(|w| not_below(w[0], w[1]))
            && (ys[n - 1].0 - ys[n - 2].0).abs() < 0.05 * rise;
        record("(b) minimum then plateau in rho_B = rho_F", pass, fmt_curve(&xs, &ys));

        // (c) decreasing in K.
        let ks = [1u32, 2, 3, 4, 5];
        let mut pass = true;
        let mut curves = Vec::new();
        for rho_b in [0.0, 10.0, 20.0, 30.0] {
            let pts: Vec<_> = ks.iter().map(|&k| (g.clone(), radio(rho_b, 10.0, 2, k))).collect();
            let ys = mc_curve(&pts, Scheme::Bus, trials);
            pass &= ys.windows(2).all(|w| clearly_above(w[1], w[0]));
            curves.push(format!("rho_B={rho_b}: {}", fmt_curve(&ks.map(f64::from), &ys)));
        }
        record("(c) decreasing in K", pass, curves.join(" | "));

        // (d) increasing in N.
        let ns = [1u32, 2, 3, 4, 5];
        let mut pass = true;
        let mut curves = Vec::new();
        for k in [1u32, 2] {
            let pts: Vec<_> = ns.iter().map(|&n| (g.clone(), radio(20.0, 20.0, n, k))).collect();
            let ys = mc_curve(&pts, Scheme::Bus, trials);
            pass &= ys.windows(2).all(|w| clearly_above(w[0], w[1]));
            curves.push(format!("K={k}: {}", fmt_curve(&ns.map(f64::from), &ys)));
        }
        record("(d) increasing in N", pass, curves.join(" | "));

        // (e) BUS <= CUS <= RUS along r_B at 5 dB.
        let xs: Vec<f64> = (1..=15).map(|i| 2.0 * i as f64).collect();
        let pts: Vec<_> = xs
            .iter()
            .map(|&r| {
                let g = Geometry::new(r, 10.0, 10.0, 2.2).expect("valid");
                (g, radio(5.0, 5.0, 2, 3))
            })
            .collect();
        let bus = mc_curve(&pts, Scheme::Bus, trials);
        let cus = mc_curve(&pts, Scheme::Cus, trials);
        let rus = mc_curve(&pts, Scheme::Rus, trials);
        let pass = (0..xs.len()).all(|i| not_below(bus[i], cus[i]) && not_below(cus[i], rus[i]));
        record(
            "(e) BUS <= CUS <= RUS along r_B",
            pass,
            format!(
                "BUS {} | CUS {} | RUS {}",
                fmt_curve(&xs, &bus),
                fmt_curve(&xs, &cus),
                fmt_curve(&xs, &rus)
            ),
        );
        details.push(format!("{trials} trials per point"));
        ok
    })
}

/// Suites 1 to 5 at the sizes used by `sgf-secrecy selftest`.
pub fn selftest(trials: u64) -> Vec<SuiteReport> {
    vec![
        special_functions_suite(10_000_000, 20),
        order_statistics_suite(1_000_000, 20),
        single_user_suite(trials),
        multi_user_suite(trials),
        asymptote_suite(trials),
    ]
}
