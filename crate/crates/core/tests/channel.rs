//! Channel model, sampler and order-statistic tables.
//!
//! The order-statistic tables are checked against an exact multinomial
//! count: with `K` i.i.d. exponential gains and interval boundaries
//! `b_0 < b_1 < ...`, the event `h_i ∈ [b_a, b_b)` is `C_a < i ≤ C_b`, where
//! `C_m` counts the gains below `b_m`.

use sgf_secrecy::channel::*;
use sgf_secrecy::specfun::adaptive_integrate;

fn exp_cdf(rate: f64, x: f64) -> f64 {
    if x.is_infinite() {
        1.0
    } else {
        -(-rate * x).exp_m1()
    }
}

fn multinomial(counts: &[u32]) -> f64 {
    let mut total = 0;
    let mut c = 1.0;
    for &n in counts {
        for m in 1..=n {
            total += 1;
            c *= total as f64 / m as f64;
        }
    }
    c
}

/// Probability that every `(i, a, b)` in `events` holds, i.e. the `i`-th
/// smallest gain lies in `[bounds[a], bounds[b])`.
fn order_prob(k: u32, rate: f64, bounds: &[f64], events: &[(u32, usize, usize)]) -> f64 {
    // Cell 0 is below bounds[0], cell m is [bounds[m-1], bounds[m]), the last
    // is above the last boundary.
    let mut cells = vec![exp_cdf(rate, bounds[0])];
    for w in bounds.windows(2) {
        cells.push(exp_cdf(rate, w[1]) - exp_cdf(rate, w[0]));
    }
    cells.push(1.0 - exp_cdf(rate, *bounds.last().unwrap()));
    let mut counts = vec![0u32; cells.len()];
    let mut total = 0.0;
    fn walk(
        pos: usize,
        left: u32,
        counts: &mut Vec<u32>,
        cells: &[f64],
        events: &[(u32, usize, usize)],
        total: &mut f64,
    ) {
        if pos + 1 == counts.len() {
            counts[pos] = left;
            // below[m] = number of gains below bounds[m]
            let below: Vec<u32> = (0..cells.len() - 1)
                .map(|m| counts[..=m].iter().sum())
                .collect();
            if events.iter().all(|&(i, a, b)| below[a] < i && i <= below[b]) {
                let p: f64 = counts
                    .iter()
                    .zip(cells)
                    .map(|(&n, &q)| q.powi(n as i32))
                    .product();
                *total += multinomial(counts) * p;
            }
            return;
        }
        for n in 0..=left {
            counts[pos] = n;
            walk(pos + 1, left - n, counts, cells, events, total);
        }
    }
    walk(0, k, &mut counts, &cells, events, &mut total);
    total
}

const RATE: f64 = 0.7;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

#[test]
fn max_cdf_is_binomial_power() {
    for k in 1..=6 {
        let s = max_cdf_terms(k, RATE);
        for x in [0.0, 0.1, 1.0, 4.0, 30.0] {
            let want = exp_cdf(RATE, x).powi(k as i32);
            assert!(close(s.eval(&[x]), want, 1e-12), "K={k} x={x}");
        }
    }
}

#[test]
fn pair_tables_match_multinomial_counts() {
    let pts = [(0.2, 0.9), (0.0, 1.5), (0.5, 0.5), (1.0, 3.0)];
    for k in 2..=5 {
        for i in 1..k {
            for j in i + 1..=k {
                let interval = pair_interval_terms(i, j, k, RATE).unwrap();
                let cdf = pair_cdf_terms(i, j, k, RATE).unwrap();
                for (x, y) in pts {
                    // x < h_i and h_j < y
                    let want = order_prob(k, RATE, &[x, y, f64::INFINITY], &[(i, 0, 2), (j, 0, 1)]);
                    assert!(close(interval.eval(&[x, y]), want, 1e-10), "interval {i},{j} K={k}");
                    // h_i < x and h_j < y: the i-th gain is below x
                    let lo = order_prob(k, RATE, &[0.0, x, y], &[(i, 0, 1), (j, 0, 2)]);
                    assert!(close(cdf.eval(&[x, y]), lo, 1e-10), "cdf {i},{j} K={k}");
                }
            }
        }
    }
}

#[test]
fn pair_interval_limits() {
    let s = pair_interval_terms(1, 3, 4, RATE).unwrap();
    assert!(close(s.eval(&[0.0, f64::INFINITY]), 1.0, 1e-12));
    assert!(s.eval(&[50.0, 50.0]).abs() < 1e-12);
}

#[test]
fn min_max_table_is_interval_power() {
    for k in 2..=6 {
        let s = min_max_cdf_terms(k, RATE).unwrap();
        for (x, y) in [(0.0, 1.0), (0.3, 0.8), (1.0, 10.0)] {
            let want = (exp_cdf(RATE, y) - exp_cdf(RATE, x)).powi(k as i32);
            assert!(close(s.eval(&[x, y]), want, 1e-10), "K={k} x={x} y={y}");
        }
    }
}

#[test]
fn triple_table_matches_multinomial_counts() {
    let pts = [(0.1, 0.4, 0.6, 2.0), (0.0, 0.3, 0.3, 5.0), (0.2, 0.5, 1.0, 1.2)];
    for k_users in 3..=6 {
        for k in 1..=k_users - 2 {
            let s = triple_cdf_terms(k, k_users, RATE).unwrap();
            for (x, y, z, w) in pts {
                let bounds = [x, y, z, w, f64::INFINITY];
                let want = order_prob(
                    k_users,
                    RATE,
                    &bounds,
                    &[(k, 0, 1), (k + 1, 2, 4), (k_users, 2, 3)],
                );
                assert!(close(s.eval(&[x, y, z, w]), want, 1e-9), "k={k} K={k_users}");
            }
        }
    }
}

#[test]
fn top_pair_table_matches_multinomial_counts() {
    for k in 2..=6 {
        let s = top_pair_cdf_terms(k, RATE).unwrap();
        for (x, y, z, w) in [(0.1, 0.4, 0.6, 2.0), (0.0, 0.7, 0.7, f64::INFINITY)] {
            let want = order_prob(
                k,
                RATE,
                &[x, y, z, w, f64::INFINITY],
                &[(k - 1, 0, 1), (k, 2, 3)],
            );
            assert!(close(s.eval(&[x, y, z, w]), want, 1e-10), "K={k}");
        }
    }
}

#[test]
fn densities_integrate_to_box_probabilities() {
    let k = 4;
    let boxes = [([0.1, 0.5], [0.3, 0.9]), ([0.0, 1.0], [0.4, 3.0])];
    for (lo, hi) in boxes {
        let pair = pair_pdf_terms(2, 4, k, RATE).unwrap();
        let want = order_prob(k, RATE, &[lo[0], hi[0], lo[1], hi[1]], &[(2, 0, 1), (4, 2, 3)]);
        assert!(close(pair.integrate_box(&lo, &hi), want, 1e-10));

        let mm = min_max_pdf_terms(k, RATE).unwrap();
        let want = order_prob(k, RATE, &[lo[0], hi[0], lo[1], hi[1]], &[(1, 0, 1), (k, 2, 3)]);
        assert!(close(mm.integrate_box(&lo, &hi), want, 1e-10));

        let top = top_pair_pdf_terms(k, RATE).unwrap();
        let want =
            order_prob(k, RATE, &[lo[0], hi[0], lo[1], hi[1]], &[(k - 1, 0, 1), (k, 2, 3)]);
        assert!(close(top.integrate_box(&lo, &hi), want, 1e-10));
    }
    let tri = triple_pdf_terms(2, 5, RATE).unwrap();
    let (lo, hi) = ([0.1, 0.5, 0.9], [0.4, 0.8, 2.0]);
    let want = order_prob(
        5,
        RATE,
        &[0.1, 0.4, 0.5, 0.8, 0.9, 2.0],
        &[(2, 0, 1), (3, 2, 3), (5, 4, 5)],
    );
    assert!(close(tri.integrate_box(&lo, &hi), want, 1e-10));
}

#[test]
fn table_weights_are_consistent() {
    // The table is 1 at (0, ∞), leaving Σ μ₁, and 0 at x = y = 0.
    for k in 2..=6 {
        let w: Vec<_> = (0..=k - 2).map(|n| min_max_cdf_weights(n, k)).collect();
        let at_open: f64 = w.iter().map(|t| t.0).sum();
        let at_zero: f64 = w.iter().map(|t| t.0 + t.1 - t.2).sum();
        assert!(close(at_open, 1.0, 1e-12), "K={k}");
        assert!(at_zero.abs() < 1e-9, "K={k}");
    }
    assert_eq!(top_pair_weight(0, 2), 2.0);
    assert_eq!(binomial(6, 2), 15.0);
    assert_eq!(binomial(3, 5), 0.0);
}

#[test]
fn tables_reject_bad_indices() {
    assert!(pair_pdf_terms(2, 2, 3, RATE).is_err());
    assert!(pair_cdf_terms(0, 2, 3, RATE).is_err());
    assert!(pair_interval_terms(1, 4, 3, RATE).is_err());
    assert!(min_max_pdf_terms(1, RATE).is_err());
    assert!(triple_cdf_terms(2, 3, RATE).is_err());
    assert!(top_pair_cdf_terms(1, RATE).is_err());
}

fn geometry() -> Geometry {
    Geometry::new(10.0, 10.0, 10.0, 2.2).unwrap()
}

#[test]
fn configuration_is_validated() {
    assert!(Geometry::new(0.0, 1.0, 1.0, 2.0).is_err());
    assert!(Geometry::new(1.0, 1.0, f64::NAN, 2.0).is_err());
    assert!(geometry().with_user_distances(vec![]).is_err());
    assert!(geometry().with_user_distances(vec![1.0, -2.0]).is_err());
    assert!(RadioConfig::new(10.0, 10.0, 0.9, 0.1, 0, 1).is_err());
    assert!(RadioConfig::new(10.0, 10.0, 0.9, 0.1, 2, 0).is_err());
    assert!(RadioConfig::new(10.0, -1.0, 0.9, 0.1, 2, 1).is_err());
    assert!(RadioConfig::new(10.0, 10.0, 0.9, f64::INFINITY, 2, 1).is_err());
}

#[test]
fn thresholds_follow_rates() {
    let c = RadioConfig::new(4.0, 2.0, 1.0, 2.0, 1, 1).unwrap();
    let th = c.thresholds();
    assert_eq!((th.theta_b, th.eps_b, th.alpha_b), (2.0, 1.0, 0.25));
    assert_eq!((th.theta_th, th.eps_th, th.alpha_th), (4.0, 3.0, 1.5));
    assert_eq!(th.eps_product(), 3.0);
}

#[test]
fn eavesdropper_density_integrates_to_one() {
    for n in 1..=4 {
        let c = RadioConfig::new(10.0, 10.0, 0.9, 0.1, n, 1).unwrap();
        let g = geometry();
        let r = adaptive_integrate(|x| pdf_he(x, &g, &c).unwrap(), 0.0, f64::INFINITY, 1e-12, 1e-10)
            .unwrap();
        assert!(close(r.value, 1.0, 1e-9), "N={n}: {}", r.value);
        let mean = adaptive_integrate(
            |x| x * pdf_he(x, &g, &c).unwrap(),
            0.0,
            f64::INFINITY,
            1e-14,
            1e-10,
        )
        .unwrap();
        assert!(close(mean.value, n as f64 / g.rate_e(), 1e-8));
    }
    let c = RadioConfig::new(10.0, 10.0, 0.9, 0.1, 2, 3).unwrap();
    assert!(pdf_he(-1.0, &geometry(), &c).is_err());
    assert!(cdf_hk(f64::NAN, &geometry(), &c).is_err());
    let want = exp_cdf(geometry().rate_f(), 0.004).powi(3);
    assert!(close(cdf_hk(0.004, &geometry(), &c).unwrap(), want, 1e-12));
}

#[test]
fn sampler_sorts_and_tracks_users() {
    let g = Geometry::new(10.0, 10.0, 12.0, 2.2)
        .unwrap()
        .with_user_distances(vec![5.0, 10.0, 20.0, 8.0])
        .unwrap();
    let c = RadioConfig::new(10.0, 10.0, 0.9, 0.1, 3, 4).unwrap();
    let mut rng = trial_rng(3, 0);
    let mut d = sample(&g, &c, &mut rng);
    for t in 1..200 {
        assert!(d.hk2.windows(2).all(|w| w[0] <= w[1]));
        for (pos, &user) in d.order.iter().enumerate() {
            assert_eq!(d.hk2[pos], d.unsorted_gk2[user] / g.user_rate(user));
        }
        let mut seen = d.order.clone();
        seen.sort();
        assert_eq!(seen, vec![0, 1, 2, 3]);
        assert!(d.hb2 > 0.0 && d.he2 > 0.0);
        assert!((0.0..1.0).contains(&d.scheduler_draw));
        resample(&g, &c, &mut trial_rng(3, t), &mut d);
    }
    assert!(!g.is_homogeneous());
    assert!(geometry().is_homogeneous());
}

#[test]
fn trial_streams_are_reproducible_and_distinct() {
    let g = geometry();
    let c = RadioConfig::new(10.0, 10.0, 0.9, 0.1, 2, 3).unwrap();
    let a = sample(&g, &c, &mut trial_rng(11, 5));
    let b = sample(&g, &c, &mut trial_rng(11, 5));
    let other = sample(&g, &c, &mut trial_rng(11, 6));
    assert_eq!(a, b);
    assert_ne!(a.hb2, other.hb2);
}

#[test]
fn sample_means_match_path_loss() {
    let g = geometry();
    let c = RadioConfig::new(10.0, 10.0, 0.9, 0.1, 2, 1).unwrap();
    let n = 200_000;
    let (mut hb, mut he) = (0.0, 0.0);
    for t in 0..n {
        let d = sample(&g, &c, &mut trial_rng(99, t));
        hb += d.hb2;
        he += d.he2;
    }
    let (hb, he) = (hb / n as f64, he / n as f64);
    // Relative standard errors are 1/√n and 1/√(Nn).
    assert!(((hb * g.rate_b()) - 1.0).abs() < 5.0 / (n as f64).sqrt());
    assert!(((he * g.rate_e()) / 2.0 - 1.0).abs() < 5.0 / (2.0 * n as f64).sqrt());
}
