//! Joint densities and probabilities of sorted i.i.d. exponential gains.
//!
//! With `K` gains of rate `a` sorted as `h_1 ≤ … ≤ h_K`, every function here
//! is a finite sum of exponentials in its arguments, returned as an
//! [`ExpSum`] so the analytic module can integrate it term by term.
//!
//! Argument conventions (all require the arguments to be ordered as listed):
//!
//! | table                      | value                                         |
//! |----------------------------|-----------------------------------------------|
//! | [`max_cdf_terms`]          | `Pr{h_K < x}`                                  |
//! | [`pair_pdf_terms`]         | density of `(h_i, h_j)` at `(x, y)`, `x ≤ y`   |
//! | [`pair_interval_terms`]    | `Pr{x < h_i, h_j < y}`, `x ≤ y`                |
//! | [`pair_cdf_terms`]         | `Pr{h_i < x, h_j < y}`, `x ≤ y`                |
//! | [`min_max_pdf_terms`]      | density of `(h_1, h_K)`                        |
//! | [`min_max_cdf_terms`]      | `Pr{x < h_1, h_K < y}`, `x ≤ y`                |
//! | [`triple_pdf_terms`]       | density of `(h_k, h_{k+1}, h_K)`               |
//! | [`triple_cdf_terms`]       | `Pr{x < h_k < y, z < h_{k+1}, h_K < w}`        |
//! | [`top_pair_pdf_terms`]     | density of `(h_{K−1}, h_K)`                    |
//! | [`top_pair_cdf_terms`]     | `Pr{x < h_{K−1} < y, z < h_K < w}`             |
//!
//! For the triple table `x ≤ y ≤ z ≤ w`; for the top pair `x ≤ y ≤ z ≤ w`.

use crate::error::{Error, Result};

/// One term `coef · exp(−Σ rates[i]·args[i])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub coef: f64,
    pub rates: [f64; 4],
}

/// A finite sum of exponential terms in up to four arguments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExpSum {
    pub terms: Vec<ExpTerm>,
}

impl ExpSum {
    fn push(&mut self, coef: f64, rates: [f64; 4]) {
        self.terms.push(ExpTerm { coef, rates });
    }

    /// Evaluates the sum. Missing trailing arguments are taken as 0, and a
    /// zero rate times an infinite argument contributes nothing.
    pub fn eval(&self, args: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let mut e = 0.0;
                for (r, x) in t.rates.iter().zip(args) {
                    if *r != 0.0 {
                        e += r * x;
                    }
                }
                t.coef * (-e).exp()
            })
            .sum()
    }

    /// Integral of the sum over the box `Π [lo[i], hi[i]]`, one interval per
    /// argument. Used to turn a density into a box probability.
    pub fn integrate_box(&self, lo: &[f64], hi: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let mut v = t.coef;
                for ((r, l), h) in t.rates.iter().zip(lo).zip(hi) {
                    v *= if *r == 0.0 {
                        h - l
                    } else {
                        ((-r * l).exp() - (-r * h).exp()) / r
                    };
                }
                v
            })
            .sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Binomial coefficient as a float.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn sign(p: u32) -> f64 {
    if p.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `Pr{h_K < x} = Σ_{i=0}^K φ_i e^{−i a x}` with `φ_i = C(K,i)(−1)^i`.
pub fn max_cdf_terms(k_users: u32, rate: f64) -> ExpSum {
    let mut s = ExpSum::default();
    for i in 0..=k_users {
        s.push(binomial(k_users, i) * sign(i), [i as f64 * rate, 0.0, 0.0, 0.0]);
    }
    s
}

fn check_pair(i: u32, j: u32, k_users: u32) -> Result<()> {
    if !(1 <= i && i < j && j <= k_users) {
        return Err(Error::domain(format!(
            "pair order statistics need 1 <= i < j <= K, got i = {i}, j = {j}, K = {k_users}"
        )));
    }
    Ok(())
}

/// Coefficients `(φ₁, φ₂, φ₃)` of the pair density, one per `(n, m)`.
fn pair_coeffs(i: u32, j: u32, k_users: u32, rate: f64) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    let denom = factorial(i - 1) * factorial(k_users - j) * factorial(j - i - 1);
    for n in 0..j - i {
        for m in 0..i {
            let p1 = factorial(k_users) * sign(m + n) * binomial(j - i - 1, n)
                * binomial(i - 1, m)
                * rate
                * rate
                / denom;
            let p2 = rate * (m + j - i - n) as f64;
            let p3 = rate * (k_users - j + n + 1) as f64;
            out.push((p1, p2, p3));
        }
    }
    out
}

/// Density of `(h_i, h_j)`, `1 ≤ i < j ≤ K`.
pub fn pair_pdf_terms(i: u32, j: u32, k_users: u32, rate: f64) -> Result<ExpSum> {
    check_pair(i, j, k_users)?;
    let mut s = ExpSum::default();
    for (p1, p2, p3) in pair_coeffs(i, j, k_users, rate) {
        s.push(p1, [p2, p3, 0.0, 0.0]);
    }
    Ok(s)
}

/// `Pr{x < h_i, h_j < y}` for `x ≤ y`.
///
/// This is the closed form obtained by integrating the pair density over
/// `x < u < v < y`. It equals 1 at `(0, ∞)` and 0 at `(∞, ∞)`.
pub fn pair_interval_terms(i: u32, j: u32, k_users: u32, rate: f64) -> Result<ExpSum> {
    check_pair(i, j, k_users)?;
    let mut s = ExpSum::default();
    for (p1, p2, p3) in pair_coeffs(i, j, k_users, rate) {
        let q = p2 + p3;
        s.push(p1 / (p3 * q), [q, 0.0, 0.0, 0.0]);
        s.push(p1 / (p2 * q), [0.0, q, 0.0, 0.0]);
        s.push(-p1 / (p2 * p3), [p2, p3, 0.0, 0.0]);
    }
    Ok(s)
}

/// Joint CDF `Pr{h_i < x, h_j < y}` for `x ≤ y`.
pub fn pair_cdf_terms(i: u32, j: u32, k_users: u32, rate: f64) -> Result<ExpSum> {
    check_pair(i, j, k_users)?;
    let mut s = ExpSum::default();
    for (p1, p2, p3) in pair_coeffs(i, j, k_users, rate) {
        let q = p2 + p3;
        s.push(p1 / (p3 * q), [0.0; 4]);
        s.push(-p1 / (p3 * q), [q, 0.0, 0.0, 0.0]);
        s.push(-p1 / (p2 * p3), [0.0, p3, 0.0, 0.0]);
        s.push(p1 / (p2 * p3), [p2, p3, 0.0, 0.0]);
    }
    Ok(s)
}

fn check_multi(k_users: u32, min: u32) -> Result<()> {
    if k_users < min {
        return Err(Error::domain(format!("this table needs K >= {min}, got K = {k_users}")));
    }
    Ok(())
}

/// Per-`n` weight `μ₀` of the `(h_1, h_K)` density, `n = 0..=K−2`.
fn min_max_mu0(n: u32, k_users: u32, rate: f64) -> f64 {
    factorial(k_users) * sign(n) * binomial(k_users - 2, n) * rate * rate / factorial(k_users - 2)
}

/// Density of `(h_1, h_K)`, `K ≥ 2`.
pub fn min_max_pdf_terms(k_users: u32, rate: f64) -> Result<ExpSum> {
    check_multi(k_users, 2)?;
    let mut s = ExpSum::default();
    for n in 0..=k_users - 2 {
        let mu0 = min_max_mu0(n, k_users, rate);
        s.push(
            mu0,
            [rate * (k_users - n - 1) as f64, rate * (n + 1) as f64, 0.0, 0.0],
        );
    }
    Ok(s)
}

/// The weights `(μ₁, μ₂, μ₃)` of [`min_max_cdf_terms`] for one `n`.
pub fn min_max_cdf_weights(n: u32, k_users: u32) -> (f64, f64, f64) {
    // μ₀ / r^{2α} with the rate factored out.
    let m = min_max_mu0(n, k_users, 1.0);
    let n1 = (n + 1) as f64;
    let kn = (k_users - n - 1) as f64;
    let k = k_users as f64;
    (m / (k * n1), m / (k * kn), m / (n1 * kn))
}

/// `Pr{x < h_1, h_K < y}` for `x ≤ y`, `K ≥ 2`:
/// `Σ_n μ₁ e^{−Kax} + μ₂ e^{−Kay} − μ₃ e^{−(K−n−1)ax − (n+1)ay}`.
pub fn min_max_cdf_terms(k_users: u32, rate: f64) -> Result<ExpSum> {
    check_multi(k_users, 2)?;
    let mut s = ExpSum::default();
    let k = k_users as f64;
    for n in 0..=k_users - 2 {
        let (mu1, mu2, mu3) = min_max_cdf_weights(n, k_users);
        s.push(mu1, [k * rate, 0.0, 0.0, 0.0]);
        s.push(mu2, [0.0, k * rate, 0.0, 0.0]);
        s.push(
            -mu3,
            [rate * (k_users - n - 1) as f64, rate * (n + 1) as f64, 0.0, 0.0],
        );
    }
    Ok(s)
}

fn check_triple(k: u32, k_users: u32) -> Result<()> {
    if !(1 <= k && k + 2 <= k_users) {
        return Err(Error::domain(format!(
            "triple order statistics need 1 <= k <= K-2, got k = {k}, K = {k_users}"
        )));
    }
    Ok(())
}

/// `(ς₀, A₀, B₀, C₀)` for one `(n, m)` pair.
fn triple_base(k: u32, k_users: u32, n: u32, m: u32, rate: f64) -> (f64, f64, f64, f64) {
    let s0 = factorial(k_users) * sign(m + n) * binomial(k_users - k - 2, n) * binomial(k - 1, m)
        * rate.powi(3)
        / (factorial(k_users - k - 2) * factorial(k - 1));
    let a0 = rate * (m + 1) as f64;
    let b0 = rate * (k_users - k - n - 1) as f64;
    let c0 = rate * (n + 1) as f64;
    (s0, a0, b0, c0)
}

/// Density of `(h_k, h_{k+1}, h_K)`, `1 ≤ k ≤ K−2`.
pub fn triple_pdf_terms(k: u32, k_users: u32, rate: f64) -> Result<ExpSum> {
    check_triple(k, k_users)?;
    let mut s = ExpSum::default();
    for n in 0..=k_users - k - 2 {
        for m in 0..k {
            let (s0, a0, b0, c0) = triple_base(k, k_users, n, m, rate);
            s.push(s0, [a0, b0, c0, 0.0]);
        }
    }
    Ok(s)
}

/// `Pr{x < h_k < y, z < h_{k+1}, h_K < w}` for `x ≤ y ≤ z ≤ w`,
/// `1 ≤ k ≤ K−2`. Six terms `ς_i e^{−(A_i x + B_i y + C_i z + W_i w)}` per
/// `(n, m)`, in the order `i = 1..=6`.
pub fn triple_cdf_terms(k: u32, k_users: u32, rate: f64) -> Result<ExpSum> {
    check_triple(k, k_users)?;
    let mut s = ExpSum::default();
    for n in 0..=k_users - k - 2 {
        for m in 0..k {
            let (s0, a0, b0, c0) = triple_base(k, k_users, n, m, rate);
            let w0 = b0 + c0;
            let s1 = s0 / (a0 * b0 * c0);
            let s3 = -s0 / (a0 * b0 * w0);
            let s5 = -s0 / (a0 * c0 * w0);
            s.push(s1, [0.0, a0, b0, c0]);
            s.push(-s1, [a0, 0.0, b0, c0]);
            s.push(s3, [0.0, a0, 0.0, w0]);
            s.push(-s3, [a0, 0.0, 0.0, w0]);
            s.push(s5, [0.0, a0, w0, 0.0]);
            s.push(-s5, [a0, 0.0, w0, 0.0]);
        }
    }
    Ok(s)
}

/// Density of `(h_{K−1}, h_K)`, `K ≥ 2`: `Σ_n μ₀ e^{−(n+1)a x} e^{−a y}`.
pub fn top_pair_pdf_terms(k_users: u32, rate: f64) -> Result<ExpSum> {
    check_multi(k_users, 2)?;
    let mut s = ExpSum::default();
    for n in 0..=k_users - 2 {
        s.push(
            min_max_mu0(n, k_users, rate),
            [rate * (n + 1) as f64, rate, 0.0, 0.0],
        );
    }
    Ok(s)
}

/// Weight `μ₄ = K!(−1)^n C(K−2, n) / ((K−2)!(n+1))` of [`top_pair_cdf_terms`].
pub fn top_pair_weight(n: u32, k_users: u32) -> f64 {
    factorial(k_users) * sign(n) * binomial(k_users - 2, n)
        / (factorial(k_users - 2) * (n + 1) as f64)
}

/// `Pr{x < h_{K−1} < y, z < h_K < w}` for `x ≤ y ≤ z ≤ w`, `K ≥ 2`.
/// Four terms per `n`, in the order `j = 1..=4`, with signs `(−1)^{j+1}`.
pub fn top_pair_cdf_terms(k_users: u32, rate: f64) -> Result<ExpSum> {
    check_multi(k_users, 2)?;
    let mut s = ExpSum::default();
    for n in 0..=k_users - 2 {
        let mu4 = top_pair_weight(n, k_users);
        let c0 = rate * (n + 1) as f64;
        s.push(mu4, [0.0, c0, 0.0, rate]);
        s.push(-mu4, [c0, 0.0, 0.0, rate]);
        s.push(mu4, [c0, 0.0, rate, 0.0]);
        s.push(-mu4, [0.0, c0, rate, 0.0]);
    }
    Ok(s)
}
