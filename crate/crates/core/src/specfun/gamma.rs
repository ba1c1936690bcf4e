//! Incomplete gamma functions of integer order.
//!
//! Every closed form in this crate needs `Γ(1−N, x)` for an integer antenna
//! count `N`, plus `Γ(N, x)` and `γ(N, x)`. Non-positive orders are obtained
//! from `Γ(0, x) = E₁(x)` by the downward recurrence
//! `Γ(a, x) = (Γ(a+1, x) − x^a e^{−x}) / a` when `x < 1`. For `x ≥ 1` the
//! recurrence cancels badly (each step loses roughly `log10 x` digits), so a
//! Lentz continued fraction is used instead.
//!
//! ```
//! use sgf_secrecy::specfun::upper_incomplete_gamma;
//! let g = upper_incomplete_gamma(-1.0, 1.0).unwrap();
//! assert!((g - 0.148_495_506_8).abs() < 1e-9);
//! ```

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const TINY: f64 = 1e-300;
const EPS: f64 = 1e-16;
const MAX_ITER: usize = 100_000;

/// Checks that `a` is of the form `1 − N` with integer `N ≥ 0` and returns `N`.
fn order_from_a(a: f64) -> Result<u32> {
    let n = 1.0 - a;
    if !(n >= 0.0) || n.fract() != 0.0 || n > 1000.0 {
        return Err(Error::domain(format!(
            "incomplete gamma order a = {a} must be 1 - N for an integer N >= 0"
        )));
    }
    Ok(n as u32)
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() || x == f64::INFINITY {
        Ok(())
    } else {
        Err(Error::domain(format!("incomplete gamma argument x = {x} must be > 0")))
    }
}

/// Exponential integral `E₁(x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    check_x(x)?;
    if x < 1.0 {
        Ok(e1_series(x))
    } else {
        Ok((-x).exp() * scaled_upper_cf(0.0, x))
    }
}

fn e1_series(x: f64) -> f64 {
    // E₁(x) = −γ − ln x − Σ_{k≥1} (−x)^k / (k·k!)
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < EPS * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// `e^x Γ(s, x)` by the modified Lentz continued fraction. Used for `x ≥ 1`.
fn scaled_upper_cf(s: f64, x: f64) -> f64 {
    x.powf(s) * upper_cf_tail(s, x)
}

/// The continued-fraction part `e^x x^{−s} Γ(s, x)`.
fn upper_cf_tail(s: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// `e^x Γ(1−n, x)` for `x < 1`, by downward recurrence from `E₁`.
fn scaled_upper_small(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let ex = x.exp();
    let mut g = ex * e1_series(x); // a = 0
    let mut a = 0.0_f64;
    for _ in 1..n {
        a -= 1.0;
        // e^x Γ(a,x) = (e^x Γ(a+1,x) − x^a) / a
        g = (g - x.powf(a)) / a;
    }
    g
}

/// Upper incomplete gamma `Γ(a, x)` for `a = 1 − N`, `N ≥ 0` an integer.
///
/// Returns exactly `0` once `e^{−x}` underflows.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    let n = order_from_a(a)?;
    check_x(x)?;
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    let scaled = scaled_inner(n, x);
    let e = (-x).exp();
    if e == 0.0 {
        return Ok(0.0);
    }
    Ok(scaled * e)
}

/// `e^x Γ(a, x)` for `a = 1 − N`; stays representable where `Γ(a, x)` underflows.
pub fn upper_incomplete_gamma_scaled(a: f64, x: f64) -> Result<f64> {
    let n = order_from_a(a)?;
    check_x(x)?;
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    Ok(scaled_inner(n, x))
}

fn scaled_inner(n: u32, x: f64) -> f64 {
    if n == 0 {
        1.0
    } else if x < 1.0 {
        scaled_upper_small(n, x)
    } else {
        scaled_upper_cf(1.0 - n as f64, x)
    }
}

/// `z^n e^z Γ(1−n, z)`. Equals 1 for `n = 0` and tends to 1 as `z → ∞`.
///
/// This is the well-scaled form of `∫₀^∞ y^{n−1} e^{−μy} / (y + β) dy`,
/// which equals `Γ(n) · tail_ratio(n, βμ) / (β μ^n)`. At `z = 0` the
/// limit 0 is returned for `n ≥ 1`.
pub fn tail_ratio(n: u32, z: f64) -> f64 {
    if n == 0 || z == f64::INFINITY {
        return 1.0;
    }
    if z == 0.0 {
        return 0.0;
    }
    if z < 1.0 {
        // T_{m+1} = z (1 − T_m) / m, from the downward recurrence scaled by
        // z^m; no power of z is ever formed, so tiny z cannot overflow.
        let mut t = z * z.exp() * e1_series(z);
        for m in 1..n {
            t = z * (1.0 - t) / m as f64;
        }
        t
    } else {
        z * upper_cf_tail(1.0 - n as f64, z)
    }
}

/// `Γ(n) = (n−1)!` for a positive integer `n`.
pub fn gamma_int(n: u32) -> f64 {
    (1..n).map(f64::from).product()
}

/// Upper incomplete gamma `Γ(n, x)` for a positive integer order.
pub fn upper_gamma_int(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("upper_gamma_int needs n >= 1"));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(format!("upper_gamma_int argument x = {x} must be >= 0")));
    }
    // Γ(n,x) = (n−1)! e^{−x} Σ_{k<n} x^k / k!
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..n {
        term *= x / k as f64;
        sum += term;
    }
    Ok(gamma_int(n) * (-x).exp() * sum)
}

/// Lower incomplete gamma `γ(n, x)` for a positive integer order, by its
/// power series (no cancellation for small `x`).
pub fn lower_gamma_int(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("lower_gamma_int needs n >= 1"));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(format!("lower_gamma_int argument x = {x} must be >= 0")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x > n as f64 + 1.0 {
        return Ok(gamma_int(n) - upper_gamma_int(n, x)?);
    }
    // γ(n,x) = x^n e^{−x} Σ_k x^k / (n(n+1)…(n+k))
    let mut term = 1.0 / n as f64;
    let mut sum = term;
    for k in 1..MAX_ITER {
        term *= x / (n as f64 + k as f64);
        sum += term;
        if term < EPS * sum {
            break;
        }
    }
    Ok(x.powi(n as i32) * (-x).exp() * sum)
}
