//! The rational-Gaussian integral `∫₀^∞ x^{n−1} e^{−(cx² + fx)} / (ax + b) dx`.
//!
//! It has a bivariate Fox-H representation, but direct quadrature gives the
//! same number with far less machinery and can be checked against a panel sum.

use super::quadrature::adaptive_integrate;
use crate::error::{Error, Result};

const REL_TOL: f64 = 1e-11;

/// `∫₀^∞ e^{−(cx² + fx)} / (ax + b) dx`.
///
/// ```
/// use sgf_secrecy::specfun::omega5;
/// let v = omega5(0.0, 1.0, 0.0, 1.0).unwrap();
/// assert!((v - 1.0).abs() < 1e-10);
/// ```
pub fn omega5(a: f64, b: f64, c: f64, f: f64) -> Result<f64> {
    omega5_moment(1, a, b, c, f)
}

/// `∫₀^∞ x^{n−1} e^{−(cx² + fx)} / (ax + b) dx` for `n ≥ 1`.
///
/// `n = 1` is [`omega5`]. Larger `n` is the form that arises when the
/// eavesdropper gain has `n` combining branches.
pub fn omega5_moment(n: u32, a: f64, b: f64, c: f64, f: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("omega5 moment order must be >= 1"));
    }
    if !(b > 0.0) {
        return Err(Error::domain(format!("omega5 needs b > 0, got {b}")));
    }
    if !(f > 0.0) {
        return Err(Error::domain(format!("omega5 needs f > 0, got {f}")));
    }
    if !(a >= 0.0 && c >= 0.0) {
        return Err(Error::domain(format!("omega5 needs a, c >= 0, got a = {a}, c = {c}")));
    }
    // Rescale so the integrand decays on a unit length: x = L·u.
    let len = 1.0 / (f + c.sqrt()).max(f64::MIN_POSITIVE);
    let p = (n - 1) as i32;
    let g = |u: f64| {
        let x = len * u;
        let e = (-(c * x + f) * x).exp();
        if e == 0.0 {
            return 0.0;
        }
        x.powi(p) * e / (a * x + b)
    };
    let r = adaptive_integrate(g, 0.0, f64::INFINITY, 1e-300, REL_TOL)?;
    Ok(len * r.value)
}
