//! Special functions and quadrature.
//!
//! Everything here is a pure function of its arguments.

mod gamma;
mod omega5;
mod quadrature;

pub use gamma::{
    exp_integral_e1, gamma_int, lower_gamma_int, tail_ratio, upper_gamma_int,
    upper_incomplete_gamma, upper_incomplete_gamma_scaled,
};
pub use omega5::{omega5, omega5_moment};
pub use quadrature::{
    adaptive_integrate, gauss_chebyshev_rule, Integral, QuadratureRule, SUBDIVISION_LIMIT,
};
