//! The guide under `book/src`, compiled so that `cargo test` runs every
//! snippet in it.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}

#[doc = include_str!("../../../book/src/admission.md")]
pub mod admission {}

#[doc = include_str!("../../../book/src/monte-carlo.md")]
pub mod monte_carlo {}

#[doc = include_str!("../../../book/src/closed-forms.md")]
pub mod closed_forms {}

#[doc = include_str!("../../../book/src/high-snr.md")]
pub mod high_snr {}

#[doc = include_str!("../../../book/src/sweeps.md")]
pub mod sweeps {}
