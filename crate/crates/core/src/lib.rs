//! Hermite-spectral harmonic analysis on Pilipović and Gelfand–Shilov spaces.
//!
//! Functions are represented by truncated Hermite coefficient tensors. On top of that
//! representation the crate provides fractional Fourier transforms, the Gaussian-window
//! short-time Fourier transform and the Bargmann transform, weight families and decay
//! estimators, and a harness that checks that the different membership criteria agree.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
mod numeric;

pub mod harness;
pub mod hermite;
pub mod spaces;
pub mod transforms;

pub use error::{Error, Result};
pub use numeric::{ln_factorial, SumMode};
