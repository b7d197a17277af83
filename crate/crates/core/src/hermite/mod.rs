//! Hermite functions, quadrature, and coefficient tensors.

mod expansion;
mod functions;
pub mod io;
mod quadrature;
mod tensor;

pub use expansion::{analyze, analyze_fn, analyze_with, synthesize, synthesize_with, GridFunction, ANALYZE_MARGIN};
pub(crate) use expansion::{contract_axis, ln_scaled_profile, unravel};
pub use functions::{hermite_eval, hermite_eval_multi, hermite_functions, H0_AT_ZERO};
pub(crate) use functions::ScaledSeq;
pub use quadrature::{gauss_hermite_grid, GaussHermiteRule, Grid, GridKind};
pub(crate) use quadrature::gauss_hermite_rule;
pub use tensor::{l2_norm, CoeffTensor, MultiIndex, TruncationBox};
