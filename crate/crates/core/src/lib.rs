// `!(x > 0.0)` is the NaN-rejecting form used for argument checks, and
// special-function coefficients keep their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod config;
pub mod error;
pub mod grid;
pub mod harness;
pub mod kernels;
pub mod pointwise;
pub mod quadrature;
pub mod random;
pub mod solver;
pub mod special;
pub mod symbols;
pub mod verify;

pub use error::{Error, Result};
