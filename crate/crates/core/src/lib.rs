//! Small-signal microwave amplifier design.
//!
//! The crate walks a two-port device from measured S-parameters through
//! stability classification, simultaneous conjugate matching, matching
//! network synthesis, microstrip realization and DC bias design, and closes
//! the loop by cascading the synthesized networks with the device.

// NaN-rejecting guards are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bias;
pub mod config;
pub mod error;
pub mod gain;
pub mod microstrip;
pub mod noise;
pub mod pipeline;
pub mod report;
pub mod stability;
pub mod synth;
pub mod touchstone;
pub mod twoport;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64;
