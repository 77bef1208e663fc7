//! Reference-guided ensemble fusion of grayscale image restorations.
//!
//! Candidate restorations are tiled into square blocks; each output block is
//! copied from the candidate whose block has the highest MS-SSIM against the
//! reference. The crate also carries the evaluation machinery around it:
//! image-quality and histogram metrics, binary-classifier metrics with exact
//! binomial intervals, and one-way ANOVA with Levene and Tukey HSD.

// `!(a >= b)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod error;
pub mod format;
pub mod fusion;
pub mod image;
pub mod metrics;
mod special;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use image::GrayImage;
