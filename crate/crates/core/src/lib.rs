//! Fine-structure analysis of univariate distributions.
//!
//! The pipeline reads named numeric features, estimates each density with
//! Pareto density estimation, tests unimodality (dip) and skewness
//! (D'Agostino), and renders all features side by side as mirrored-density
//! columns in a single SVG.

// `!(a < b)` is used on purpose so that NaN falls on the rejecting side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dip;
pub mod engine;
pub mod error;
pub mod generators;
pub mod hypothesis;
pub mod ingest;
pub mod pde;
pub mod render;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
