//! Synchronization of annotated football event data with tracking data.

// Checks are written as `!(x >= bound)` on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod eval;
pub mod ingest;
pub mod model;
pub mod scoring;
pub mod signal;
pub mod sync;
pub mod synthgen;
pub mod track;

pub use error::{Error, Result};
