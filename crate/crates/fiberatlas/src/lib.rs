//! Command-line front end for `fiberatlas-core`: argument and file parsing,
//! deterministic JSON reports, SVG pictures, and thread-pool drivers for the
//! embarrassingly parallel numerical stages.
//!
//! The worker count follows `FIBERATLAS_THREADS` when set; results are
//! always merged in input order, so reports do not depend on it.

pub mod cli;
pub mod failure;
pub mod input;
pub mod json;
pub mod parallel;
pub mod report;
pub mod svg;

pub use failure::Failure;
