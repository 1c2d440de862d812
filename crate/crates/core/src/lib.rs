//! Combinatorial, geometric and numerical machinery for Liouville fibrations
//! whose Hamiltonian flows are incomplete.
//!
//! The crate is organised along the pipeline it implements:
//!
//! * [`word`] parses quadratic words, glues the marked disk into a closed
//!   surface and builds the integer matrices `A`, `T` and the intersection
//!   form `phi`.
//! * [`fiber`] realises a word as a 2-parameter family of closed polygonal
//!   lines, computes cone angles of the translation surfaces they bound, and
//!   checks the exactness condition on a sampled parameter grid.
//! * [`overlap`] decides whether a closed polygonal line bounds an immersed
//!   disk and enumerates inequivalent extensions.
//! * [`newton`] computes Newton polygons of bivariate polynomials and the
//!   genus, puncture count and cone-angle spectrum they predict.
//! * [`numerics`] cross-checks those predictions numerically through
//!   monodromy of the fiber curves and period integrals of the time form.
//!
//! Everything here is `no_std` with `alloc`; IO lives in the companion
//! `fiberatlas` crate.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
mod error;
pub mod fiber;
pub mod grid;
pub mod newton;
pub mod numerics;
pub mod overlap;
pub mod word;

pub use error::{Error, Result};
pub use num_complex::Complex64;
