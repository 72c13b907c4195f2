//! Stability of multivariate polynomials on products of open circular domains.
//!
//! The crate provides sparse complex polynomials, circular domains and Möbius
//! maps, a slice-based stability oracle, linear operators with their algebraic
//! and truncated transcendental symbols, composition and apolarity checks, and
//! the statistical-mechanics applications (Ising partition functions, matching
//! polynomials, the circle theorem).

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod apolarity;
pub mod compose;
pub mod domains;
pub mod error;
pub mod operators;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod roots;
pub mod statmech;

pub use error::{Error, Result};
pub use poly::{ExponentVector, MultiPoly, C64};
