//! Exact computation with non-classical polynomials over `F_p^n`.
//!
//! The crate covers polynomial phases `F_p^n -> R/Z` with p-power
//! denominators, Gowers uniformity norms and analytic rank, classical
//! symmetric multilinear forms, weighted-degree polynomials on `Z^m`, and
//! Host-Kra cube groups of filtered abelian groups. All identities are
//! checked with exact integer arithmetic wherever the objects allow it.

pub mod algebra;
pub mod catalog;
pub mod cubes;
pub mod error;
pub mod gowers;
pub mod harness;
pub mod multilinear;
pub mod ncpoly;
pub mod rng;
pub mod weighted;

pub use error::{Error, Result};
