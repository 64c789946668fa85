//! Exact computations of symplectic ball-packing invariants of closed
//! 4-manifolds from homological data.
//!
//! A manifold is described by its intersection lattice, first Chern class and
//! symplectic class ([`model`]). From that data the crate computes the
//! invariant `d_Ω` ([`invariants`]), packing-fraction bounds, full-packing
//! thresholds and packing numbers ([`packing`]), exceptional classes and
//! Cremona reduction ([`exceptional`]), and blow-up bookkeeping ([`blowup`]).
//! All arithmetic is exact.

pub mod blowup;
pub mod error;
pub mod exceptional;
pub mod exec;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod model;
pub mod packing;
pub mod rational;

pub use error::{Error, Result};
pub use exec::Exec;
pub use rational::Rational;
