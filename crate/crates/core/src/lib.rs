//! Exact and certified-numeric calculus for homeomorphisms of the line that
//! commute with integer translation, finitely generated group representations
//! into that group, fixed-point linking combinatorics, constructive conjugacy
//! synthesis, and the geometry of the skew orbit-space strip.
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm` feature
//! instead of `std` for floating-point math on bare targets. All operations
//! are pure functions over immutable values and are safe to call from
//! multiple threads.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod conjugacy;
pub mod coord;
pub mod element;
pub mod fixed_points;
pub mod linking;
pub mod models;
pub mod moebius;
pub mod orbitspace;
pub mod plz;
pub mod rat;
mod real;
pub mod reps;
pub mod words;

pub use element::{Coord, ElementClass, ElementError, LineElement, Orientation, RatInterval};
pub use fixed_points::{FixedPoint, FixedPointKind, FixedPointSet};
pub use moebius::MoebiusLift;
pub use plz::PlMap;
pub use rat::Rat;
pub use words::{Letter, Word};
