//! Exact computer algebra for the standard-graded rational Weyl algebra:
//! normal-ordered arithmetic, left Groebner bases with syzygies and graded
//! free resolutions, per-degree models of graded modules, and exact
//! Koszul/Ext/Tor dimension tables with concentration verdicts.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod catalog;
mod cech;
pub mod grammar;
pub mod groebner;
pub mod homology;
pub mod matrix;
pub mod model;
pub mod module;
pub mod order;
pub mod suite;
pub mod weyl;

pub use weyl::{Degree, Mono, Rat, WeylElement};
