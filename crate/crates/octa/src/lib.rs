//! Verification and exhaustive-search toolkit for octahedral systems: the
//! colourful hypergraphs that encode which colourful simplices of a point
//! configuration contain the origin.
//!
//! The crate provides
//! - a dimension-generic combinatorial model ([`model`]),
//! - the large/small parity tables and the score invariant ([`tables`]),
//! - property verification and brute-force minimum oracles ([`verify`]),
//! - exact rational geometry bridging point configurations to hypergraphs
//!   ([`geometry`]),
//! - the case-decomposed branch-and-prune search for lower bounds
//!   ([`search`]),
//! - and the `octa` command-line front end ([`cli`]).

pub mod cli;
pub mod error;
pub mod geometry;
pub mod model;
pub mod search;
pub mod symmetry;
pub mod tables;
pub mod verify;

pub use error::{Error, Result};
