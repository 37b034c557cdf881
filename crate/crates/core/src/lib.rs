//! A laboratory for multigraph edge coloring.
//!
//! The crate provides:
//!
//! - [`graph`]: loopless multigraphs with first-class parallel edges,
//!   instance generators and an edge-list text/JSON format;
//! - [`coloring`]: partial k-edge-colorings with one uncolored edge,
//!   missing-color bookkeeping, Kempe chains and flips, and the
//!   elementary / closed / strongly-closed set predicates;
//! - [`tashkinov`]: Tashkinov tree growth, balanced trees, and extended
//!   Tashkinov trees (ETTs) with connecting edge pairs, ladders and the
//!   tree-order comparator;
//! - [`fractional`]: exact fractional chromatic index by enumeration over
//!   odd induced subgraphs, with density certificates;
//! - [`oracle`]: exact chromatic index, criticality and elementarity by
//!   backtracking search — the ground truth everything else is checked
//!   against;
//! - [`colorer`]: the constructive engine that colors a graph with a
//!   requested number of colors or emits a density certificate;
//! - [`verify`] and [`props`]: corpus sweeps asserting the sandwich and
//!   Goldberg inequalities, and the structural property suites for trees
//!   and ETTs.

pub mod coloring;
pub mod colorer;
pub mod fractional;
pub mod graph;
pub mod oracle;
pub mod props;
pub mod tashkinov;
pub mod verify;

mod bitset;
mod error;

pub use bitset::{ColorSet, VertexSet};
pub use error::{Error, Result};
