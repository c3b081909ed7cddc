//! Theorem procedures and instance generators.

pub mod generators;
pub mod transform;
pub mod chc;
pub mod hv;
pub mod four_fifths;
pub mod crossings;
pub mod two_trees;
