//! Exact combinatorics of set-partition lattices and weighted cumulants.
//!
//! This crate implements, in exact rational arithmetic:
//!
//! - set partitions of `{1..n}` and the elementary maps on them
//!   (crossing detection, singleton removal/insertion, nesting forests),
//! - the partition families `P`, `NC`, `I`, `CI` and their almost-interval
//!   variants, with enumerators and membership predicates,
//! - refinement order, meets/joins inside a family, Möbius functions on
//!   family sub-posets, and Weisner-sum checks,
//! - a catalogue of partition weights (family indicators, monotone and
//!   cyclic-monotone weights, their singleton-insensitive modifications,
//!   q-crossing weights) with singleton-inductivity checks,
//! - weighted moment↔cumulant transforms over three scalar domains
//!   (rationals, sparse multivariate polynomials, square rational matrices
//!   with the diagonal conditional expectation), independence products
//!   (tensor, free, boolean, monotone, fermi-boolean) and CLT moment tables.
//!
//! Everything is exact: there is no floating point anywhere in the core.
//!
//! The `examples/` directory contains one runnable example per capability;
//! the `partition-cumulants` binary exposes the same functionality as a CLI
//! (`families`, `poset`, `weights`, `cumulants`, `verify-paper`).

pub mod algebra;
pub mod checks;
pub mod cumulants;
pub mod error;
pub mod families;
pub mod partition;
pub mod poset;
pub mod weights;

pub use error::{Error, Result};
pub use families::FamilyId;
pub use partition::{NestingForest, Partition};
pub use weights::WeightId;
