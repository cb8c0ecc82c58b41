//! Exact arithmetic toolkit for the involution random walk on `S_n`.
//!
//! One step multiplies by a product of `n/2` disjoint transpositions drawn
//! uniformly, each transposition kept independently with probability `1 - p`.

pub mod bounds;
pub mod characters;
pub mod error;
pub mod exact;
pub mod order;
pub mod partition;
pub mod spectrum;
pub mod walk;

pub use error::{Error, Result};
pub use partition::{CycleType, Partition};
pub use spectrum::WalkParams;
