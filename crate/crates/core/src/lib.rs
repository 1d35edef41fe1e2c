//! Purely functional data structures with executable amortized analysis.
//!
//! Each structure ([`stack`], [`heap`], [`finger_tree`]) comes with its
//! operations, a potential function, timing functions that mirror the
//! recursion of each operation, and metered variants of the operations that
//! count one unit per clause entry. [`cost`] holds the structure-agnostic
//! accounting and [`verify`] turns the amortized bounds into executable
//! suites.

pub mod cost;
pub mod finger_tree;
pub mod heap;
pub mod stack;
pub mod verify;

pub use cost::{Cost, OpLabel, Potential, StepRecord, Trace};
