//! Exact Frobenius numbers, closed-form bounds, and seeded statistical
//! experiments over primitive integer vectors.
//!
//! The Frobenius number F(a) of a primitive vector a (positive integer
//! entries with gcd 1) is the largest integer that cannot be written as
//! a nonnegative integer combination of the entries. This crate
//! computes it exactly by two independent algorithms, evaluates the
//! classical closed-form bounds around it, and runs reproducible Monte
//! Carlo or exhaustive experiments over the primitive vectors of a box
//! {1..T}^n: tail estimates, moment estimates, expectation floors, and
//! the exact empirical inequalities tying them together.
//!
//! ```
//! use froblab::{frobenius, PrimitiveVector};
//!
//! let a = PrimitiveVector::new(vec![6, 9, 20]).unwrap();
//! assert_eq!(frobenius::frobenius(&a).unwrap().value, 43);
//! ```
//!
//! Everything is deterministic: sampling is a pure function of
//! (seed, draw index) and batch reductions run in draw order, so any
//! experiment re-run with the same seed produces identical results for
//! any worker count.

pub mod bounds;
pub mod error;
pub mod frobenius;
pub mod parallel;
pub mod report;
pub mod sampler;
pub mod stats;
pub mod vector;

pub use error::{Error, Result};
pub use frobenius::{Algorithm, FrobeniusResult};
pub use sampler::{SampleBatch, SampleMode, SampleSpec};
pub use stats::Variable;
pub use vector::{gcd_vector, PrimitiveVector};
