//! Exact and certified computations on least common multiples of integer
//! sequences.

pub mod error;
pub mod exact_arith;
pub mod prime_toolkit;
pub mod identities;
pub mod quadratic_lcm;
pub mod report;
pub mod sequences;
pub mod bounds_catalog;

pub use error::{Error, Result};
