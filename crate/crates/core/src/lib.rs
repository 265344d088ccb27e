//! Partial evaluations and bar constructions for finitary monads on sets,
//! computed on bounded, enumerable instances.

pub mod algebras;
pub mod bar;
pub mod cli;
pub mod counterexamples;
pub mod error;
pub mod monads;
pub mod monoid;
pub mod pev;
pub mod semirings;
pub mod squares;
pub mod terms;

pub use error::{Error, Result};
