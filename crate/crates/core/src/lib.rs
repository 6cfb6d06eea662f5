//! A workbench for the erasure of LF into hereditary Harrop formulas.
//!
//! The pipeline has two sides that are compared by [`harness`]:
//!
//! * [`kernel`] decides LF typing judgments directly;
//! * [`erasure`] and [`encoding`] turn a signature into a logic program and a
//!   judgment into a goal, which [`prover`] then tries to derive.
//!
//! The encoding is not faithful: the erasure is many-to-one, so a goal can
//! be derivable although the judgment it came from is not. [`witness`] holds
//! the smallest known instance.

pub mod concrete;
pub mod encoding;
pub mod erasure;
pub mod generate;
pub mod harness;
pub mod kernel;
pub mod prover;
pub mod syntax;
pub mod witness;

pub use syntax::*;
