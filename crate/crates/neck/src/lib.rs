//! IO, file formats and the command line for the swinging-neck lab. The
//! numerics live in `neck_core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod output;
pub mod parallel;
pub mod spec;

pub use neck_core;
