//! Structure-preserving, rank-minimizing inference of low-order models from
//! transfer-function and output samples.

pub mod benchmarks;
pub mod compression;
pub mod constraints;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod model;
pub mod optimizer;
pub mod samples;

pub use error::{Error, Result};
pub use linalg::c64;
