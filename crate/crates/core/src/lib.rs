#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod ingest;
pub(crate) mod linalg;
pub mod num;
pub mod scales;
pub mod tenseness;

pub use error::{Error, Result};
pub use num::Real;
pub mod dynamics;
pub mod stats;
pub mod classify;
pub mod formant_extract;
pub mod report;
