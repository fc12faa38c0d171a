pub mod cli;
pub mod error;
pub mod eval;
mod extended_float;
pub mod forecast;
pub mod iou;
pub mod regression;
pub mod series;
pub mod stats;
pub mod svm;
pub mod synthetic;

pub use error::{Error, Result};
